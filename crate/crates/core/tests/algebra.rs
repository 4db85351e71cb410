mod common;

use mirrorcone::cli::fixtures;
use mirrorcone::koszulalg::{
    enumerate_deformation_classes, j_algebra_dims, j_algebra_dims_blocks, kernel_in_image_of_f,
    koszul_cohomology_dims, koszul_differential_squares_to_zero, tensor_j_dims,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn koszul_cohomology_equals_j_algebra() {
    for n in 3..=5 {
        let c = n as i64 + 2;
        let j = j_algebra_dims(n, c).unwrap();
        let h = koszul_cohomology_dims(n, c).unwrap();
        assert_eq!(j.pieces, h.pieces, "|I| = {n}");
        assert_eq!(j.by_class(), h.by_class(), "|I| = {n}");
    }
}

#[test]
fn differential_and_image_of_f() {
    for n in 3..=5 {
        assert!(koszul_differential_squares_to_zero(n, n as i64 + 1));
        assert!(kernel_in_image_of_f(n, n as i64 + 1));
    }
}

#[test]
fn z_manifold_convolution_matches_direct() {
    let vt = fixtures::validated("z-manifold").unwrap();
    let conv = tensor_j_dims(&vt, 3).unwrap();
    let direct = j_algebra_dims_blocks(vt.blocks(), 3).unwrap();
    assert_eq!(conv.pieces, direct.pieces);
    assert_eq!(conv.dim(&[0; 9], 0), 1);
}

#[test]
fn cubic_unit_is_one_dimensional() {
    let vt = fixtures::validated("cubic-fourfold").unwrap();
    let t = tensor_j_dims(&vt, 3).unwrap();
    assert_eq!(t.dim(&[0; 6], 0), 1);
    assert_eq!(t.pieces, j_algebra_dims_blocks(vt.blocks(), 3).unwrap().pieces);
}

#[test]
fn verscrit_for_random_volume_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["quartic", "cubic-fourfold", "z-manifold"] {
        let vt = fixtures::validated(name).unwrap();
        for _ in 0..5 {
            let v = common::random_admissible_v(vt.blocks(), vt.n(), &mut rng);
            let c = enumerate_deformation_classes(&vt, &v).unwrap();
            assert_eq!(c.surviving, vt.xi0, "{name} v = {v:?}");
            assert!(c.first_order_nonzero);
            assert!(c.killed_by_sign.iter().all(|k| k.dagger_parity == 1 && k.h_size == 2));
            assert!(c.killed_in_j.iter().all(|k| !k.nonzero_in_j && !vt.xi0.contains(&k.b)));
            assert_eq!(c.killed_in_j.len() + c.surviving.len(), vt.xi.len());
        }
    }
}
