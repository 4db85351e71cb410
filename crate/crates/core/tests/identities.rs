mod common;

use mirrorcone::bside::{
    build_koszul_mf, build_superpotential, check_split_flips, check_wflips, dualize_mf, expand_delta_squared,
};
use mirrorcone::cli::fixtures;
use mirrorcone::grading::{build_grading_data, check_commutative_square, coker_h};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn delta_squares_to_w() {
    for name in fixtures::NAMES {
        let vt = fixtures::validated(name).unwrap();
        let w = build_superpotential(&vt, None).unwrap();
        let mf = build_koszul_mf(&w).unwrap();
        if vt.n() <= 6 {
            assert!(expand_delta_squared(&w, &mf), "{name}");
        }
    }
}

#[test]
fn w_flips_for_random_volume_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in fixtures::NAMES {
        let vt = fixtures::validated(name).unwrap();
        let w = build_superpotential(&vt, None).unwrap();
        let mf = build_koszul_mf(&w).unwrap();
        for _ in 0..10 {
            let v = common::random_admissible_v(vt.blocks(), vt.n(), &mut rng);
            assert!(check_wflips(&vt, &w, &v).unwrap(), "{name} {v:?}");
            assert!(check_split_flips(&vt, &w, &mf, &v).unwrap(), "{name} {v:?}");
            assert!(dualize_mf(&vt, &mf, &v).unwrap().intertwines_epsilon);
        }
    }
}

#[test]
fn square_and_cokernel() {
    for name in fixtures::NAMES {
        let vt = fixtures::validated(name).unwrap();
        let data = build_grading_data(&vt).unwrap();
        assert!(check_commutative_square(&data).unwrap(), "{name}");
        assert!(coker_h(&vt).unwrap().is_trivial(), "{name}");
    }
}

#[test]
fn dualization_degrees() {
    for (name, expected) in [("quartic", -3), ("cubic-fourfold", -4), ("z-manifold", -6)] {
        let vt = fixtures::validated(name).unwrap();
        let mf = build_koszul_mf(&build_superpotential(&vt, None).unwrap()).unwrap();
        let d = dualize_mf(&vt, &mf, &vt.volume_vector()).unwrap();
        assert_eq!(d.iso_degree, expected);
    }
}
