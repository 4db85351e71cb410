mod common;

use mirrorcone::cli::fixtures;
use mirrorcone::fans::hull;
use mirrorcone::fans::lift::{certify_subdivision, LINK_MPCP};
use mirrorcone::fans::subdivision::{convex_generic_weights, regular_subdivision, verify_support};
use mirrorcone::fans::{check_mpcp, check_mpcs, project_config, ProjectedConfig, Subdivision};
use mirrorcone::rat::{self, Q};
use mirrorcone::toricdata::{resolve_weights, LambdaSpec};
use num_traits::Zero;

fn plain_heights(sub: &Subdivision) -> Vec<Q> {
    sub.heights.iter().map(|h| h.value().clone()).collect()
}

fn total_volume(cfg: &ProjectedConfig, sub: &Subdivision) -> Q {
    sub.cells
        .iter()
        .map(|c| hull::polytope_volume(&c.points.iter().map(|&k| cfg.points[k].clone()).collect::<Vec<_>>()).unwrap())
        .fold(Q::zero(), |a, b| a + b)
}

fn assert_matches_oracle(cfg: &ProjectedConfig, sub: &Subdivision) {
    let oracle = common::brute_force_cells(&cfg.points, &plain_heights(sub));
    assert_eq!(sub.cell_sets(), oracle);
    for c in &sub.cells {
        assert!(verify_support(&cfg.points, &sub.heights, &c.points, &c.support));
    }
    assert_eq!(total_volume(cfg, sub), hull::polytope_volume(&cfg.points).unwrap());
}

#[test]
fn quartic_uniform_matches_oracle() {
    let vt = fixtures::validated("quartic").unwrap();
    let cfg = project_config(&vt).unwrap();
    let w = resolve_weights(&vt, &LambdaSpec::Uniform(rat::q(1))).unwrap();
    let sub = regular_subdivision(&cfg, &w, None).unwrap();
    assert_matches_oracle(&cfg, &sub);
    let rep = check_mpcp(&sub, &cfg).unwrap();
    assert!(!rep.is_triangulation);
    let cert = certify_subdivision(&vt, &cfg, &sub).unwrap();
    assert!(!cert.certified);
    assert_eq!(cert.failing_link.as_deref(), Some(LINK_MPCP));
}

#[test]
fn elliptic_random_weights_match_oracle() {
    let vt = fixtures::validated("elliptic").unwrap();
    let cfg = project_config(&vt).unwrap();
    for seed in 0..20 {
        let w = common::random_weights(&vt.xi0, seed);
        let sub = regular_subdivision(&cfg, &w, None).unwrap();
        assert_matches_oracle(&cfg, &sub);
        let rep = check_mpcs(&sub, &cfg, check_mpcp(&sub, &cfg).unwrap()).unwrap();
        assert!(rep.mpcp && rep.mpcs, "seed {seed}");
        assert!(certify_subdivision(&vt, &cfg, &sub).unwrap().certified);
    }
}

#[test]
fn quartic_generic_weights() {
    let vt = fixtures::validated("quartic").unwrap();
    let cfg = project_config(&vt).unwrap();
    for seed in [1, 2] {
        let w = convex_generic_weights(&vt.xi0, seed);
        let sub = regular_subdivision(&cfg, &w, None).unwrap();
        assert_matches_oracle(&cfg, &sub);
        let rep = check_mpcs(&sub, &cfg, check_mpcp(&sub, &cfg).unwrap()).unwrap();
        assert!(rep.mpcp);
        assert_eq!(rep.mpcs, rep.mpcp);
        assert!(certify_subdivision(&vt, &cfg, &sub).unwrap().certified);
    }
}

#[test]
fn quartic_random_weights_match_oracle() {
    let vt = fixtures::validated("quartic").unwrap();
    let cfg = project_config(&vt).unwrap();
    for seed in 100..103 {
        let w = common::random_weights(&vt.xi0, seed);
        let sub = regular_subdivision(&cfg, &w, None).unwrap();
        assert_matches_oracle(&cfg, &sub);
    }
}

#[test]
fn perturbation_refines_and_is_seeded() {
    let vt = fixtures::validated("quartic").unwrap();
    let cfg = project_config(&vt).unwrap();
    let w = resolve_weights(&vt, &LambdaSpec::Uniform(rat::q(1))).unwrap();
    let coarse = regular_subdivision(&cfg, &w, None).unwrap();
    let a = regular_subdivision(&cfg, &w, Some(7)).unwrap();
    let b = regular_subdivision(&cfg, &w, Some(7)).unwrap();
    assert_eq!(a.cell_sets(), b.cell_sets());
    assert!(check_mpcp(&a, &cfg).unwrap().is_triangulation);
    // Every fine cell sits inside a coarse cell.
    for c in a.cell_sets() {
        assert!(coarse.cell_sets().iter().any(|big| c.iter().all(|k| big.contains(k))));
    }
    assert_eq!(total_volume(&cfg, &a), total_volume(&cfg, &coarse));
}
