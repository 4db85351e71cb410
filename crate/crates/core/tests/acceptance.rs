//! Acceptance criteria, one pass/fail line each.  Run with
//! `cargo test --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use mirrorcone::bside::{build_koszul_mf, build_superpotential, check_wflips, dualize_mf};
use mirrorcone::cli::config::{exponent_key, Config, LambdaConfig, RatLit};
use mirrorcone::cli::fixtures;
use mirrorcone::fans::lift::certify_subdivision;
use mirrorcone::fans::subdivision::{convex_generic_weights, regular_subdivision, verify_support};
use mirrorcone::fans::{check_mpcp, check_mpcs, certify_isolated_singularity, project_config};
use mirrorcone::grading::{build_grading_data, check_commutative_square, coker_h};
use mirrorcone::koszulalg::{
    enumerate_deformation_classes, j_algebra_dims, koszul_cohomology_dims, koszul_differential_squares_to_zero,
};
use mirrorcone::rat::{self, Q};
use mirrorcone::toricdata::{
    check_embeddedness, check_nef_partition, check_no_bc, resolve_weights, symmetry_groups, LambdaSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LIMIT_FIXTURES: Duration = Duration::from_secs(5);
const LIMIT_SUBDIVISION: Duration = Duration::from_secs(30);
const LIMIT_ALGEBRA: Duration = Duration::from_secs(60);
const LIMIT_IDENTITIES: Duration = Duration::from_secs(10);

/// Collects named sub-checks of one criterion.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failed.push(name.to_string());
        }
    }

    /// Runs `f`, counting an error or panic as a failure.
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<bool, String> + std::panic::UnwindSafe) {
        match std::panic::catch_unwind(f) {
            Ok(Ok(true)) => {}
            Ok(Ok(false)) => self.failed.push(name.to_string()),
            Ok(Err(e)) => self.failed.push(format!("{name} ({e})")),
            Err(_) => self.failed.push(format!("{name} (panicked)")),
        }
    }
}

fn report(number: usize, title: &str, checks: Checks, elapsed: Duration, limit: Option<Duration>) -> bool {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = checks.failed.is_empty() && in_time;
    let timing = match limit {
        Some(l) => format!("{:.2}s, limit {}s", elapsed.as_secs_f64(), l.as_secs()),
        None => format!("{:.2}s", elapsed.as_secs_f64()),
    };
    println!("{} criterion {number}: {title} [{timing}]", if ok { "PASS" } else { "FAIL" });
    for f in &checks.failed {
        println!("    failed: {f}");
    }
    if !in_time {
        println!("    failed: time limit exceeded");
    }
    ok
}

fn e2s<T>(r: mirrorcone::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn criterion_fixtures() -> bool {
    let start = Instant::now();
    let mut c = Checks::default();
    c.run("quartic", || {
        let vt = e2s(fixtures::validated("quartic"))?;
        let g = e2s(symmetry_groups(&vt))?;
        Ok(vt.xi0.len() == 22
            && g.g.factors_i64() == vec![4]
            && g.gamma.is_trivial()
            && e2s(check_nef_partition(&vt))?.holds
            && e2s(check_embeddedness(&vt))?.holds
            && e2s(check_no_bc(&vt))?.holds)
    });
    c.run("cubic fourfold", || {
        let vt = e2s(fixtures::validated("cubic-fourfold"))?;
        let g = e2s(symmetry_groups(&vt))?;
        let emb = e2s(check_embeddedness(&vt))?;
        Ok(vt.xi0.len() == 24
            && g.gamma.is_trivial()
            && !emb.holds
            && emb.witnesses.contains(&vec![0, 3, 4])
            && !e2s(check_nef_partition(&vt))?.holds
            && !e2s(check_no_bc(&vt))?.holds)
    });
    c.run("z-manifold", || {
        let vt = e2s(fixtures::validated("z-manifold"))?;
        let g = e2s(symmetry_groups(&vt))?;
        let emb = e2s(check_embeddedness(&vt))?;
        Ok(vt.xi0.len() == 36 && g.gamma.factors_i64() == vec![3] && !emb.holds && emb.witnesses.contains(&vec![0, 3, 6]))
    });
    report(1, "fixture values", c, start.elapsed(), Some(LIMIT_FIXTURES))
}

fn criterion_subdivision() -> bool {
    let start = Instant::now();
    let mut c = Checks::default();
    c.run("quartic λ ≡ 1 equals brute-force oracle", || {
        let vt = e2s(fixtures::validated("quartic"))?;
        let cfg = e2s(project_config(&vt))?;
        let w = e2s(resolve_weights(&vt, &LambdaSpec::Uniform(rat::q(1))))?;
        let sub = e2s(regular_subdivision(&cfg, &w, None))?;
        let hs: Vec<Q> = sub.heights.iter().map(|h| h.value().clone()).collect();
        Ok(sub.cell_sets() == common::brute_force_cells(&cfg.points, &hs))
    });
    c.run("elliptic, 20 random λ equal brute-force oracle", || {
        let vt = e2s(fixtures::validated("elliptic"))?;
        let cfg = e2s(project_config(&vt))?;
        for seed in 0..20 {
            let w = common::random_weights(&vt.xi0, seed);
            let sub = e2s(regular_subdivision(&cfg, &w, None))?;
            let hs: Vec<Q> = sub.heights.iter().map(|h| h.value().clone()).collect();
            if sub.cell_sets() != common::brute_force_cells(&cfg.points, &hs) {
                return Ok(false);
            }
        }
        Ok(true)
    });
    for name in ["elliptic", "quartic"] {
        c.run(&format!("{name}: generic λ gives MPCP, MPCS == MPCP, certified cells"), move || {
            let vt = e2s(fixtures::validated(name))?;
            let cfg = e2s(project_config(&vt))?;
            let w = convex_generic_weights(&vt.xi0, 1);
            let sub = e2s(regular_subdivision(&cfg, &w, None))?;
            let rep = e2s(check_mpcs(&sub, &cfg, e2s(check_mpcp(&sub, &cfg))?))?;
            let supports = sub.cells.iter().all(|cell| verify_support(&cfg.points, &sub.heights, &cell.points, &cell.support));
            let cert = e2s(certify_subdivision(&vt, &cfg, &sub))?;
            let iso = e2s(certify_isolated_singularity(&vt, &w, None))?;
            Ok(rep.mpcp && rep.mpcs == rep.mpcp && supports && cert.certified && iso.certified)
        });
    }
    c.run("degenerate λ: no triangulation, failing link named", || {
        let vt = e2s(fixtures::validated("quartic"))?;
        let cfg = e2s(project_config(&vt))?;
        let w = e2s(resolve_weights(&vt, &LambdaSpec::Uniform(rat::q(1))))?;
        let sub = e2s(regular_subdivision(&cfg, &w, None))?;
        let rep = e2s(check_mpcp(&sub, &cfg))?;
        let cert = e2s(certify_subdivision(&vt, &cfg, &sub))?;
        Ok(!rep.is_triangulation && !cert.certified && cert.failing_link.as_deref() == Some("mpcp"))
    });
    report(2, "subdivision suite", c, start.elapsed(), Some(LIMIT_SUBDIVISION))
}

fn criterion_algebra() -> bool {
    let start = Instant::now();
    let mut c = Checks::default();
    for n in 3..=5usize {
        c.run(&format!("J^I equals H(K(dW0)) for |I| = {n}"), move || {
            let cut = n as i64 + 2;
            let j = e2s(j_algebra_dims(n, cut))?;
            let h = e2s(koszul_cohomology_dims(n, cut))?;
            Ok(j.by_class() == h.by_class() && j.pieces == h.pieces)
        });
        c.check(&format!("ι² = 0 for |I| = {n}"), koszul_differential_squares_to_zero(n, n as i64 + 2));
    }
    for (name, count) in [("quartic", 22), ("cubic-fourfold", 24), ("z-manifold", 36)] {
        c.run(&format!("{name}: {count} surviving classes"), move || {
            let vt = e2s(fixtures::validated(name))?;
            let cls = e2s(enumerate_deformation_classes(&vt, &vt.volume_vector()))?;
            Ok(cls.surviving.len() == count
                && cls.surviving == vt.xi0
                && cls.first_order_nonzero
                && cls.killed_by_sign.iter().all(|k| k.h_size == 2 && k.dagger_parity == 1))
        });
    }
    report(3, "algebra oracle suite", c, start.elapsed(), Some(LIMIT_ALGEBRA))
}

fn criterion_identities() -> bool {
    let start = Instant::now();
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for name in fixtures::NAMES {
        let vs: Vec<Vec<i64>> = {
            let vt = fixtures::validated(name).expect("fixture");
            (0..10).map(|_| common::random_admissible_v(vt.blocks(), vt.n(), &mut rng)).collect()
        };
        c.run(&format!("{name}: δ² = W, ε(W) = -W, square, coker, dual degree"), move || {
            let vt = e2s(fixtures::validated(name))?;
            let w = e2s(build_superpotential(&vt, None))?;
            let mf = e2s(build_koszul_mf(&w))?;
            let mut ok = e2s(check_wflips(&vt, &w, &vt.volume_vector()))?;
            for v in &vs {
                ok &= e2s(check_wflips(&vt, &w, v))?;
            }
            let data = e2s(build_grading_data(&vt))?;
            ok &= e2s(check_commutative_square(&data))?;
            ok &= e2s(coker_h(&vt))?.is_trivial();
            let dual = e2s(dualize_mf(&vt, &mf, &vt.volume_vector()))?;
            ok &= dual.intertwines && dual.iso_degree == vt.r() as i64 - vt.n() as i64;
            Ok(ok)
        });
    }
    c.run("dual degrees -3, -4, -6", || {
        let mut got = Vec::new();
        for name in ["quartic", "cubic-fourfold", "z-manifold"] {
            let vt = e2s(fixtures::validated(name))?;
            let mf = e2s(build_koszul_mf(&e2s(build_superpotential(&vt, None))?))?;
            got.push(e2s(dualize_mf(&vt, &mf, &vt.volume_vector()))?.iso_degree);
        }
        Ok(got == vec![-3, -4, -6])
    });
    report(4, "identity suite", c, start.elapsed(), Some(LIMIT_IDENTITIES))
}

fn temp_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("mirrorcone-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&d).expect("temp dir");
    d
}

/// Fixture configs, plus the quartic with a generic weight map so the
/// subdivision section is exercised.
fn determinism_configs() -> Vec<(String, Config)> {
    let mut out: Vec<(String, Config)> =
        fixtures::NAMES.iter().map(|n| (n.to_string(), fixtures::config(n).expect("fixture"))).collect();
    let vt = fixtures::validated("quartic").expect("fixture");
    let mut c = fixtures::config("quartic").expect("fixture");
    let w: BTreeMap<String, RatLit> = convex_generic_weights(&vt.xi0, 1)
        .into_iter()
        .map(|(p, x)| (exponent_key(&p), RatLit::Str(rat::fmt_q(&x))))
        .collect();
    c.lambda = Some(LambdaConfig::Map(w));
    out.push(("quartic-generic".into(), c));
    out
}

fn criterion_determinism() -> bool {
    let start = Instant::now();
    let mut c = Checks::default();
    let dir = temp_dir();
    for (name, cfg) in determinism_configs() {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, cfg.to_json_pretty()).expect("write config");
        let run = |threads: &str| {
            Command::new(env!("CARGO_BIN_EXE_mirrorcone"))
                .env("MIRRORCONE_THREADS", threads)
                .arg("analyze")
                .arg(&path)
                .args(["--algebra", "--cutoff", "4"])
                .output()
                .expect("run binary")
        };
        let a = run("1");
        let b = run("1");
        let d = run("4");
        c.check(&format!("{name}: exit status"), a.status.success() && d.status.success());
        c.check(&format!("{name}: two runs identical"), a.stdout == b.stdout);
        c.check(&format!("{name}: 1 and 4 threads identical"), a.stdout == d.stdout);
        c.check(&format!("{name}: nonempty report"), !a.stdout.is_empty());
    }
    let _ = std::fs::remove_dir_all(&dir);
    report(5, "determinism across runs and thread counts", c, start.elapsed(), None)
}

fn main() {
    let results = [
        criterion_fixtures(),
        criterion_subdivision(),
        criterion_algebra(),
        criterion_identities(),
        criterion_determinism(),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
