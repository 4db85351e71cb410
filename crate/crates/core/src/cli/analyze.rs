//! The analysis pipeline and its JSON report.
//!
//! Object keys are emitted in sorted order and every list has a fixed
//! order, so identical input gives byte-identical output.

use std::fmt;

use serde_json::{json, Value};

use crate::bside;
use crate::cli::config::Config;
use crate::error::Error;
use crate::fans::{self, conditions, lift, subdivision};
use crate::grading;
use crate::intlat::FiniteAbelianGroup;
use crate::koszulalg;
use crate::rat;
use crate::toricdata::{self, ValidatedToricData};

pub const VERSION: &str = concat!("mirrorcone ", env!("CARGO_PKG_VERSION"));

/// Every report section, in emission order.
pub const SECTIONS: [&str; 9] =
    ["tool", "input", "conditions", "groups", "xi", "subdivision", "grading", "bside", "algebra"];

/// An error together with the module that raised it.
#[derive(Debug)]
pub struct Tagged {
    pub module: &'static str,
    pub error: Error,
}

impl fmt::Display for Tagged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.module, self.error)
    }
}

impl std::error::Error for Tagged {}

trait Tag<T> {
    fn tag(self, module: &'static str) -> Result<T, Tagged>;
}

impl<T> Tag<T> for crate::Result<T> {
    fn tag(self, module: &'static str) -> Result<T, Tagged> {
        self.map_err(|error| Tagged { module, error })
    }
}

/// Process exit code for an error: 1 for axiom failures, 3 for failed
/// internal certificates, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_domain_failure() {
        1
    } else if e.is_certificate_failure() {
        3
    } else {
        2
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Sections to emit; `None` means all applicable ones.
    pub sections: Option<Vec<String>>,
    pub algebra: bool,
    pub cutoff: Option<usize>,
    pub perturb: Option<u64>,
}

impl AnalyzeOptions {
    /// Command-line options override the config's `analysis` block.
    pub fn merged(&self, config: &Config) -> AnalyzeOptions {
        let file = config.analysis.clone().unwrap_or_default();
        AnalyzeOptions {
            sections: self.sections.clone().or(file.sections),
            algebra: self.algebra || file.algebra.unwrap_or(false),
            cutoff: self.cutoff.or(file.cutoff),
            perturb: self.perturb.or(file.perturb),
        }
    }

    fn wants(&self, section: &str) -> bool {
        self.sections.as_ref().is_none_or(|s| s.iter().any(|x| x == section))
    }
}

/// Result of an analysis: the report and whether an internal certificate
/// failed even though its hypotheses held.
pub struct Analysis {
    pub report: Value,
    pub certificate_failure: bool,
}

fn group(g: &FiniteAbelianGroup) -> Value {
    json!(g.factors_i64())
}

fn one_based(ks: &[Vec<usize>]) -> Value {
    json!(ks.iter().map(|k| k.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn input_section(config: &Config) -> Value {
    serde_json::to_value(config).expect("config serializes")
}

fn conditions_section(vt: &ValidatedToricData) -> Result<Value, Tagged> {
    let nef = toricdata::check_nef_partition(vt).tag("toricdata")?;
    let emb = toricdata::check_embeddedness(vt).tag("toricdata")?;
    let nobc = toricdata::check_no_bc(vt).tag("toricdata")?;
    let witness = nef.witness.map(|w| {
        json!({"block": w.block + 1, "m": w.m, "pairing": rat::fmt_q(&w.pairing)})
    });
    Ok(json!({
        "nef_partition": {"holds": nef.holds, "witness": witness},
        "embeddedness": {"holds": emb.holds, "witnesses": one_based(&emb.witnesses)},
        "no_bc": {"holds": nobc.holds, "witnesses": one_based(&nobc.witnesses)},
    }))
}

fn groups_section(vt: &ValidatedToricData) -> Result<Value, Tagged> {
    let s = toricdata::symmetry_groups(vt).tag("toricdata")?;
    Ok(json!({
        "G": group(&s.g),
        "G_star": group(&s.g_star),
        "Gamma": group(&s.gamma),
        "diagonal_order": s.diagonal_order.to_string(),
    }))
}

fn xi_section(vt: &ValidatedToricData) -> Value {
    json!({"xi_count": vt.xi.len(), "xi0_count": vt.xi0.len(), "xi": vt.xi, "xi0": vt.xi0})
}

fn subdivision_section(vt: &ValidatedToricData, perturb: Option<u64>) -> Result<Option<(Value, bool)>, Tagged> {
    let Some(weights) = vt.lambda_values().tag("toricdata")? else {
        return Ok(None);
    };
    let cfg = fans::project_config(vt).tag("fans")?;
    let sub = subdivision::regular_subdivision(&cfg, &weights, perturb).tag("fans")?;
    let rep = conditions::check_mpcp(&sub, &cfg).tag("fans")?;
    let rep = conditions::check_mpcs(&sub, &cfg, rep).tag("fans")?;
    let cert = lift::certify_subdivision(vt, &cfg, &sub).tag("fans")?;
    let cells: Vec<Vec<&str>> =
        sub.cells.iter().map(|c| c.points.iter().map(|&k| cfg.ids[k].as_str()).collect()).collect();
    let failures: Vec<Value> = rep
        .failures
        .iter()
        .map(|(c, r)| json!({"cell": c.iter().map(|&k| cfg.ids[k].as_str()).collect::<Vec<_>>(), "reason": r}))
        .collect();
    let links: Vec<Value> =
        cert.links.iter().map(|l| json!({"name": l.name, "passed": l.passed, "detail": l.detail})).collect();
    let n_minus_r = vt.n() - vt.r();
    let value = json!({
        "perturbation_seed": perturb,
        "cell_count": sub.cells.len(),
        "cells": cells,
        "is_triangulation": rep.is_triangulation,
        "refines_product_fan": rep.refines_product_fan,
        "rays_are_xi0": rep.rays_are_xi0,
        "mpcp": rep.mpcp,
        "mpcs": rep.mpcs,
        "mpcs_equals_mpcp": if n_minus_r <= 4 { Some(rep.mpcs == rep.mpcp) } else { None },
        "failures": failures,
        "isolated_singularity": {
            "certified": cert.certified,
            "failing_link": cert.failing_link,
            "links": links,
        },
    });
    // With MPCP established, a broken later link would contradict the
    // lifting argument rather than reflect the input.
    Ok(Some((value, rep.mpcp && !cert.certified)))
}

fn grading_section(vt: &ValidatedToricData) -> Result<Value, Tagged> {
    let data = grading::build_grading_data(vt).tag("grading")?;
    let mut well_defined = serde_json::Map::new();
    for f in data.morphisms() {
        well_defined.insert(f.name.clone(), json!(data.morphism_well_defined(f).tag("grading")?));
    }
    let square = grading::check_commutative_square(&data).tag("grading")?;
    let coker = grading::coker_h(vt).tag("grading")?;
    Ok(json!({
        "morphisms_well_defined": well_defined,
        "square_commutes": square,
        "coker_h": group(&coker),
        "coker_h_trivial": coker.is_trivial(),
    }))
}

fn bside_section(vt: &ValidatedToricData, config: &Config) -> Result<Value, Tagged> {
    let vals = match config.b_valuations().tag("cli")? {
        Some(v) => Some(v),
        None => vt.lambda_values().tag("toricdata")?,
    };
    let w = bside::build_superpotential(vt, vals.as_ref()).tag("bside")?;
    let mf = bside::build_koszul_mf(&w).tag("bside")?;
    let v = vt.volume_vector();
    let data = grading::build_grading_data(vt).tag("grading")?;
    let dual = bside::dualize_mf(vt, &mf, &v).tag("bside")?;
    let terms: Vec<Value> = w
        .terms
        .iter()
        .map(|t| json!({"exp": t.exp, "sign": t.sign, "val": t.val.as_ref().map(rat::fmt_q), "block": t.block.map(|j| j + 1)}))
        .collect();
    Ok(json!({
        "v": v,
        "term_count": w.terms.len(),
        "terms": terms,
        "homogeneous": true,
        "wflips": bside::check_wflips(vt, &w, &v).tag("bside")?,
        "split_flips": bside::check_split_flips(vt, &w, &mf, &v).tag("bside")?,
        "delta_squared_is_w": true,
        "delta_degree_is_one": bside::check_delta_degree(vt, &w, &mf, &data).tag("bside")?,
        "dual": {
            "squares_to_minus_w": dual.dual_squares_to_minus_w,
            "intertwines": dual.intertwines,
            "intertwines_epsilon": dual.intertwines_epsilon,
            "iso_degree": dual.iso_degree,
            "iso_degree_class": {"j": dual.iso_degree_class.0, "m": dual.iso_degree_class.1},
        },
    }))
}

fn algebra_section(vt: &ValidatedToricData, cutoff: usize) -> Result<Value, Tagged> {
    let c = cutoff as i64;
    let dims = koszulalg::tensor_j_dims(vt, c).tag("koszulalg")?;
    let mut sizes: Vec<usize> = vt.blocks().iter().map(|b| b.len()).collect();
    sizes.sort();
    sizes.dedup();
    let mut oracle = Vec::new();
    for s in sizes {
        let j = koszulalg::j_algebra_dims(s, c).tag("koszulalg")?;
        let h = koszulalg::koszul_cohomology_dims(s, c).tag("koszulalg")?;
        oracle.push(json!({"block_size": s, "matches": j.pieces == h.pieces}));
    }
    let v = vt.volume_vector();
    let cls = koszulalg::enumerate_deformation_classes(vt, &v).tag("koszulalg")?;
    let curv = koszulalg::enumerate_curvature_candidates(vt).tag("koszulalg")?;
    let nobc = toricdata::check_no_bc(vt).tag("toricdata")?;
    Ok(json!({
        "cutoff": cutoff,
        "j_dims": dims.to_json(),
        "koszul_oracle": oracle,
        "deformation_classes": {
            "surviving": cls.surviving,
            "surviving_count": cls.surviving.len(),
            "killed_by_sign": cls.killed_by_sign.len(),
            "killed_in_j": cls.killed_in_j.iter().map(|k| k.b.clone()).collect::<Vec<_>>(),
            "first_order_nonzero": cls.first_order_nonzero,
            "matches_xi0": cls.surviving == vt.xi0,
        },
        "curvature_candidates": one_based(&curv),
        "curvature_matches_no_bc": curv == nobc.witnesses,
    }))
}

/// Runs the pipeline on a parsed config.
pub fn analyze(config: &Config, opts: &AnalyzeOptions) -> Result<Analysis, Tagged> {
    let opts = opts.merged(config);
    if let Some(s) = &opts.sections {
        if let Some(bad) = s.iter().find(|x| !SECTIONS.contains(&x.as_str())) {
            return Err(Tagged {
                module: "cli",
                error: Error::Config(format!("unknown section {bad:?}; known: {}", SECTIONS.join(", "))),
            });
        }
    }
    if opts.algebra && opts.cutoff.is_none() {
        return Err(Tagged { module: "cli", error: Error::Config("--algebra requires --cutoff N".into()) });
    }
    let input = config.to_input().tag("cli")?;
    let vt = toricdata::validate(input).tag("toricdata")?;
    let mut report = serde_json::Map::new();
    let mut certificate_failure = false;
    if opts.wants("tool") {
        report.insert("tool".into(), json!(VERSION));
    }
    if opts.wants("input") {
        report.insert("input".into(), input_section(config));
    }
    if opts.wants("conditions") {
        report.insert("conditions".into(), conditions_section(&vt)?);
    }
    if opts.wants("groups") {
        report.insert("groups".into(), groups_section(&vt)?);
    }
    if opts.wants("xi") {
        report.insert("xi".into(), xi_section(&vt));
    }
    if opts.wants("subdivision") {
        if let Some((v, failed)) = subdivision_section(&vt, opts.perturb)? {
            report.insert("subdivision".into(), v);
            certificate_failure |= failed;
        }
    }
    if opts.wants("grading") {
        report.insert("grading".into(), grading_section(&vt)?);
    }
    if opts.wants("bside") {
        report.insert("bside".into(), bside_section(&vt, config)?);
    }
    if opts.algebra && opts.wants("algebra") {
        report.insert("algebra".into(), algebra_section(&vt, opts.cutoff.expect("checked"))?);
    }
    Ok(Analysis { report: Value::Object(report), certificate_failure })
}

/// Pretty-printed report text with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;

    #[test]
    fn fixture_reports() {
        let a = analyze(&fixtures::config("quartic").unwrap(), &AnalyzeOptions::default()).unwrap();
        assert_eq!(a.report["groups"]["G"], json!([4]));
        assert_eq!(a.report["groups"]["Gamma"], json!([]));
        assert_eq!(a.report["xi"]["xi0_count"], json!(22));
        assert!(a.report.get("subdivision").is_none());

        let a = analyze(&fixtures::config("z-manifold").unwrap(), &AnalyzeOptions::default()).unwrap();
        assert_eq!(a.report["groups"]["Gamma"], json!([3]));
        assert_eq!(a.report["conditions"]["embeddedness"]["holds"], json!(false));
        assert!(a.report["conditions"]["embeddedness"]["witnesses"].as_array().unwrap().contains(&json!([1, 4, 7])));
    }

    #[test]
    fn sections_filter() {
        let opts = AnalyzeOptions { sections: Some(vec!["conditions".into()]), ..Default::default() };
        let a = analyze(&fixtures::config("quartic").unwrap(), &opts).unwrap();
        let keys: Vec<&String> = a.report.as_object().unwrap().keys().collect();
        assert_eq!(keys, vec!["conditions"]);
        let opts = AnalyzeOptions { sections: Some(vec!["nope".into()]), ..Default::default() };
        assert!(analyze(&fixtures::config("quartic").unwrap(), &opts).is_err());
    }

    #[test]
    fn elliptic_full_report() {
        let opts = AnalyzeOptions { algebra: true, cutoff: Some(3), ..Default::default() };
        let a = analyze(&fixtures::config("elliptic").unwrap(), &opts).unwrap();
        assert!(!a.certificate_failure);
        assert_eq!(a.report["subdivision"]["mpcp"], json!(true));
        assert_eq!(a.report["subdivision"]["isolated_singularity"]["certified"], json!(true));
        assert_eq!(a.report["algebra"]["curvature_matches_no_bc"], json!(true));
        assert_eq!(a.report["algebra"]["deformation_classes"]["matches_xi0"], json!(true));
        assert_eq!(render(&a.report), render(&analyze(&fixtures::config("elliptic").unwrap(), &opts).unwrap().report));
    }

    #[test]
    fn algebra_needs_cutoff() {
        let opts = AnalyzeOptions { algebra: true, ..Default::default() };
        let e = analyze(&fixtures::config("elliptic").unwrap(), &opts).err().unwrap();
        assert_eq!(exit_code(&e.error), 2);
    }
}
