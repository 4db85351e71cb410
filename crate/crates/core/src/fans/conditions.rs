//! The MPCP and MPCS conditions on a subdivision.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::hull;
use super::subdivision::Subdivision;
use super::ProjectedConfig;
use crate::error::Result;
use crate::intlat::{self, IntMatrix};
use crate::qlin;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub mpcp: bool,
    pub mpcs: bool,
    pub is_triangulation: bool,
    pub refines_product_fan: bool,
    pub rays_are_xi0: bool,
    /// `(cell, reason)` for every check that failed, in cell order.
    pub failures: Vec<(Vec<usize>, String)>,
}

/// Union of the block-`j` supports of the canonical lifts of the listed
/// points.
fn block_support(cfg: &ProjectedConfig, pts: &[usize], block: &[usize]) -> BTreeSet<usize> {
    pts.iter()
        .filter(|&&k| k != 0)
        .flat_map(|&k| block.iter().copied().filter(move |&i| cfg.lifts[k][i] != 0))
        .collect()
}

/// Number of indices of each block missing from the generators' supports.
fn omitted_per_block(cfg: &ProjectedConfig, pts: &[usize]) -> Vec<usize> {
    cfg.blocks.iter().map(|b| b.len() - block_support(cfg, pts, b).len()).collect()
}

/// Triangulation, product-fan refinement and vertex checks.  The `mpcs`
/// field is left false; see [`check_mpcs`].
pub fn check_mpcp(sub: &Subdivision, cfg: &ProjectedConfig) -> Result<ConditionReport> {
    let mut failures = Vec::new();
    let mut is_triangulation = true;
    let mut refines = true;
    for cell in &sub.cells {
        if cell.points.len() != cfg.dim + 1 {
            is_triangulation = false;
            failures.push((cell.points.clone(), format!("cell has {} points, not a simplex", cell.points.len())));
        }
        if !cell.points.contains(&0) {
            refines = false;
            failures.push((cell.points.clone(), "cell does not contain the origin".into()));
        }
        for (j, omitted) in omitted_per_block(cfg, &cell.points).into_iter().enumerate() {
            if omitted == 0 {
                refines = false;
                failures.push((cell.points.clone(), format!("block {} supports cover the whole block", j + 1)));
            }
        }
    }
    let mut rays = true;
    let covered: BTreeSet<usize> = sub.cells.iter().flat_map(|c| c.points.iter().copied()).collect();
    for k in 0..cfg.len() {
        if !covered.contains(&k) {
            rays = false;
            failures.push((vec![k], format!("point {} lies in no cell", cfg.ids[k])));
        }
    }
    let non_vertex: Vec<(Vec<usize>, String)> = sub
        .cells
        .par_iter()
        .filter(|c| c.points.len() > cfg.dim + 1)
        .map(|c| -> Result<Vec<(Vec<usize>, String)>> {
            let local: Vec<_> = c.points.iter().map(|&k| cfg.points[k].clone()).collect();
            let mut out = Vec::new();
            for (pos, &k) in c.points.iter().enumerate() {
                if !hull::is_vertex(&local, pos)? {
                    out.push((c.points.clone(), format!("point {} is not a vertex of its cell", cfg.ids[k])));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    if !non_vertex.is_empty() {
        rays = false;
        failures.extend(non_vertex);
    }
    Ok(ConditionReport {
        mpcp: is_triangulation && refines && rays,
        mpcs: false,
        is_triangulation,
        refines_product_fan: refines,
        rays_are_xi0: rays,
        failures,
    })
}

/// Whether the cone spanned by the listed points is unimodular in `M`.
pub fn is_unimodular(cfg: &ProjectedConfig, gens: &[usize]) -> Result<bool> {
    if gens.is_empty() {
        return Ok(true);
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &k in gens {
        match cfg.m_coordinates(&cfg.int_point(k))? {
            Some(c) => rows.push(c),
            None => return Ok(false),
        }
    }
    let qrows: Vec<Vec<_>> =
        rows.iter().map(|r| r.iter().map(|x| crate::rat::Q::from_integer(x.clone())).collect()).collect();
    if qlin::rank(&qrows) != gens.len() {
        return Ok(false);
    }
    let cols = rows[0].len();
    let m = IntMatrix::from_rows(rows, cols)?;
    Ok(intlat::smith_invariants(&m).iter().all(|x| x.is_one()))
}

/// Cones through the origin whose generators omit at least two indices of
/// every block; these are the cones over which `Y_λ` must be smooth.
pub fn boundary_relevant_cones(sub: &Subdivision, cfg: &ProjectedConfig) -> Vec<Vec<usize>> {
    let mut cones = BTreeSet::new();
    for cell in sub.cells.iter().filter(|c| c.points.contains(&0)) {
        let gens: Vec<usize> = cell.points.iter().copied().filter(|&k| k != 0).collect();
        for mask in 1u64..(1u64 << gens.len()) {
            let s: Vec<usize> = (0..gens.len()).filter(|i| (mask >> i) & 1 == 1).map(|i| gens[i]).collect();
            if omitted_per_block(cfg, &s).iter().all(|&o| o >= 2) {
                cones.insert(s);
            }
        }
    }
    cones.into_iter().collect()
}

/// MPCS: MPCP holds and every boundary-relevant cone is unimodular.
pub fn check_mpcs(sub: &Subdivision, cfg: &ProjectedConfig, mut report: ConditionReport) -> Result<ConditionReport> {
    if !report.mpcp {
        report.mpcs = false;
        return Ok(report);
    }
    let cones = boundary_relevant_cones(sub, cfg);
    let bad: Vec<Vec<usize>> = cones
        .par_iter()
        .map(|c| is_unimodular(cfg, c).map(|u| (!u).then(|| c.clone())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for c in &bad {
        report.failures.push((c.clone(), "boundary-relevant cone is not unimodular".into()));
    }
    report.mpcs = bad.is_empty();
    Ok(report)
}
