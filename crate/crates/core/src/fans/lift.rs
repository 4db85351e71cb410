//! Lifting cells of the subdivision to simplices of `Δ̄`, and the chain of
//! checks showing that the superpotential has an isolated singularity.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::conditions::check_mpcp;
use super::subdivision::{regular_subdivision, Subdivision};
use super::{project, project_config, ProjectedConfig};
use crate::error::{Error, Result};
use crate::qlin;
use crate::rat::{self, q, qf, Q};
use crate::toricdata::{ValidatedToricData, MAX_SUBSET_SCAN};

/// A cell `C` of the subdivision together with its lift `C̄ ⊂ Δ̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedCell {
    pub cell: Vec<usize>,
    /// Vertices of `C̄`, sorted.
    pub vertices: Vec<Vec<i64>>,
    /// Indices into `Ξ` of the lattice points in `conv(C̄)`.
    pub covered: Vec<usize>,
}

fn fail(cell: &[usize], reason: impl Into<String>) -> Error {
    Error::CellLiftFailure { cell: cell.to_vec(), reason: reason.into() }
}

/// Barycentric coordinates of `y` with respect to the affinely independent
/// points `verts`, if `y` lies in their affine hull.
fn barycentric(verts: &[Vec<Q>], y: &[Q]) -> Option<Vec<Q>> {
    let dim = y.len();
    let mut a: Vec<Vec<Q>> = (0..dim).map(|i| verts.iter().map(|v| v[i].clone()).collect()).collect();
    a.push(vec![Q::one(); verts.len()]);
    let mut b = y.to_vec();
    b.push(Q::one());
    qlin::solve(&a, &b)
}

fn lift_cell(cell: &[usize], cfg: &ProjectedConfig, vt: &ValidatedToricData) -> Result<LiftedCell> {
    let n = vt.n();
    let mut verts: Vec<Vec<i64>> = Vec::new();
    for &k in cell {
        if k == 0 {
            verts.extend((0..vt.r()).map(|j| vt.block_vector(j)));
        } else {
            verts.push(cfg.xi0[k - 1].clone());
        }
    }
    verts.sort();

    // The lift projects back onto the cell.
    let cell_pts: BTreeSet<Vec<i64>> = cell.iter().map(|&k| cfg.int_point(k)).collect();
    let projected: BTreeSet<Vec<i64>> = verts.iter().map(|v| project(&cfg.blocks, &cfg.kept, v)).collect();
    if projected != cell_pts {
        return Err(fail(cell, "lifted vertices do not project onto the cell"));
    }

    // The lift is a full-dimensional simplex in the hyperplane of Δ̄.
    let qverts: Vec<Vec<Q>> = verts.iter().map(|v| rat::q_vec(v)).collect();
    let diffs: Vec<Vec<Q>> =
        qverts[1..].iter().map(|v| v.iter().zip(&qverts[0]).map(|(a, b)| a - b).collect()).collect();
    if qlin::rank(&diffs) != verts.len() - 1 {
        return Err(fail(cell, "lifted vertices are affinely dependent"));
    }
    if verts.len() != n {
        return Err(fail(cell, format!("lift has {} vertices, a facet-dimensional simplex of Δ̄ needs {n}", verts.len())));
    }

    // Every lattice point of Δ̄ over the cell lies in the lifted simplex.
    let cell_q: Vec<Vec<Q>> = cell.iter().map(|&k| cfg.points[k].clone()).collect();
    let mut covered = Vec::new();
    for (idx, p) in vt.xi.iter().enumerate() {
        let y = rat::q_vec(&project(&cfg.blocks, &cfg.kept, p));
        let Some(mu) = barycentric(&cell_q, &y) else { continue };
        if mu.iter().any(|x| x.is_negative()) {
            continue;
        }
        match barycentric(&qverts, &rat::q_vec(p)) {
            Some(nu) if nu.iter().all(|x| !x.is_negative()) => covered.push(idx),
            _ => return Err(fail(cell, format!("lattice point {p:?} over the cell is outside its lift"))),
        }
    }
    Ok(LiftedCell { cell: cell.to_vec(), vertices: verts, covered })
}

/// Lifts every cell.  Requires a triangulation.
pub fn lift_subdivision(sub: &Subdivision, cfg: &ProjectedConfig, vt: &ValidatedToricData) -> Result<Vec<LiftedCell>> {
    if let Some(c) = sub.cells.iter().find(|c| c.points.len() != cfg.dim + 1) {
        return Err(fail(&c.points, "cell is not a simplex"));
    }
    sub.cells.par_iter().map(|c| lift_cell(&c.points, cfg, vt)).collect()
}

/// `|det|` of the vertices in barycentric coordinates of `Δ̄_K`.
fn relative_volume(verts: &[&Vec<i64>], k: &[usize], d: &[i64]) -> Q {
    let rows: Vec<Vec<Q>> = verts.iter().map(|v| k.iter().map(|&i| qf(v[i], d[i])).collect()).collect();
    qlin::det(&rows).abs()
}

/// Sum of the relative volumes of the `(|K| - 1)`-dimensional faces of the
/// lifted simplices that lie in `R^K`.
pub fn restricted_volume(lifted: &[LiftedCell], k: &[usize], d: &[i64]) -> Q {
    let mut faces: BTreeSet<Vec<&Vec<i64>>> = BTreeSet::new();
    for c in lifted {
        let face: Vec<&Vec<i64>> =
            c.vertices.iter().filter(|v| v.iter().enumerate().all(|(i, &x)| x == 0 || k.contains(&i))).collect();
        if face.len() == k.len() {
            faces.insert(face);
        }
    }
    faces.iter().map(|f| relative_volume(f, k, d)).fold(Q::zero(), |a, b| a + b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub name: String,
    /// `None` when an earlier link failed.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub certified: bool,
    pub links: Vec<Link>,
    pub failing_link: Option<String>,
}

pub const LINK_MPCP: &str = "mpcp";
pub const LINK_LIFT: &str = "lifted_triangulation";
pub const LINK_RESTRICT: &str = "coordinate_restrictions";

/// Runs the chain `mpcp ⇒ lifted triangulation of Δ̄ ⇒ triangulated
/// restrictions to every coordinate subspace`, stopping at the first
/// failing link.
pub fn certify_subdivision(vt: &ValidatedToricData, cfg: &ProjectedConfig, sub: &Subdivision) -> Result<Certificate> {
    let mut links = Vec::new();
    let pending = |name: &str| Link { name: name.into(), passed: None, detail: "not reached".into() };
    let finish = |mut links: Vec<Link>, failed: &str| {
        for name in [LINK_MPCP, LINK_LIFT, LINK_RESTRICT] {
            if !links.iter().any(|l: &Link| l.name == name) {
                links.push(pending(name));
            }
        }
        Certificate { certified: false, links, failing_link: Some(failed.to_string()) }
    };

    let mpcp = check_mpcp(sub, cfg)?;
    if !mpcp.mpcp {
        let detail = mpcp.failures.first().map_or(String::new(), |(c, r)| format!("cell {c:?}: {r}"));
        links.push(Link { name: LINK_MPCP.into(), passed: Some(false), detail });
        return Ok(finish(links, LINK_MPCP));
    }
    links.push(Link { name: LINK_MPCP.into(), passed: Some(true), detail: format!("{} simplices", sub.cells.len()) });

    let lifted = match lift_subdivision(sub, cfg, vt) {
        Ok(l) => l,
        Err(e) if e.is_certificate_failure() => {
            links.push(Link { name: LINK_LIFT.into(), passed: Some(false), detail: e.to_string() });
            return Ok(finish(links, LINK_LIFT));
        }
        Err(e) => return Err(e),
    };
    let all: Vec<usize> = (0..vt.n()).collect();
    let vol = restricted_volume(&lifted, &all, &vt.input.d);
    let covered: BTreeSet<usize> = lifted.iter().flat_map(|c| c.covered.iter().copied()).collect();
    if vol != q(1) || covered.len() != vt.xi.len() {
        let detail = format!(
            "lifted simplices have total volume {} and cover {} of {} lattice points",
            rat::fmt_q(&vol),
            covered.len(),
            vt.xi.len()
        );
        links.push(Link { name: LINK_LIFT.into(), passed: Some(false), detail });
        return Ok(finish(links, LINK_LIFT));
    }
    links.push(Link { name: LINK_LIFT.into(), passed: Some(true), detail: format!("{} lifted simplices", lifted.len()) });

    let n = vt.n();
    if n > MAX_SUBSET_SCAN {
        return Err(Error::IndexSetTooLarge(n));
    }
    let bad: Option<(Vec<usize>, Q)> = (1u64..(1u64 << n) - 1)
        .into_par_iter()
        .filter_map(|mask| {
            let k: Vec<usize> = (0..n).filter(|i| (mask >> i) & 1 == 1).collect();
            let v = restricted_volume(&lifted, &k, &vt.input.d);
            (v != q(1)).then_some((k, v))
        })
        .min_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    if let Some((k, v)) = bad {
        let one_based: Vec<usize> = k.iter().map(|i| i + 1).collect();
        let detail = format!("restriction to coordinates {one_based:?} has volume {}", rat::fmt_q(&v));
        links.push(Link { name: LINK_RESTRICT.into(), passed: Some(false), detail });
        return Ok(finish(links, LINK_RESTRICT));
    }
    links.push(Link {
        name: LINK_RESTRICT.into(),
        passed: Some(true),
        detail: format!("{} coordinate subspaces", (1u64 << n) - 2),
    });
    Ok(Certificate { certified: true, links, failing_link: None })
}

/// Builds the subdivision for `λ` and runs [`certify_subdivision`].
pub fn certify_isolated_singularity(
    vt: &ValidatedToricData,
    weights: &BTreeMap<Vec<i64>, Q>,
    perturb: Option<u64>,
) -> Result<Certificate> {
    let cfg = project_config(vt)?;
    let sub = regular_subdivision(&cfg, weights, perturb)?;
    certify_subdivision(vt, &cfg, &sub)
}
