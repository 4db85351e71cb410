//! Regular subdivisions of the projected point configuration, the MPCP and
//! MPCS conditions, lifting cells to the simplex `Δ̄`, and the tropical
//! isolated-singularity certificate.

pub mod conditions;
pub mod hull;
pub mod lift;
pub mod subdivision;

use num_bigint::BigInt;

use crate::error::Result;
use crate::intlat::{self, Sublattice};
use crate::rat::{self, Q};
use crate::toricdata::ValidatedToricData;

pub use conditions::{check_mpcp, check_mpcs, ConditionReport};
pub use lift::{certify_isolated_singularity, lift_subdivision, Certificate, LiftedCell};
pub use subdivision::{regular_subdivision, Height, Subdivision};

/// Identifier of the origin in reports.
pub const ORIGIN_ID: &str = "origin";

/// The images `π(p)`, `p ∈ Ξ₀`, together with the origin.
///
/// Point 0 is the origin; point `k >= 1` is `π(Ξ₀[k - 1])`.
#[derive(Clone, Debug)]
pub struct ProjectedConfig {
    pub dim: usize,
    pub ids: Vec<String>,
    pub points: Vec<Vec<Q>>,
    /// Canonical lift of each point: zero at the dropped coordinates, then
    /// the per-block minimum subtracted.
    pub lifts: Vec<Vec<i64>>,
    /// `Ξ₀` in configuration order.
    pub xi0: Vec<Vec<i64>>,
    pub blocks: Vec<Vec<usize>>,
    /// Coordinates of `Z^I` kept by the projection.
    pub kept: Vec<usize>,
    /// `M = π(M̄)` in the kept coordinates.
    pub m_lattice: Sublattice,
}

/// `π(m)_i = m_i - m_{last(j)}` for each kept coordinate `i ∈ I_j`.
pub fn project(blocks: &[Vec<usize>], kept: &[usize], m: &[i64]) -> Vec<i64> {
    let last: Vec<(usize, usize)> =
        blocks.iter().flat_map(|b| {
            let l = *b.iter().max().expect("nonempty");
            b.iter().map(move |&i| (i, l))
        }).collect();
    kept.iter()
        .map(|&i| {
            let l = last.iter().find(|(a, _)| *a == i).expect("index in some block").1;
            m[i] - m[l]
        })
        .collect()
}

impl ProjectedConfig {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Canonical lift of a projected integer vector.
    pub fn canonical_lift(&self, y: &[i64]) -> Vec<i64> {
        let n: usize = self.blocks.iter().map(|b| b.len()).sum();
        let mut m = vec![0i64; n];
        for (k, &i) in self.kept.iter().enumerate() {
            m[i] = y[k];
        }
        for b in &self.blocks {
            let lo = b.iter().map(|&i| m[i]).min().expect("nonempty");
            for &i in b {
                m[i] -= lo;
            }
        }
        m
    }

    /// Integer coordinates of point `k`.
    pub fn int_point(&self, k: usize) -> Vec<i64> {
        self.points[k].iter().map(|x| rat::to_i64(&x.to_integer()).expect("small coordinates")).collect()
    }

    /// Coordinates of an element of `M` in the Hermite basis of `M`.
    pub fn m_coordinates(&self, y: &[i64]) -> Result<Option<Vec<BigInt>>> {
        intlat::coordinates(&self.m_lattice, &rat::big_vec(y))
    }

    /// Index of the point with the given canonical lift, if any.
    pub fn index_of_lift(&self, lift: &[i64]) -> Option<usize> {
        self.lifts.iter().position(|l| l == lift)
    }
}

/// Projects `Ξ₀` and the origin to `M_R`, dropping the largest index of each
/// block.
pub fn project_config(vt: &ValidatedToricData) -> Result<ProjectedConfig> {
    let blocks = vt.blocks().to_vec();
    let dropped: Vec<usize> = blocks.iter().map(|b| *b.iter().max().expect("nonempty")).collect();
    let kept: Vec<usize> = (0..vt.n()).filter(|i| !dropped.contains(i)).collect();
    let dim = kept.len();
    let mut ids = vec![ORIGIN_ID.to_string()];
    let mut ints = vec![vec![0i64; dim]];
    for p in &vt.xi0 {
        ids.push(crate::cli::config::exponent_key(p));
        ints.push(project(&blocks, &kept, p));
    }
    let gens: Vec<Vec<BigInt>> =
        vt.m_bar.basis().to_i64_rows().iter().map(|r| rat::big_vec(&project(&blocks, &kept, r))).collect();
    let m_lattice = intlat::lattice_from_generators(dim, &gens)?;
    let mut cfg = ProjectedConfig {
        dim,
        ids,
        points: ints.iter().map(|r| rat::q_vec(r)).collect(),
        lifts: Vec::new(),
        xi0: vt.xi0.clone(),
        blocks,
        kept,
        m_lattice,
    };
    cfg.lifts = ints.iter().map(|y| cfg.canonical_lift(y)).collect();
    Ok(cfg)
}
