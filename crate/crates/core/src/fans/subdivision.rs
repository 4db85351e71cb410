//! Lower hulls of lifted point configurations.
//!
//! Heights live in `Q^L` ordered lexicographically: the first component is
//! the weight, and the optional further components encode an infinitesimal
//! perturbation `ε^1, ε^2, ...` used to break ties.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hull;
use super::ProjectedConfig;
use crate::error::{Error, Result};
use crate::qlin;
use crate::rat::{self, Q};

/// A height in `Q^L`, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Height(pub Vec<Q>);

impl PartialOrd for Height {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Height {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Height {
    pub fn zero(len: usize) -> Height {
        Height(vec![Q::zero(); len])
    }

    pub fn real(x: Q, len: usize) -> Height {
        let mut v = vec![Q::zero(); len];
        v[0] = x;
        Height(v)
    }

    pub fn add(&self, o: &Height) -> Height {
        Height(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Height) -> Height {
        Height(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Q) -> Height {
        Height(self.0.iter().map(|a| a * s).collect())
    }

    /// The unperturbed part.
    pub fn value(&self) -> &Q {
        &self.0[0]
    }

    pub fn is_perturbed(&self) -> bool {
        self.0.len() > 1
    }
}

/// Affine functional `x ↦ slope · x + constant` with height-valued
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    pub slope: Vec<Height>,
    pub constant: Height,
}

impl Support {
    pub fn eval(&self, x: &[Q]) -> Height {
        self.slope.iter().zip(x).fold(self.constant.clone(), |acc, (a, xi)| acc.add(&a.scale(xi)))
    }

    /// `self + s (n · x - c)`.
    fn tilt(&self, s: &Height, n: &[Q], c: &Q) -> Support {
        Support {
            slope: self.slope.iter().zip(n).map(|(a, ni)| a.add(&s.scale(ni))).collect(),
            constant: self.constant.sub(&s.scale(c)),
        }
    }
}

/// A cell of the subdivision: the points on a lower face, with the
/// functional supporting it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub points: Vec<usize>,
    pub support: Support,
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    /// Full-dimensional cells, sorted by point list.
    pub cells: Vec<Cell>,
    pub heights: Vec<Height>,
    /// Weight `λ_p` per configuration point (0 for the origin).
    pub weights: Vec<Q>,
    pub perturbation_seed: Option<u64>,
}

impl Subdivision {
    pub fn cell_sets(&self) -> Vec<Vec<usize>> {
        self.cells.iter().map(|c| c.points.clone()).collect()
    }
}

/// Points on the functional, i.e. where it equals the height.
fn touching(points: &[Vec<Q>], heights: &[Height], f: &Support) -> Vec<usize> {
    (0..points.len()).filter(|&k| f.eval(&points[k]) == heights[k]).collect()
}

/// Smallest `s` with `f + s ℓ` touching a new point, where
/// `ℓ(x) = n · x - c`.  `None` if `ℓ <= 0` on all points.
fn tilt_amount(points: &[Vec<Q>], heights: &[Height], f: &Support, n: &[Q], c: &Q) -> Option<Height> {
    let mut best: Option<Height> = None;
    for (x, h) in points.iter().zip(heights) {
        let l = rat::dot_q(n, x) - c;
        if l.is_positive() {
            let s = h.sub(&f.eval(x)).scale(&l.recip());
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    best
}

/// Checks that `support` equals the height on `cell` and lies strictly
/// below it elsewhere.
pub fn verify_support(points: &[Vec<Q>], heights: &[Height], cell: &[usize], support: &Support) -> bool {
    (0..points.len()).all(|k| {
        let v = support.eval(&points[k]);
        if cell.contains(&k) {
            v == heights[k]
        } else {
            v < heights[k]
        }
    })
}

/// Cells of the lower hull of `{(x_k, h_k)}`, found by pivoting across cell
/// facets starting from a lowest cell.
pub fn lower_hull(points: &[Vec<Q>], heights: &[Height]) -> Result<Vec<Cell>> {
    let dim = points.first().map_or(0, |p| p.len());
    let len = heights.first().map_or(1, |h| h.0.len());
    let all: Vec<usize> = (0..points.len()).collect();
    if dim == 0 || hull::affine_dim(points, &all) != dim {
        return Err(Error::DegenerateConfig(format!("{} points do not span dimension {dim}", points.len())));
    }

    // Initial cell: horizontal at the lowest point, then tilt.
    let hmin = heights.iter().min().expect("nonempty").clone();
    let mut f = Support { slope: vec![Height::zero(len); dim], constant: hmin };
    let mut t = touching(points, heights, &f);
    while hull::affine_dim(points, &t) < dim {
        let r0 = points[t[0]].clone();
        let rows: Vec<Vec<Q>> =
            t[1..].iter().map(|&i| points[i].iter().zip(&r0).map(|(a, b)| a - b).collect()).collect();
        let mut w = qlin::nullspace(&rows, dim).remove(0);
        let c = rat::dot_q(&w, &r0);
        let s = match tilt_amount(points, heights, &f, &w, &c) {
            Some(s) => s,
            None => {
                w = w.into_iter().map(|x| -x).collect();
                tilt_amount(points, heights, &f, &w, &-c).expect("points span")
            }
        };
        let c = rat::dot_q(&w, &r0);
        f = f.tilt(&s, &w, &c);
        t = touching(points, heights, &f);
    }

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut cells = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(t.clone());
    queue.push_back(Cell { points: t, support: f });
    while let Some(cell) = queue.pop_front() {
        let local: Vec<Vec<Q>> = cell.points.iter().map(|&k| points[k].clone()).collect();
        for facet in hull::facets(&local)? {
            let Some(s) = tilt_amount(points, heights, &cell.support, &facet.normal, &facet.offset) else {
                continue;
            };
            let g = cell.support.tilt(&s, &facet.normal, &facet.offset);
            let next = touching(points, heights, &g);
            if seen.insert(next.clone()) {
                queue.push_back(Cell { points: next, support: g });
            }
        }
        cells.push(cell);
    }
    cells.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(cells)
}

/// Heights per configuration point from a weight map on `Ξ₀`, with an
/// optional seeded lexicographic perturbation.
pub fn heights_for(cfg: &ProjectedConfig, weights: &BTreeMap<Vec<i64>, Q>, perturb: Option<u64>) -> Result<(Vec<Q>, Vec<Height>)> {
    let mut w = vec![Q::zero()];
    for p in &cfg.xi0 {
        let x = weights.get(p).ok_or_else(|| Error::Config(format!("no weight for {p:?}")))?;
        if !x.is_positive() {
            return Err(Error::Config(format!("weight for {p:?} must be positive")));
        }
        w.push(x.clone());
    }
    for k in weights.keys() {
        if !cfg.xi0.contains(k) {
            return Err(Error::UnknownMonomial(k.clone()));
        }
    }
    let heights = match perturb {
        None => w.iter().map(|x| Height(vec![x.clone()])).collect(),
        Some(seed) => {
            let n = w.len();
            let mut order: Vec<usize> = (1..n).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let mut hs: Vec<Height> = w.iter().map(|x| Height::real(x.clone(), n)).collect();
            for (rank, &k) in order.iter().enumerate() {
                hs[k].0[rank + 1] = rat::q(1);
            }
            hs
        }
    };
    Ok((w, heights))
}

/// The regular subdivision of `cfg` induced by `λ`, with the origin at
/// height 0.
pub fn regular_subdivision(cfg: &ProjectedConfig, weights: &BTreeMap<Vec<i64>, Q>, perturb: Option<u64>) -> Result<Subdivision> {
    let (w, heights) = heights_for(cfg, weights, perturb)?;
    let cells = lower_hull(&cfg.points, &heights)?;
    Ok(Subdivision { cells, heights, weights: w, perturbation_seed: perturb })
}

/// A strictly convex generic weight vector: a large constant plus a
/// quadratic in the exponents plus a small seeded tie-breaker.
pub fn convex_generic_weights(xi0: &[Vec<i64>], seed: u64) -> BTreeMap<Vec<i64>, Q> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    xi0.iter()
        .map(|p| {
            let sq: i64 = p.iter().map(|x| x * x).sum();
            let tie: i64 = rng.gen_range(0..97);
            (p.clone(), rat::q(10_000 + 10 * sq) + rat::qf(tie, 97))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn plain(h: &[i64]) -> Vec<Height> {
        h.iter().map(|&x| Height(vec![q(x)])).collect()
    }

    #[test]
    fn segment_with_interior_point() {
        let pts = vec![vec![q(0)], vec![q(1)], vec![q(2)]];
        let cells = lower_hull(&pts, &plain(&[0, 0, 0])).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].points, vec![0, 1, 2]);
        let cells = lower_hull(&pts, &plain(&[0, -1, 0])).unwrap();
        assert_eq!(cells.iter().map(|c| c.points.clone()).collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 2]]);
        let cells = lower_hull(&pts, &plain(&[0, 1, 0])).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].points, vec![0, 2]);
    }

    #[test]
    fn single_point_and_origin() {
        let pts = vec![vec![q(0)], vec![q(3)]];
        let cells = lower_hull(&pts, &plain(&[0, 5])).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].points, vec![0, 1]);
    }

    #[test]
    fn square_diagonal_choice() {
        let pts = vec![vec![q(0), q(0)], vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)]];
        let cells = lower_hull(&pts, &plain(&[0, 0, 0, 1])).unwrap();
        assert_eq!(cells.iter().map(|c| c.points.clone()).collect::<Vec<_>>(), vec![vec![0, 1, 2], vec![1, 2, 3]]);
        for c in &cells {
            assert!(verify_support(&pts, &plain(&[0, 0, 0, 1]), &c.points, &c.support));
        }
        // Perturbation splits the flat square.
        let hs: Vec<Height> = vec![
            Height(vec![q(0), q(0), q(0)]),
            Height(vec![q(0), q(1), q(0)]),
            Height(vec![q(0), q(0), q(1)]),
            Height(vec![q(0), q(0), q(0)]),
        ];
        let cells = lower_hull(&pts, &hs).unwrap();
        assert_eq!(cells.iter().map(|c| c.points.clone()).collect::<Vec<_>>(), vec![vec![0, 1, 3], vec![0, 2, 3]]);
    }
}
