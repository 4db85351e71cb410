//! Exterior-polynomial algebra: the Koszul cohomology `H(K(dW₀))`, the
//! quotient algebras `𝒥^I` and their tensor product, the `Z/2` sign action,
//! and the degree-2 deformation class enumeration.
//!
//! Graded pieces are indexed by `(μ, k)` where `k` is the number of odd
//! generators and `μ ∈ Z^I` is the multidegree: `z^b θ^K` has
//! `μ = b - e_K`, and `z^b u^K` has `μ = b`.  The `G~` degree of a piece is
//! `(2|μ| + k, -μ)`.  The cutoff bounds `|μ|`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qlin;
use crate::rat::{self, Q};
use crate::toricdata::ValidatedToricData;

/// Which odd generators an [`ExtPolyElement`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universe {
    /// `θ_i`, of degree `(-1, e_i)`.
    Theta,
    /// `u_i`, of degree `(1, 0)`.
    U,
}

/// An element of `C[z][odd generators]`: `(z-exponent, odd subset) -> coefficient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtPolyElement {
    pub universe: Universe,
    pub terms: BTreeMap<(Vec<i64>, u64), Q>,
}

/// Sign of `x^a ∧ x^b` relative to `x^{a ∪ b}`, or `None` if they overlap.
pub fn wedge_sign(a: u64, b: u64) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> j).count_ones();
        bb &= bb - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Sign of removing generator `i` from the front of `x^mask`.
fn contract_sign(mask: u64, i: usize) -> i64 {
    if (mask & ((1u64 << i) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

impl ExtPolyElement {
    pub fn zero(universe: Universe) -> Self {
        ExtPolyElement { universe, terms: BTreeMap::new() }
    }

    pub fn monomial(universe: Universe, z: Vec<i64>, odd: u64, c: Q) -> Self {
        let mut e = Self::zero(universe);
        e.add_term(z, odd, c);
        e
    }

    pub fn add_term(&mut self, z: Vec<i64>, odd: u64, c: Q) {
        let key = (z, odd);
        let v = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Supercommutative product: `z` commutes with everything, odd
    /// generators anticommute.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.universe);
        for ((za, ma), ca) in &self.terms {
            for ((zb, mb), cb) in &other.terms {
                if let Some(s) = wedge_sign(*ma, *mb) {
                    let z: Vec<i64> = za.iter().zip(zb).map(|(x, y)| x + y).collect();
                    out.add_term(z, ma | mb, ca * cb * rat::q(s));
                }
            }
        }
        out
    }

    /// `Σ_i c_i(z) ∂/∂x_i` with polynomial coefficients `c_i`.
    pub fn contract(&self, coeffs: &[ExtPolyElement]) -> Self {
        let mut out = Self::zero(self.universe);
        for ((z, m), c) in &self.terms {
            for (i, ci) in coeffs.iter().enumerate() {
                if m >> i & 1 == 0 {
                    continue;
                }
                let s = contract_sign(*m, i);
                for ((zc, _), cc) in &ci.terms {
                    let zz: Vec<i64> = z.iter().zip(zc).map(|(x, y)| x + y).collect();
                    out.add_term(zz, m & !(1 << i), c * cc * rat::q(s));
                }
            }
        }
        out
    }

    /// Multidegree `μ` and odd count `k` of each term, if homogeneous.
    pub fn piece(&self) -> Option<(Vec<i64>, usize)> {
        let mut it = self.terms.keys().map(|(z, m)| {
            let mu: Vec<i64> = match self.universe {
                Universe::Theta => z.iter().enumerate().map(|(i, &b)| b - (m >> i & 1) as i64).collect(),
                Universe::U => z.clone(),
            };
            (mu, m.count_ones() as usize)
        });
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }
}

/// A `G~` degree in canonical form: in each block the largest entry of `m`
/// is 0, using the relators `(2(1 - |I_j|), e_{I_j})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegClass {
    pub j: i64,
    pub m: Vec<i64>,
}

pub fn canonical_class(blocks: &[Vec<usize>], j: i64, m: &[i64]) -> DegClass {
    let mut j = j;
    let mut m = m.to_vec();
    for b in blocks {
        let l = b.iter().map(|&i| m[i]).max().unwrap_or(0);
        for &i in b {
            m[i] -= l;
        }
        j -= l * 2 * (1 - b.len() as i64);
    }
    DegClass { j, m }
}

/// Degree of the piece `(μ, k)`.
pub fn piece_degree(mu: &[i64], k: usize) -> (i64, Vec<i64>) {
    (2 * mu.iter().sum::<i64>() + k as i64, mu.iter().map(|x| -x).collect())
}

/// Dimensions per piece `(μ, k)`, zero pieces omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDims {
    pub blocks: Vec<Vec<usize>>,
    pub cutoff: i64,
    pub pieces: BTreeMap<(Vec<i64>, usize), usize>,
}

impl GradedDims {
    /// Aggregates the pieces by `G~` degree class.
    pub fn by_class(&self) -> BTreeMap<DegClass, usize> {
        let mut out = BTreeMap::new();
        for ((mu, k), d) in &self.pieces {
            let (j, m) = piece_degree(mu, *k);
            *out.entry(canonical_class(&self.blocks, j, &m)).or_insert(0) += d;
        }
        out
    }

    pub fn dim(&self, mu: &[i64], k: usize) -> usize {
        self.pieces.get(&(mu.to_vec(), k)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.pieces.values().sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.by_class()
                .into_iter()
                .map(|(c, d)| json!({"deg": {"j": c.j, "m": c.m}, "dim": d}))
                .collect(),
        )
    }
}

fn check_cutoff(sizes: &[usize], cutoff: i64) -> Result<()> {
    let need = sizes.iter().copied().max().unwrap_or(0);
    if cutoff < need as i64 {
        return Err(Error::CutoffTooSmall { cutoff: cutoff.max(0) as usize, size: need });
    }
    Ok(())
}

/// Vectors `μ ≥ lower` (entrywise) with `|μ| <= cutoff`.
fn multidegrees(n: usize, lower: i64, cutoff: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![lower; n];
    fn rec(i: usize, budget: i64, lower: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        let mut x = lower;
        while x - lower <= budget {
            cur[i] = x;
            rec(i + 1, budget - (x - lower), lower, cur, out);
            x += 1;
        }
    }
    let budget = cutoff - lower * n as i64;
    if budget >= 0 {
        rec(0, budget, lower, &mut cur, &mut out);
    }
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    (0u64..(1u64 << n)).filter(|m| m.count_ones() as usize == k).collect()
}

/// `∂_i W₀ = -z^{e_I - e_i}` for `W₀ = -z^{e_I}`, as polynomial coefficients.
pub fn dw0(n: usize) -> Vec<ExtPolyElement> {
    (0..n)
        .map(|i| {
            let mut a = vec![1; n];
            a[i] = 0;
            ExtPolyElement::monomial(Universe::Theta, a, 0, rat::q(-1))
        })
        .collect()
}

/// Basis of the Koszul piece `(μ, k)`: subsets `K` of size `k` containing
/// every `i` with `μ_i = -1`.
fn koszul_basis(mu: &[i64], k: usize) -> Vec<u64> {
    if mu.iter().any(|&x| x < -1) {
        return Vec::new();
    }
    let neg: u64 = mu.iter().enumerate().filter(|(_, &x)| x == -1).fold(0, |acc, (i, _)| acc | 1 << i);
    subsets_of_size(mu.len(), k).into_iter().filter(|m| m & neg == neg).collect()
}

fn theta_element(mu: &[i64], mask: u64) -> ExtPolyElement {
    let z: Vec<i64> = mu.iter().enumerate().map(|(i, &x)| x + (mask >> i & 1) as i64).collect();
    ExtPolyElement::monomial(Universe::Theta, z, mask, rat::q(1))
}

/// Matrix of `ι_{dW₀}` from piece `(μ, k)` to `(μ + e_I, k - 1)`, one row
/// per target basis element.
fn koszul_matrix(mu: &[i64], k: usize) -> Vec<Vec<Q>> {
    let src = koszul_basis(mu, k);
    if k == 0 || src.is_empty() {
        return Vec::new();
    }
    let n = mu.len();
    let coeffs = dw0(n);
    let mu2: Vec<i64> = mu.iter().map(|x| x + 1).collect();
    let tgt = koszul_basis(&mu2, k - 1);
    let index: HashMap<u64, usize> = tgt.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let mut mat = vec![vec![Q::zero(); src.len()]; tgt.len()];
    for (c, &m) in src.iter().enumerate() {
        for ((_, mm), v) in &theta_element(mu, m).contract(&coeffs).terms {
            mat[index[mm]][c] = v.clone();
        }
    }
    mat
}

fn koszul_piece_dim(mu: &[i64], k: usize) -> usize {
    let dim = koszul_basis(mu, k).len();
    if dim == 0 {
        return 0;
    }
    let out_rank = qlin::rank(&koszul_matrix(mu, k));
    let mu_in: Vec<i64> = mu.iter().map(|x| x - 1).collect();
    let in_rank = qlin::rank(&koszul_matrix(&mu_in, k + 1));
    dim - out_rank - in_rank
}

/// `dim ker / im` of `ι_{dW₀}` on `C[z_1..z_n][θ_1..θ_n]`, for every
/// piece with `|μ| <= cutoff`.
pub fn koszul_cohomology_dims(n: usize, cutoff: i64) -> Result<GradedDims> {
    check_cutoff(&[n], cutoff)?;
    let jobs: Vec<(Vec<i64>, usize)> =
        multidegrees(n, -1, cutoff).into_iter().flat_map(|mu| (0..=n).map(move |k| (mu.clone(), k))).collect();
    let pieces = jobs
        .into_par_iter()
        .filter_map(|(mu, k)| {
            let d = koszul_piece_dim(&mu, k);
            (d > 0).then_some(((mu, k), d))
        })
        .collect();
    Ok(GradedDims { blocks: vec![(0..n).collect()], cutoff, pieces })
}

/// `ι_{dW₀} ∘ ι_{dW₀} = 0` on every basis element up to the cutoff.
pub fn koszul_differential_squares_to_zero(n: usize, cutoff: i64) -> bool {
    let coeffs = dw0(n);
    multidegrees(n, -1, cutoff).par_iter().all(|mu| {
        (0..=n).all(|k| {
            koszul_basis(mu, k).into_iter().all(|m| {
                let x = theta_element(mu, m);
                x.contract(&coeffs).contract(&coeffs).is_zero()
            })
        })
    })
}

/// Every element of `ker ι_{dW₀}` lies in the image of `f: u_i ↦ z_i θ_i`:
/// the coefficient of each `θ^K` is divisible by `z^{e_K}`.
pub fn kernel_in_image_of_f(n: usize, cutoff: i64) -> bool {
    multidegrees(n, -1, cutoff).par_iter().all(|mu| {
        (0..=n).all(|k| {
            let basis = koszul_basis(mu, k);
            if basis.is_empty() {
                return true;
            }
            let mat = koszul_matrix(mu, k);
            let kernel = if mat.is_empty() {
                (0..basis.len())
                    .map(|c| (0..basis.len()).map(|r| if r == c { rat::q(1) } else { Q::zero() }).collect())
                    .collect()
            } else {
                qlin::nullspace(&mat, basis.len())
            };
            kernel.iter().all(|x| {
                x.iter().zip(&basis).all(|(c, &m)| {
                    c.is_zero() || (0..n).all(|i| m >> i & 1 == 0 || mu[i] + 1 >= 1)
                })
            })
        })
    })
}

/// Sparse exterior element with integer coefficients.
type Ext = BTreeMap<u64, i64>;

fn ext_wedge(a: &Ext, b: &Ext) -> Ext {
    let mut out = Ext::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some(s) = wedge_sign(*ma, *mb) {
                *out.entry(ma | mb).or_insert(0) += s * ca * cb;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Contraction with `e_J = Σ_{i ∈ J} e_i`, where `u_i(e_j) = δ_ij`.
fn ext_contract(x: &Ext, block: &[usize]) -> Ext {
    let mut out = Ext::new();
    for (m, c) in x {
        for &i in block {
            if m >> i & 1 == 1 {
                *out.entry(m & !(1 << i)).or_insert(0) += contract_sign(*m, i) * c;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn unit() -> Ext {
    [(0u64, 1i64)].into_iter().collect()
}

/// `C[z][H] / ℐ` for a partition of the variables into blocks, realized
/// inside `C[z][U]`.
#[derive(Clone, Debug)]
pub struct JAlgebra {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    /// Basis `u_i - u_{last}` of each `H_j^*`, concatenated.
    pub h_basis: Vec<Ext>,
    /// `(block, K, generator of ∧^top H_K^*)`; the monomial factor is
    /// `z^{I_j \ K}`.
    pub generators: Vec<(usize, u64, Ext)>,
}

impl JAlgebra {
    pub fn new(blocks: &[Vec<usize>]) -> JAlgebra {
        let n = blocks.iter().map(|b| b.len()).sum();
        let mut h_basis = Vec::new();
        let mut generators = Vec::new();
        for (j, b) in blocks.iter().enumerate() {
            let last = *b.iter().max().expect("nonempty block");
            for &i in b.iter().filter(|&&i| i != last) {
                h_basis.push([(1u64 << i, 1), (1u64 << last, -1)].into_iter().collect());
            }
            for sub in 0u64..(1u64 << b.len()) {
                let k: u64 = (0..b.len()).filter(|t| sub >> t & 1 == 1).fold(0, |acc, t| acc | 1 << b[t]);
                let top = if k == 0 { unit() } else { ext_contract(&[(k, 1)].into_iter().collect(), b) };
                generators.push((j, k, top));
            }
        }
        JAlgebra { n, blocks: blocks.to_vec(), h_basis, generators }
    }

    fn block_mask(&self, j: usize) -> u64 {
        self.blocks[j].iter().fold(0, |acc, &i| acc | 1 << i)
    }

    /// Products of `k` elements of the `H^*` basis.
    pub fn wedge_basis(&self, k: usize) -> Vec<Ext> {
        subsets_of_size(self.h_basis.len(), k)
            .into_iter()
            .map(|s| (0..self.h_basis.len()).filter(|t| s >> t & 1 == 1).fold(unit(), |acc, t| ext_wedge(&acc, &self.h_basis[t])))
            .collect()
    }

    /// Spanning set of `ℐ` in the piece with `z`-support `supp` and `k` odd
    /// generators.
    fn ideal_span(&self, supp: u64, k: usize) -> Vec<Ext> {
        let mut out = Vec::new();
        for (j, kk, g) in &self.generators {
            let comp = self.block_mask(*j) & !kk;
            if comp & !supp != 0 {
                continue;
            }
            let deg = g.keys().next().map_or(0, |m| m.count_ones() as usize);
            if deg > k {
                continue;
            }
            for h in self.wedge_basis(k - deg) {
                let x = ext_wedge(&h, g);
                if !x.is_empty() {
                    out.push(x);
                }
            }
        }
        out
    }

    fn rank_of(rows: &[Ext], k: usize, n: usize) -> usize {
        let cols: Vec<u64> = subsets_of_size(n, k);
        let index: HashMap<u64, usize> = cols.iter().enumerate().map(|(c, &m)| (m, c)).collect();
        let dense: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![0; cols.len()];
                for (m, c) in r {
                    v[index[m]] = *c;
                }
                v
            })
            .collect();
        qlin::int_rank(&dense)
    }

    /// `dim` of the piece `(b, k)`, which only depends on `supp(b)`.
    pub fn piece_dim(&self, supp: u64, k: usize) -> usize {
        let total = binomial(self.h_basis.len(), k);
        if total == 0 {
            return 0;
        }
        total - Self::rank_of(&self.ideal_span(supp, k), k, self.n)
    }

    /// Whether `x ∈ ∧^k H^*`, multiplied by `z^b`, vanishes in the quotient.
    pub fn is_zero(&self, b: &[i64], x: &Ext) -> bool {
        let Some(k) = x.keys().next().map(|m| m.count_ones() as usize) else {
            return true;
        };
        let supp = support_mask(b);
        let span = self.ideal_span(supp, k);
        let mut with = span.clone();
        with.push(x.clone());
        Self::rank_of(&span, k, self.n) == Self::rank_of(&with, k, self.n)
    }
}

fn support_mask(b: &[i64]) -> u64 {
    b.iter().enumerate().filter(|(_, &x)| x > 0).fold(0, |acc, (i, _)| acc | 1 << i)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim` of `ker(ι_{e_I})` on `∧^k U^*`, which should be `C(|I| - 1, k)`.
pub fn h_inside_u_dim(n: usize, k: usize) -> usize {
    let block: Vec<usize> = (0..n).collect();
    let src = subsets_of_size(n, k);
    let tgt: Vec<u64> = if k == 0 { Vec::new() } else { subsets_of_size(n, k - 1) };
    let index: HashMap<u64, usize> = tgt.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let mut mat = vec![vec![Q::zero(); src.len()]; tgt.len()];
    for (c, &m) in src.iter().enumerate() {
        for (mm, v) in ext_contract(&[(m, 1)].into_iter().collect(), &block) {
            mat[index[&mm]][c] = rat::q(v);
        }
    }
    if mat.is_empty() {
        return src.len();
    }
    qlin::nullspace(&mat, src.len()).len()
}

/// Dimensions of `C[z][H] / ℐ` for the given blocks, computed directly on
/// all variables at once.
pub fn j_algebra_dims_blocks(blocks: &[Vec<usize>], cutoff: i64) -> Result<GradedDims> {
    check_cutoff(&blocks.iter().map(|b| b.len()).collect::<Vec<_>>(), cutoff)?;
    let alg = JAlgebra::new(blocks);
    let kmax = alg.h_basis.len();
    let mut cache: HashMap<(u64, usize), usize> = HashMap::new();
    let mus = multidegrees(alg.n, 0, cutoff);
    let supps: Vec<(u64, usize)> = {
        let mut s: Vec<(u64, usize)> =
            mus.iter().flat_map(|mu| (0..=kmax).map(move |k| (support_mask(mu), k))).collect();
        s.sort();
        s.dedup();
        s
    };
    let dims: Vec<((u64, usize), usize)> = supps.into_par_iter().map(|(s, k)| ((s, k), alg.piece_dim(s, k))).collect();
    cache.extend(dims);
    let mut pieces = BTreeMap::new();
    for mu in mus {
        for k in 0..=kmax {
            let d = cache[&(support_mask(&mu), k)];
            if d > 0 {
                pieces.insert((mu.clone(), k), d);
            }
        }
    }
    Ok(GradedDims { blocks: blocks.to_vec(), cutoff, pieces })
}

/// Dimensions of `𝒥^I` for a single block of size `n`.
pub fn j_algebra_dims(n: usize, cutoff: i64) -> Result<GradedDims> {
    j_algebra_dims_blocks(&[(0..n).collect()], cutoff)
}

/// Dimensions of `𝒥 = ⊗_j 𝒥^{I_j}` by convolving the per-block dimensions.
pub fn tensor_j_dims(vt: &ValidatedToricData, cutoff: i64) -> Result<GradedDims> {
    tensor_dims_for_blocks(vt.blocks(), cutoff)
}

pub fn tensor_dims_for_blocks(blocks: &[Vec<usize>], cutoff: i64) -> Result<GradedDims> {
    check_cutoff(&blocks.iter().map(|b| b.len()).collect::<Vec<_>>(), cutoff)?;
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut acc: BTreeMap<(Vec<i64>, usize), usize> = [((vec![0; n], 0), 1)].into_iter().collect();
    for b in blocks {
        let local = j_algebra_dims(b.len(), cutoff)?;
        let mut next = BTreeMap::new();
        for ((mu, k), d) in &acc {
            for ((nu, l), e) in &local.pieces {
                let mut m = mu.clone();
                for (t, &i) in b.iter().enumerate() {
                    m[i] = nu[t];
                }
                if m.iter().sum::<i64>() <= cutoff {
                    *next.entry((m, k + l)).or_insert(0) += d * e;
                }
            }
        }
        acc = next;
    }
    Ok(GradedDims { blocks: blocks.to_vec(), cutoff, pieces: acc })
}

/// `(-1)^†` with `† = 1 + <v + e_I, a> + |h|`.
pub fn sign_action(a: &[i64], h_size: usize, v: &[i64]) -> i64 {
    let dagger = 1 + a.iter().zip(v).map(|(x, vi)| x * (vi + 1)).sum::<i64>() + h_size as i64;
    if dagger.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A candidate generator `r^a z^b h` of degree 2, with `a` recorded through
/// `k(a)` and `|a|` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationCandidate {
    pub k_a: Vec<i64>,
    pub a_size: i64,
    pub b: Vec<i64>,
    pub h_size: usize,
    /// Indices into the `H^*` basis of a wedge representative.
    pub h: Vec<usize>,
    pub ell: Vec<i64>,
    /// `†` mod 2; the class is invariant iff this is 0.
    pub dagger_parity: i64,
    pub nonzero_in_j: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// `|h| = 2` candidates, killed by the sign rule.
    pub killed_by_sign: Vec<DeformationCandidate>,
    /// `b ∈ Ξ \ Ξ₀`, with `z^b ∈ ℐ`.
    pub killed_in_j: Vec<DeformationCandidate>,
    /// Surviving classes, one `b ∈ Ξ₀` each, meaning a multiple of
    /// `r_b z^b` (up to sign).
    pub surviving: Vec<Vec<i64>>,
    pub first_order_nonzero: bool,
}

fn pair_q(a: &[Q], b: &[i64]) -> Q {
    rat::dot_qi(a, b)
}

/// Checks the vector part and both integer degree equations for a candidate.
fn degree_equations_hold(vt: &ValidatedToricData, c: &DeformationCandidate) -> bool {
    let mut rhs = vec![0; vt.n()];
    for (j, b) in vt.blocks().iter().enumerate() {
        for &i in b {
            rhs[i] += c.ell[j];
        }
    }
    let vec_ok = c.k_a.iter().zip(&c.b).zip(&rhs).all(|((k, b), r)| k - b == *r);
    let bsum: i64 = c.b.iter().sum();
    let ksum: i64 = c.k_a.iter().sum();
    let ell_term: i64 = vt.blocks().iter().zip(&c.ell).map(|(b, l)| 2 * l * (b.len() as i64 - 1)).sum();
    let int2 = 2 * c.a_size - 2 * ksum + 2 * bsum + c.h_size as i64 + ell_term == 2;
    let int3 = rat::q(2) * vt.n_sigma_pairing(&c.b) + rat::q(c.h_size as i64) == rat::q(2);
    vec_ok && int2 && int3
}

/// `† = <n_σ + v - e_I, k(a)> + 1 + <v + e_I, b> + |h|` mod 2.
fn dagger_parity(vt: &ValidatedToricData, v: &[i64], k_a: &[i64], b: &[i64], h_size: usize) -> Result<i64> {
    let shifted: Vec<Q> = vt.n_sigma.iter().zip(v).map(|(ns, vi)| ns + rat::q(vi - 1)).collect();
    let first = pair_q(&shifted, k_a);
    if !rat::is_integer(&first) {
        return Err(Error::NonIntegralDegree(format!("<n_σ + v - e_I, {k_a:?}>")));
    }
    let first = first.to_integer().to_i64().expect("small");
    let second: i64 = b.iter().zip(v).map(|(x, vi)| x * (vi + 1)).sum();
    Ok((first + 1 + second + h_size as i64).rem_euclid(2))
}

/// Enumerates degree-2 candidates `r^a z^b h` and classifies them.
pub fn enumerate_deformation_classes(vt: &ValidatedToricData, v: &[i64]) -> Result<Classification> {
    let n = vt.n();
    let r = vt.r();
    let alg = JAlgebra::new(vt.blocks());
    let mut killed_by_sign = Vec::new();
    let mut killed_in_j = Vec::new();
    let mut surviving = Vec::new();
    let mut first_order_nonzero = true;

    // |h| = 0, <n_σ, b> = 1: b ∈ Ξ, with k(a) = b and |a| = 1.
    for b in &vt.xi {
        let in_xi0 = vt.xi0.contains(b);
        let mut c = DeformationCandidate {
            k_a: b.clone(),
            a_size: 1,
            b: b.clone(),
            h_size: 0,
            h: Vec::new(),
            ell: vec![0; r],
            dagger_parity: dagger_parity(vt, v, b, b, 0)?,
            nonzero_in_j: !alg.is_zero(b, &unit()),
        };
        if !degree_equations_hold(vt, &c) {
            return Err(Error::ClassificationViolation(format!("degree equations fail for b = {b:?}")));
        }
        if c.dagger_parity != 0 {
            return Err(Error::ClassificationViolation(format!("class of z^{b:?} is not invariant")));
        }
        if in_xi0 {
            if !c.nonzero_in_j {
                first_order_nonzero = false;
            } else {
                surviving.push(b.clone());
            }
        } else if c.nonzero_in_j {
            return Err(Error::ClassificationViolation(format!("z^{b:?} with b outside Ξ₀ survives")));
        } else {
            c.nonzero_in_j = false;
            killed_in_j.push(c);
        }
    }

    // |h| = 2, b = 0; any ℓ works for the sign, so use ℓ = (1, ..., 1)
    // and confirm ℓ = 0 gives the same parity.
    let zero = vec![0; n];
    let k_a: Vec<i64> = vec![1; n];
    let p1 = dagger_parity(vt, v, &k_a, &zero, 2)?;
    let p0 = dagger_parity(vt, v, &zero, &zero, 2)?;
    if p0 != p1 {
        return Err(Error::ClassificationViolation("sign depends on ℓ".into()));
    }
    let hb = alg.h_basis.len();
    for s in 0..hb {
        for t in s + 1..hb {
            let h = ext_wedge(&alg.h_basis[s], &alg.h_basis[t]);
            let c = DeformationCandidate {
                k_a: k_a.clone(),
                a_size: r as i64,
                b: zero.clone(),
                h_size: 2,
                h: vec![s, t],
                ell: vec![1; r],
                dagger_parity: p1,
                nonzero_in_j: !alg.is_zero(&zero, &h),
            };
            if !degree_equations_hold(vt, &c) {
                return Err(Error::ClassificationViolation("degree equations fail for |h| = 2".into()));
            }
            if c.dagger_parity == 0 && c.nonzero_in_j {
                return Err(Error::ClassificationViolation(format!("|h| = 2 class {:?} survives", c.h)));
            }
            killed_by_sign.push(c);
        }
    }
    surviving.sort();
    Ok(Classification { killed_by_sign, killed_in_j, surviving, first_order_nonzero })
}

/// `K ⊆ I` with `e_K ∈ M̄` and `Σ_{i ∈ K} (1 - 2/d_i) = 1`, sorted by size
/// then lexicographically.
pub fn enumerate_curvature_candidates(vt: &ValidatedToricData) -> Result<Vec<Vec<usize>>> {
    let n = vt.n();
    if n > crate::toricdata::MAX_SUBSET_SCAN {
        return Err(Error::IndexSetTooLarge(n));
    }
    let mut out: Vec<Vec<usize>> = (1u64..(1u64 << n))
        .into_par_iter()
        .filter_map(|mask| {
            let k: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let s = k.iter().fold(Q::zero(), |acc, &i| acc + rat::q(1) - rat::qf(2, vt.input.d[i]));
            if s != rat::q(1) {
                return None;
            }
            let e: Vec<i64> = (0..n).map(|i| (mask >> i & 1) as i64).collect();
            vt.in_m_bar(&e).then_some(k)
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;
    use crate::toricdata::check_no_bc;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(1));
        assert_eq!(wedge_sign(0b10, 0b01), Some(-1));
        assert_eq!(wedge_sign(0b11, 0b01), None);
        assert_eq!(wedge_sign(0b110, 0b001), Some(1));
    }

    #[test]
    fn size_three_degree_zero_piece() {
        let j = j_algebra_dims(3, 3).unwrap();
        let dims: Vec<usize> = (0..3).map(|k| j.dim(&[0, 0, 0], k)).collect();
        assert_eq!(dims, vec![1, 2, 0]);
        let h = koszul_cohomology_dims(3, 3).unwrap();
        assert_eq!((0..3).map(|k| h.dim(&[0, 0, 0], k)).collect::<Vec<_>>(), vec![1, 2, 0]);
    }

    #[test]
    fn z2z3_dies() {
        let x = theta_element(&[-1, 0, 0], 0b001);
        let y = x.contract(&dw0(3));
        assert_eq!(y, ExtPolyElement::monomial(Universe::Theta, vec![0, 1, 1], 0, rat::q(-1)));
        let h = koszul_cohomology_dims(3, 3).unwrap();
        assert_eq!(h.dim(&[0, 1, 1], 0), 0);
    }

    #[test]
    fn ideal_generators_extreme_cases() {
        let alg = JAlgebra::new(&[vec![0, 1, 2]]);
        assert!(alg.is_zero(&[1, 1, 1], &unit()));
        let top = alg.wedge_basis(2).remove(0);
        assert!(alg.is_zero(&[0, 0, 0], &top));
        assert!(!alg.is_zero(&[0, 0, 0], &unit()));
    }

    #[test]
    fn h_is_kernel_of_contraction() {
        for n in 2..=5 {
            for k in 0..=n {
                assert_eq!(h_inside_u_dim(n, k), binomial(n - 1, k));
            }
            let alg = JAlgebra::new(&[(0..n).collect()]);
            for h in &alg.h_basis {
                assert!(ext_contract(h, &(0..n).collect::<Vec<_>>()).is_empty());
            }
        }
    }

    #[test]
    fn cutoff_too_small() {
        assert!(matches!(j_algebra_dims(4, 3), Err(Error::CutoffTooSmall { .. })));
        assert!(matches!(koszul_cohomology_dims(3, 2), Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn oracle_equivalence_small() {
        let a = j_algebra_dims(3, 5).unwrap();
        let b = koszul_cohomology_dims(3, 5).unwrap();
        assert_eq!(a.pieces, b.pieces);
        assert!(koszul_differential_squares_to_zero(3, 4));
        assert!(kernel_in_image_of_f(3, 4));
    }

    #[test]
    fn sign_action_examples() {
        assert_eq!(sign_action(&[0, 0, 0], 0, &[1, 1, 0]), -1);
        assert_eq!(sign_action(&[1, 1, 1], 0, &[1, 1, 0]), 1);
        assert_eq!(sign_action(&[1, 1, 1], 1, &[1, 1, 0]), -1);
    }

    #[test]
    fn single_block_tensor_is_identity() {
        let vt = fixtures::validated("quartic").unwrap();
        let a = tensor_j_dims(&vt, 5).unwrap();
        let b = j_algebra_dims(4, 5).unwrap();
        assert_eq!(a.pieces, b.pieces);
    }

    #[test]
    fn verscrit_counts() {
        for (name, count) in [("quartic", 22), ("cubic-fourfold", 24), ("z-manifold", 36)] {
            let vt = fixtures::validated(name).unwrap();
            let c = enumerate_deformation_classes(&vt, &vt.volume_vector()).unwrap();
            assert_eq!(c.surviving.len(), count, "{name}");
            assert_eq!(c.surviving, vt.xi0);
            assert!(c.first_order_nonzero);
            assert!(c.killed_by_sign.iter().all(|k| k.dagger_parity == 1));
        }
    }

    #[test]
    fn curvature_candidates_match_no_bc() {
        for name in fixtures::NAMES {
            let vt = fixtures::validated(name).unwrap();
            assert_eq!(enumerate_curvature_candidates(&vt).unwrap(), check_no_bc(&vt).unwrap().witnesses, "{name}");
        }
        let vt = fixtures::validated("quartic").unwrap();
        assert!(enumerate_curvature_candidates(&vt).unwrap().is_empty());
        let vt = fixtures::validated("cubic-fourfold").unwrap();
        assert!(enumerate_curvature_candidates(&vt).unwrap().contains(&vec![0, 3, 4]));
    }
}
