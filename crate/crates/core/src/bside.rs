//! The superpotential, the involution `ε`, and the Koszul matrix
//! factorization with its dual.
//!
//! Coefficients are formal units carrying a sign and a valuation.  The
//! factorization identities are checked over the commutative ring generated
//! by formal symbols `z_i`, `W_i`, together with an expansion check that
//! `Σ z_i W_i = W`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grading::{self, GradingData};
use crate::rat::Q;
use crate::toricdata::ValidatedToricData;

/// One term `sign · coefficient · z^exp` of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub sign: i64,
    /// Valuation of the coefficient; `None` for the block terms.
    pub val: Option<Q>,
    pub exp: Vec<i64>,
    /// Block index for the terms `-z^{e_{I_j}}`.
    pub block: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superpotential {
    pub n: usize,
    /// Block terms first, then `Ξ₀` terms in lexicographic order.
    pub terms: Vec<Term>,
}

/// `W = -Σ_j z^{e_{I_j}} + Σ_{p ∈ Ξ₀} b_p z^p` with `val(b_p)` from
/// `valuations` (keys must be exactly `Ξ₀`).
pub fn build_superpotential(vt: &ValidatedToricData, valuations: Option<&BTreeMap<Vec<i64>, Q>>) -> Result<Superpotential> {
    if let Some(v) = valuations {
        for k in v.keys() {
            if !vt.xi0.contains(k) {
                return Err(Error::UnknownMonomial(k.clone()));
            }
        }
    }
    let mut terms = Vec::new();
    for j in 0..vt.r() {
        terms.push(Term { sign: -1, val: None, exp: vt.block_vector(j), block: Some(j) });
    }
    for p in &vt.xi0 {
        let val = valuations.and_then(|v| v.get(p).cloned());
        terms.push(Term { sign: 1, val, exp: p.clone(), block: None });
    }
    let w = Superpotential { n: vt.n(), terms };
    for t in &w.terms {
        if vt.q_pairing(&t.exp) != vt.d || !vt.in_m_bar(&t.exp) {
            return Err(Error::DegenerateConfig(format!("monomial {:?} is not homogeneous in M̄", t.exp)));
        }
    }
    Ok(w)
}

/// `s_i = (-1)^{1 + v_i}`, so that `ε(z_i) = s_i z_i`.
pub fn epsilon_signs(v: &[i64]) -> Vec<i64> {
    v.iter().map(|&x| if (1 + x).rem_euclid(2) == 0 { 1 } else { -1 }).collect()
}

fn parity_sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign picked up by a term under `ε`: the monomial contributes
/// `Π s_i^{a_i}` and the coefficient of `z^p` contributes
/// `(-1)^{<n_σ + v - e_I, p>}`.
pub fn epsilon_term_sign(vt: &ValidatedToricData, v: &[i64], t: &Term) -> Result<i64> {
    let s = epsilon_signs(v);
    let mono: i64 = t.exp.iter().zip(&s).map(|(&a, &si)| if a % 2 == 0 { 1 } else { si }).product();
    let coeff = if t.block.is_some() {
        1
    } else {
        let ns = vt.n_sigma_pairing(&t.exp);
        if !crate::rat::is_integer(&ns) {
            return Err(Error::NonIntegralDegree(format!("<n_σ, {:?}>", t.exp)));
        }
        let ns = crate::rat::to_i64(&ns.to_integer()).expect("small");
        let rest: i64 = t.exp.iter().zip(v).map(|(a, vi)| a * (vi - 1)).sum();
        parity_sign(ns + rest)
    };
    Ok(mono * coeff)
}

/// `ε(W) = -W`: every term changes sign.
pub fn check_wflips(vt: &ValidatedToricData, w: &Superpotential, v: &[i64]) -> Result<bool> {
    for t in &w.terms {
        if epsilon_term_sign(vt, v, t)? != -1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Formal commuting symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Z(usize),
    W(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// Left multiplication by the generator `i`.
    Wedge(usize),
    /// Contraction `∂/∂` with respect to generator `i`.
    Contract(usize),
}

/// An operator `Σ c · sym · action` on an exterior algebra with
/// coefficients in the formal symbol ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub terms: Vec<(i64, Sym, Action)>,
}

/// Elements: `(basis mask, sorted symbol monomial) -> coefficient`.
pub type Element = BTreeMap<(u64, Vec<Sym>), i64>;

fn below(mask: u64, i: usize) -> u32 {
    (mask & ((1u64 << i) - 1)).count_ones()
}

/// Applies a single action to a basis element, returning sign and mask.
pub fn act(action: Action, mask: u64) -> Option<(i64, u64)> {
    match action {
        Action::Wedge(i) => {
            if mask >> i & 1 == 1 {
                None
            } else {
                Some((if below(mask, i) % 2 == 0 { 1 } else { -1 }, mask | (1 << i)))
            }
        }
        Action::Contract(i) => {
            if mask >> i & 1 == 0 {
                None
            } else {
                Some((if below(mask, i) % 2 == 0 { 1 } else { -1 }, mask & !(1 << i)))
            }
        }
    }
}

fn add_to(e: &mut Element, key: (u64, Vec<Sym>), c: i64) {
    let entry = e.entry(key.clone()).or_insert(0);
    *entry += c;
    if *entry == 0 {
        e.remove(&key);
    }
}

impl Operator {
    pub fn apply(&self, x: &Element) -> Element {
        let mut out = Element::new();
        for ((mask, mono), c) in x {
            for &(k, sym, action) in &self.terms {
                if let Some((s, m2)) = act(action, *mask) {
                    let mut mono2 = mono.clone();
                    mono2.push(sym);
                    mono2.sort();
                    add_to(&mut out, (m2, mono2), c * k * s);
                }
            }
        }
        out
    }
}

pub fn basis_element(mask: u64) -> Element {
    let mut e = Element::new();
    e.insert((mask, Vec::new()), 1);
    e
}

/// The Koszul matrix factorization `δ_K = Σ z_i ∂/∂φ_i + W_i φ_i`.
#[derive(Clone, Debug)]
pub struct KoszulMF {
    pub n: usize,
    /// Indices into `W.terms` assigned to each `W_i`.
    pub split: Vec<Vec<usize>>,
    pub delta: Operator,
}

impl KoszulMF {
    pub fn rank(&self) -> u64 {
        1u64 << self.n
    }
}

/// Assigns each monomial to its smallest-index variable and assembles
/// `δ_K`, then checks `δ_K² = W · id`.
pub fn build_koszul_mf(w: &Superpotential) -> Result<KoszulMF> {
    let n = w.n;
    if w.terms.is_empty() {
        return Err(Error::FactorizationCheckFailed("zero potential".into()));
    }
    if n > 30 {
        return Err(Error::IndexSetTooLarge(n));
    }
    let mut split = vec![Vec::new(); n];
    for (k, t) in w.terms.iter().enumerate() {
        let i = t.exp.iter().position(|&a| a > 0).ok_or_else(|| Error::FactorizationCheckFailed("constant term".into()))?;
        split[i].push(k);
    }
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push((1, Sym::Z(i), Action::Contract(i)));
        terms.push((1, Sym::W(i), Action::Wedge(i)));
    }
    let mf = KoszulMF { n, split, delta: Operator { terms } };
    check_delta_squared(&mf)?;
    check_split(w, &mf)?;
    Ok(mf)
}

/// `Σ_i z_i W_i` as a formal element times `φ_S`.
fn w_times(mask: u64, n: usize) -> Element {
    let mut e = Element::new();
    for i in 0..n {
        e.insert((mask, vec![Sym::Z(i), Sym::W(i)]), 1);
    }
    e
}

/// `δ_K² φ_S = (Σ z_i W_i) φ_S` for every basis element.
pub fn check_delta_squared(mf: &KoszulMF) -> Result<()> {
    let bad = (0..mf.rank()).into_par_iter().find_first(|&mask| {
        let x = basis_element(mask);
        mf.delta.apply(&mf.delta.apply(&x)) != w_times(mask, mf.n)
    });
    match bad {
        Some(mask) => Err(Error::FactorizationCheckFailed(format!("delta^2 differs from W on basis element {mask:#b}"))),
        None => Ok(()),
    }
}

/// Every term of `W_i` is divisible by `z_i` and the terms of all `z_i W_i`
/// add up to `W`.
fn check_split(w: &Superpotential, mf: &KoszulMF) -> Result<()> {
    let mut rebuilt: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (i, ks) in mf.split.iter().enumerate() {
        for &k in ks {
            let a = w.terms[k].exp.clone();
            if a[i] == 0 {
                return Err(Error::FactorizationCheckFailed(format!("W_{} gets a term without z_{}", i + 1, i + 1)));
            }
            *rebuilt.entry(a).or_insert(0) += w.terms[k].sign;
        }
    }
    let mut original: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for t in &w.terms {
        *original.entry(t.exp.clone()).or_insert(0) += t.sign;
    }
    if rebuilt != original {
        return Err(Error::FactorizationCheckFailed("sum of z_i W_i differs from W".into()));
    }
    Ok(())
}

/// Each `W_i` transforms as `ε(W_i) = -s_i W_i`.
pub fn check_split_flips(vt: &ValidatedToricData, w: &Superpotential, mf: &KoszulMF, v: &[i64]) -> Result<bool> {
    let s = epsilon_signs(v);
    for (i, ks) in mf.split.iter().enumerate() {
        for &k in ks {
            // ε(z_i W_i) = s_i z_i ε(W_i), and the full term flips.
            let term_sign = epsilon_term_sign(vt, v, &w.terms[k])?;
            if term_sign * s[i] != -s[i] * s[i] * s[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Degree of every monomial entry of `δ_K` is `(1, 0)` in `G~`.
pub fn check_delta_degree(vt: &ValidatedToricData, w: &Superpotential, mf: &KoszulMF, data: &GradingData) -> Result<bool> {
    let n = vt.n();
    let one = data.g_tilde.deg(1, vec![0; n]);
    let e = |i: usize, s: i64| {
        let mut v = vec![0; n];
        v[i] = s;
        v
    };
    for i in 0..n {
        let phi = data.g_tilde.deg(1, e(i, -1));
        let z = data.g_tilde.deg(2, e(i, -1));
        // z_i ∂/∂φ_i
        let d1 = z.add(&phi.scale(-1));
        if !grading::deg_equal(&data.g_tilde, &d1, &one)? {
            return Ok(false);
        }
        for &k in &mf.split[i] {
            let t = &w.terms[k];
            let mut a = t.exp.clone();
            a[i] -= 1;
            let mut d = grading::monomial_degree(&a).add(&phi);
            if t.block.is_none() {
                d = d.add(&grading::coefficient_degree(data, &t.exp)?);
            }
            if !grading::deg_equal(&data.g_tilde, &d, &one)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `δ_{K∨} = Σ -z_i θ_i + W_i ∂/∂θ_i`.
pub fn dual_operator(n: usize) -> Operator {
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push((-1, Sym::Z(i), Action::Wedge(i)));
        terms.push((1, Sym::W(i), Action::Contract(i)));
    }
    Operator { terms }
}

/// `ε^* δ_{K∨} = Σ -s_i z_i θ_i - s_i W_i ∂/∂θ_i`, using `ε(W_i) = -s_i W_i`.
pub fn epsilon_dual_operator(s: &[i64]) -> Operator {
    let mut terms = Vec::new();
    for (i, &si) in s.iter().enumerate() {
        terms.push((-si, Sym::Z(i), Action::Wedge(i)));
        terms.push((-si, Sym::W(i), Action::Contract(i)));
    }
    Operator { terms }
}

/// `θ_A ↦ (-1)^{|A|} ∂_{a_1} ... ∂_{a_k} φ^top`, each `θ_a` rescaled by
/// `scale[a]`.
pub fn comparison_map(n: usize, scale: &[i64], x: &Element) -> Element {
    let top: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Element::new();
    for ((mask, mono), c) in x {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut sign = if idx.len() % 2 == 0 { 1 } else { -1 };
        for &a in &idx {
            sign *= scale[a];
        }
        let mut m = top;
        for &a in idx.iter().rev() {
            let (s, m2) = act(Action::Contract(a), m).expect("index present in top form");
            sign *= s;
            m = m2;
        }
        add_to(&mut out, (m, mono.clone()), c * sign);
    }
    out
}

/// Result of the dualization checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualReport {
    /// `δ_{K∨}² = -W · id`.
    pub dual_squares_to_minus_w: bool,
    /// The comparison map intertwines `Σ -z_i θ_i - W_i ∂/∂θ_i` with `δ_K`.
    pub intertwines: bool,
    /// The comparison map composed with `θ_k ↦ s_k θ_k` intertwines
    /// `ε^* δ_{K∨}` with `δ_K`.
    pub intertwines_epsilon: bool,
    /// `r - |I|`.
    pub iso_degree: i64,
    /// Class of `deg φ^top - deg θ_∅` in `G~`, reduced to `(j, 0)`.
    pub iso_degree_class: (i64, Vec<i64>),
}

/// Builds the dual factorization and verifies the comparison map on all
/// `2^|I|` basis elements.
pub fn dualize_mf(vt: &ValidatedToricData, mf: &KoszulMF, v: &[i64]) -> Result<DualReport> {
    let n = mf.n;
    let dual = dual_operator(n);
    let minus_w: Vec<bool> = (0..mf.rank())
        .into_par_iter()
        .map(|mask| {
            let mut expect = w_times(mask, n);
            for c in expect.values_mut() {
                *c = -*c;
            }
            dual.apply(&dual.apply(&basis_element(mask))) == expect
        })
        .collect();
    let plain = Operator {
        terms: (0..n).flat_map(|i| [(-1, Sym::Z(i), Action::Wedge(i)), (-1, Sym::W(i), Action::Contract(i))]).collect(),
    };
    let s = epsilon_signs(v);
    let eps = epsilon_dual_operator(&s);
    let ones = vec![1; n];
    let check = |op: &Operator, scale: &[i64]| {
        (0..mf.rank()).into_par_iter().all(|mask| {
            let x = basis_element(mask);
            comparison_map(n, scale, &op.apply(&x)) == mf.delta.apply(&comparison_map(n, scale, &x))
        })
    };
    let intertwines = check(&plain, &ones);
    let intertwines_epsilon = check(&eps, &s);
    if !intertwines || !intertwines_epsilon {
        return Err(Error::IntertwineCheckFailed(format!(
            "comparison map fails (plain: {intertwines}, epsilon: {intertwines_epsilon})"
        )));
    }
    // deg φ^top = (|I|, -e_I); add the relators (2(1 - |I_j|), e_{I_j}).
    let j = n as i64 + (0..vt.r()).map(|b| 2 * (1 - vt.blocks()[b].len() as i64)).sum::<i64>();
    Ok(DualReport {
        dual_squares_to_minus_w: minus_w.iter().all(|&b| b),
        intertwines,
        intertwines_epsilon,
        iso_degree: vt.r() as i64 - n as i64,
        iso_degree_class: (j, vec![0; n]),
    })
}

/// Full expansion of `δ_K²` with the actual polynomials `W_i` and formal
/// coefficients; exponential in `|I|`, intended as an independent check.
pub fn expand_delta_squared(w: &Superpotential, mf: &KoszulMF) -> bool {
    // Polynomial: (z exponent, coefficient label) -> integer.
    type Poly = BTreeMap<(Vec<i64>, Vec<usize>), i64>;
    let n = mf.n;
    let mut w_poly: Vec<Poly> = vec![Poly::new(); n];
    for (i, ks) in mf.split.iter().enumerate() {
        for &k in ks {
            let mut a = w.terms[k].exp.clone();
            a[i] -= 1;
            w_poly[i].insert((a, vec![k]), w.terms[k].sign);
        }
    }
    let full: Poly = w.terms.iter().enumerate().map(|(k, t)| ((t.exp.clone(), vec![k]), t.sign)).collect();
    let z = |i: usize| -> Poly {
        let mut a = vec![0; n];
        a[i] = 1;
        [((a, Vec::new()), 1)].into_iter().collect()
    };
    let mul = |p: &Poly, q: &Poly| -> Poly {
        let mut out = Poly::new();
        for ((a, la), ca) in p {
            for ((b, lb), cb) in q {
                let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let mut l = la.clone();
                l.extend(lb);
                l.sort();
                *out.entry((e, l)).or_insert(0) += ca * cb;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    };
    let apply = |x: &BTreeMap<u64, Poly>| -> BTreeMap<u64, Poly> {
        let mut out: BTreeMap<u64, Poly> = BTreeMap::new();
        for (mask, p) in x {
            for i in 0..n {
                for (action, coeff) in [(Action::Contract(i), z(i)), (Action::Wedge(i), w_poly[i].clone())] {
                    if let Some((s, m2)) = act(action, *mask) {
                        let prod = mul(&coeff, p);
                        let slot = out.entry(m2).or_default();
                        for (k, c) in prod {
                            *slot.entry(k).or_insert(0) += s * c;
                        }
                    }
                }
            }
        }
        for p in out.values_mut() {
            p.retain(|_, c| *c != 0);
        }
        out.retain(|_, p| !p.is_empty());
        out
    };
    (0..mf.rank()).all(|mask| {
        let start: BTreeMap<u64, Poly> = [(mask, [((vec![0; n], Vec::new()), 1)].into_iter().collect())].into_iter().collect();
        let sq = apply(&apply(&start));
        sq.len() == 1 && sq.get(&mask) == Some(&full)
    })
}
