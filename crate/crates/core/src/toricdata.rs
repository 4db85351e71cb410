//! Toric input data: index blocks, degrees, the sublattice `M̄` and weights.
//!
//! Validation checks the lattice axioms, enumerates the degree-one lattice
//! points `Ξ` and the subset `Ξ₀`, decides the nef-partition, embeddedness
//! and no-bc conditions, and computes the symmetry groups.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intlat::{self, FiniteAbelianGroup, RationalLatticeBasis, Sublattice};
use crate::rat::{self, q, qf, Q};

/// Largest index set for which `2^|I|` subset scans are attempted.
pub const MAX_SUBSET_SCAN: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeSpec {
    /// `{m : <c, m> = 0 mod n}` for every listed `(c, n)`.
    Congruences(Vec<(Vec<i64>, i64)>),
    /// Lattice generated by the listed vectors.
    Generators(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaSpec {
    Uniform(Q),
    /// Weight per element of `Ξ₀`, keyed by exponent vector.
    Map(BTreeMap<Vec<i64>, Q>),
}

/// Unvalidated toric input.  Indices are 0-based internally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricInput {
    pub blocks: Vec<Vec<usize>>,
    pub d: Vec<i64>,
    pub lattice: LatticeSpec,
    pub lambda: Option<LambdaSpec>,
    pub v: Option<Vec<i64>>,
}

/// Toric data whose axioms have been checked.
#[derive(Clone, Debug)]
pub struct ValidatedToricData {
    pub input: ToricInput,
    pub m_bar: Sublattice,
    pub n_bar: RationalLatticeBasis,
    /// `lcm` of the `d_i`.
    pub d: i64,
    /// `q_i = d / d_i`.
    pub q: Vec<i64>,
    /// `n_σ = q / d`.
    pub n_sigma: Vec<Q>,
    pub xi: Vec<Vec<i64>>,
    pub xi0: Vec<Vec<i64>>,
}

impl ValidatedToricData {
    /// `|I|`.
    pub fn n(&self) -> usize {
        self.input.d.len()
    }

    /// Number of blocks.
    pub fn r(&self) -> usize {
        self.input.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.input.blocks
    }

    /// Block containing index `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.input.blocks.iter().position(|b| b.contains(&i)).expect("blocks partition I")
    }

    pub fn in_m_bar(&self, v: &[i64]) -> bool {
        intlat::contains_i64(&self.m_bar, v).expect("dimension checked by caller")
    }

    /// Indicator vector of the block `j`.
    pub fn block_vector(&self, j: usize) -> Vec<i64> {
        let mut e = vec![0; self.n()];
        for &i in &self.input.blocks[j] {
            e[i] = 1;
        }
        e
    }

    /// `<q, m>`.
    pub fn q_pairing(&self, m: &[i64]) -> i64 {
        self.q.iter().zip(m).map(|(a, b)| a * b).sum()
    }

    /// `<n_σ, m>` as an exact rational.
    pub fn n_sigma_pairing(&self, m: &[i64]) -> Q {
        qf(self.q_pairing(m), self.d)
    }

    /// The volume vector: the supplied one, or the default.
    pub fn volume_vector(&self) -> Vec<i64> {
        self.input.v.clone().unwrap_or_else(|| default_volume_vector(self))
    }

    /// Weights `λ_p` for every `p ∈ Ξ₀`, if a weight specification was given.
    pub fn lambda_values(&self) -> Result<Option<BTreeMap<Vec<i64>, Q>>> {
        match &self.input.lambda {
            None => Ok(None),
            Some(spec) => resolve_weights(self, spec).map(Some),
        }
    }
}

/// Expands a weight specification over `Ξ₀`, rejecting keys outside `Ξ₀`,
/// missing keys and non-positive weights.
pub fn resolve_weights(vt: &ValidatedToricData, spec: &LambdaSpec) -> Result<BTreeMap<Vec<i64>, Q>> {
    let out: BTreeMap<Vec<i64>, Q> = match spec {
        LambdaSpec::Uniform(x) => vt.xi0.iter().map(|p| (p.clone(), x.clone())).collect(),
        LambdaSpec::Map(m) => {
            for k in m.keys() {
                if !vt.xi0.contains(k) {
                    return Err(Error::UnknownMonomial(k.clone()));
                }
            }
            for p in &vt.xi0 {
                if !m.contains_key(p) {
                    return Err(Error::Config(format!("no weight given for {p:?}")));
                }
            }
            m.clone()
        }
    };
    if let Some((p, x)) = out.iter().find(|(_, x)| **x <= Q::zero()) {
        return Err(Error::Config(format!("weight for {p:?} must be positive, got {}", rat::fmt_q(x))));
    }
    Ok(out)
}

/// Default volume vector: 1 everywhere except 0 at the largest index of each
/// block, so that block sums are `|I_j| - 1`.
pub fn default_volume_vector(vt: &ValidatedToricData) -> Vec<i64> {
    let mut v = vec![1; vt.n()];
    for b in vt.blocks() {
        v[*b.iter().max().expect("nonempty block")] = 0;
    }
    v
}

/// Checks that `v` has block sums `|I_j| - 1`.
pub fn check_volume_vector(blocks: &[Vec<usize>], v: &[i64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::InvalidVolumeVector(format!("length {} but |I| = {n}", v.len())));
    }
    for (j, b) in blocks.iter().enumerate() {
        let s: i64 = b.iter().map(|&i| v[i]).sum();
        if s != b.len() as i64 - 1 {
            return Err(Error::InvalidVolumeVector(format!(
                "block {} sums to {s}, expected {}",
                j + 1,
                b.len() - 1
            )));
        }
    }
    Ok(())
}

fn build_lattice(n: usize, spec: &LatticeSpec) -> Result<Sublattice> {
    match spec {
        LatticeSpec::Congruences(c) => intlat::sublattice_from_congruences(n, c),
        LatticeSpec::Generators(g) => {
            for row in g {
                if row.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: row.len() });
                }
            }
            let rows: Vec<Vec<BigInt>> = g.iter().map(|r| rat::big_vec(r)).collect();
            intlat::lattice_from_generators(n, &rows)
        }
    }
}

/// Checks every axiom on the input and enumerates `Ξ`, `Ξ₀`.
pub fn validate(input: ToricInput) -> Result<ValidatedToricData> {
    let n = input.d.len();
    let mut seen = vec![false; n];
    for b in &input.blocks {
        for &i in b {
            if i >= n {
                return Err(Error::NotAPartition(format!("index {} exceeds |I| = {n}", i + 1)));
            }
            if seen[i] {
                return Err(Error::NotAPartition(format!("index {} appears twice", i + 1)));
            }
            seen[i] = true;
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::NotAPartition(format!("index {} is in no block", i + 1)));
    }
    if let Some(&d) = input.d.iter().find(|&&d| d < 1) {
        return Err(Error::Config(format!("degrees must be positive, got {d}")));
    }
    for (j, b) in input.blocks.iter().enumerate() {
        if b.len() < 3 {
            return Err(Error::BlockTooSmall { block: j + 1, size: b.len() });
        }
        let s = b.iter().fold(Q::zero(), |acc, &i| acc + qf(1, input.d[i]));
        if s != Q::one() {
            return Err(Error::DegreeSumNotOne { block: j + 1, sum: rat::fmt_q(&s) });
        }
    }
    let m_bar = build_lattice(n, &input.lattice)?;
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = input.d[i];
        if !intlat::contains_i64(&m_bar, &e)? {
            return Err(Error::MissingGenerator { what: format!("d_{} e_{}", i + 1, i + 1), vector: e });
        }
    }
    for (j, b) in input.blocks.iter().enumerate() {
        let mut e = vec![0; n];
        for &i in b {
            e[i] = 1;
        }
        if !intlat::contains_i64(&m_bar, &e)? {
            return Err(Error::MissingGenerator { what: format!("e_I{}", j + 1), vector: e });
        }
    }
    let d = input.d.iter().fold(1i64, |acc, &x| acc.lcm(&x));
    let qv: Vec<i64> = input.d.iter().map(|&di| d / di).collect();
    for row in m_bar.basis().to_i64_rows() {
        let pairing: i64 = qv.iter().zip(&row).map(|(a, b)| a * b).sum();
        if pairing % d != 0 {
            return Err(Error::DivisibilityFail { m: row, d, pairing });
        }
    }
    if let Some(v) = &input.v {
        check_volume_vector(&input.blocks, v, n)?;
    }
    let n_bar = intlat::dual_lattice(&m_bar)?;
    let n_sigma = qv.iter().map(|&x| qf(x, d)).collect();
    let mut vt = ValidatedToricData { input, m_bar, n_bar, d, q: qv, n_sigma, xi: Vec::new(), xi0: Vec::new() };
    let (xi, xi0) = enumerate_xi(&vt);
    vt.xi = xi;
    vt.xi0 = xi0;
    Ok(vt)
}

/// `Ξ` (nonnegative lattice points of `M̄` with `<q, m> = d`, sorted
/// lexicographically) and `Ξ₀` (those with two zeros in every block).
pub fn enumerate_xi(vt: &ValidatedToricData) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = vt.n();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn dfs(i: usize, rem: i64, q: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == q.len() {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=rem / q[i] {
            cur[i] = k;
            dfs(i + 1, rem - k * q[i], q, cur, out);
        }
        cur[i] = 0;
    }
    dfs(0, vt.d, &vt.q, &mut cur, &mut out);
    let mut xi: Vec<Vec<i64>> = out.into_iter().filter(|m| vt.in_m_bar(m)).collect();
    xi.sort();
    let xi0 = xi.iter().filter(|p| two_zeros_per_block(vt.blocks(), p)).cloned().collect();
    (xi, xi0)
}

pub fn two_zeros_per_block(blocks: &[Vec<usize>], p: &[i64]) -> bool {
    blocks.iter().all(|b| b.iter().filter(|&&i| p[i] == 0).count() >= 2)
}

/// Subsets `K ⊆ I` with `e_K ∈ M̄`, sorted by size then lexicographically.
pub fn hypercube_members(vt: &ValidatedToricData) -> Result<Vec<Vec<usize>>> {
    let n = vt.n();
    if n > MAX_SUBSET_SCAN {
        return Err(Error::IndexSetTooLarge(n));
    }
    let mut ks: Vec<Vec<usize>> = (0u64..(1u64 << n))
        .into_par_iter()
        .filter_map(|mask| {
            let e: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
            vt.in_m_bar(&e).then(|| (0..n).filter(|i| (mask >> i) & 1 == 1).collect())
        })
        .collect();
    ks.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(ks)
}

pub fn is_union_of_blocks(blocks: &[Vec<usize>], k: &[usize]) -> bool {
    blocks.iter().all(|b| {
        let c = b.iter().filter(|i| k.contains(i)).count();
        c == 0 || c == b.len()
    })
}

fn indicator(n: usize, k: &[usize]) -> Vec<i64> {
    let mut e = vec![0; n];
    for &i in k {
        e[i] = 1;
    }
    e
}

/// Witness for a failed nef-partition condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefWitness {
    /// 0-based block index.
    pub block: usize,
    pub m: Vec<i64>,
    pub pairing: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefVerdict {
    pub holds: bool,
    pub witness: Option<NefWitness>,
}

/// The vector with entries `1/d_i` on block `j` and zero elsewhere.
pub fn block_functional(vt: &ValidatedToricData, j: usize) -> Vec<Q> {
    let mut f = vec![Q::zero(); vt.n()];
    for &i in &vt.input.blocks[j] {
        f[i] = qf(1, vt.input.d[i]);
    }
    f
}

/// Nef-partition: every block functional pairs integrally with `M̄`.
///
/// The verdict is decided on the Hermite basis of `M̄`.  On failure the
/// witness is a hypercube vertex `e_K ∈ M̄` when one exists, chosen with the
/// smallest fractional pairing (then block, size, lexicographic order);
/// otherwise a basis vector.
pub fn check_nef_partition(vt: &ValidatedToricData) -> Result<NefVerdict> {
    let basis = vt.m_bar.basis().to_i64_rows();
    let mut first_basis_failure = None;
    for j in 0..vt.r() {
        let f = block_functional(vt, j);
        for row in &basis {
            let p = rat::dot_qi(&f, row);
            if !rat::is_integer(&p) && first_basis_failure.is_none() {
                first_basis_failure = Some(NefWitness { block: j, m: row.clone(), pairing: p });
            }
        }
    }
    let Some(fallback) = first_basis_failure else {
        return Ok(NefVerdict { holds: true, witness: None });
    };
    let mut best: Option<(Q, usize, usize, Vec<usize>, Q)> = None;
    if vt.n() <= MAX_SUBSET_SCAN {
        for k in hypercube_members(vt)? {
            let e = indicator(vt.n(), &k);
            for j in 0..vt.r() {
                let p = rat::dot_qi(&block_functional(vt, j), &e);
                if rat::is_integer(&p) {
                    continue;
                }
                let frac = &p - p.floor();
                let key = (frac, j, k.len(), k.clone(), p);
                if best.as_ref().is_none_or(|b| (&key.0, key.1, key.2, &key.3) < (&b.0, b.1, b.2, &b.3)) {
                    best = Some(key);
                }
            }
        }
    }
    let witness = match best {
        Some((_, j, _, k, p)) => NefWitness { block: j, m: indicator(vt.n(), &k), pairing: p },
        None => fallback,
    };
    Ok(NefVerdict { holds: false, witness: Some(witness) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetVerdict {
    pub holds: bool,
    /// Offending subsets (0-based), sorted by size then lexicographically.
    pub witnesses: Vec<Vec<usize>>,
}

/// Embeddedness: every `e_K ∈ M̄` has `K` a union of blocks.
pub fn check_embeddedness(vt: &ValidatedToricData) -> Result<SubsetVerdict> {
    let witnesses: Vec<Vec<usize>> =
        hypercube_members(vt)?.into_iter().filter(|k| !is_union_of_blocks(vt.blocks(), k)).collect();
    Ok(SubsetVerdict { holds: witnesses.is_empty(), witnesses })
}

/// No-bc: there is no `K` with `e_K ∈ M̄` and `|K| - 1 = 2 Σ_{i∈K} 1/d_i`.
pub fn check_no_bc(vt: &ValidatedToricData) -> Result<SubsetVerdict> {
    let witnesses: Vec<Vec<usize>> = hypercube_members(vt)?
        .into_iter()
        .filter(|k| {
            let s = k.iter().fold(Q::zero(), |acc, &i| acc + qf(2, vt.input.d[i]));
            q(k.len() as i64 - 1) == s
        })
        .collect();
    Ok(SubsetVerdict { holds: witnesses.is_empty(), witnesses })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroups {
    /// `G = Z^I / M̄`.
    pub g: FiniteAbelianGroup,
    /// Character group of `Z^I / M̄`, computed as `N̄ / Z^I`.
    pub g_star: FiniteAbelianGroup,
    /// `Γ`: characters modulo the diagonal `Z/d`.
    pub gamma: FiniteAbelianGroup,
    /// Order of the diagonal character `m ↦ <q, m>/d` on `Z^I / M̄`.
    pub diagonal_order: BigInt,
}

/// Computes `G`, `G*` and `Γ`.
///
/// `Γ` is computed two ways and the results must agree: as the kernel
/// `{m : d | <q, m>} / M̄` of the diagonal character, and as the cokernel
/// `N̄ / (Z^I + Z n_σ)` of the diagonal subgroup inside the character group.
/// The order identity `|Γ| = |G| / ord(χ)` is checked as well.
pub fn symmetry_groups(vt: &ValidatedToricData) -> Result<SymmetryGroups> {
    let n = vt.n();
    let g = intlat::quotient_group(n, &vt.m_bar)?;

    // Characters: d * N̄ is an integer lattice containing d * Z^I.
    let d = BigInt::from(vt.d);
    let scaled: Vec<Vec<BigInt>> = vt
        .n_bar
        .basis
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let y = x * Q::from_integer(d.clone());
                    if !rat::is_integer(&y) {
                        return Err(Error::DegenerateConfig("dual lattice has denominators beyond d".into()));
                    }
                    Ok(y.to_integer())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let chars = intlat::lattice_from_generators(n, &scaled)?;
    let mut unit_rows: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|k| if i == k { d.clone() } else { BigInt::zero() }).collect()).collect();
    let unit = intlat::lattice_from_generators(n, &unit_rows)?;
    let g_star = intlat::quotient_of_lattices(&chars, &unit)?;
    unit_rows.push(rat::big_vec(&vt.q));
    let with_diag = intlat::lattice_from_generators(n, &unit_rows)?;
    let gamma_cokernel = intlat::quotient_of_lattices(&chars, &with_diag)?;

    let ker = intlat::sublattice_from_congruences(n, &[(vt.q.clone(), vt.d)])?;
    let gamma_kernel = intlat::quotient_of_lattices(&ker, &vt.m_bar)?;

    let gcd_q = vt.q.iter().fold(vt.d, |acc, &x| acc.gcd(&x));
    let diagonal_order = BigInt::from(vt.d / gcd_q);
    if gamma_kernel != gamma_cokernel {
        return Err(Error::DegenerateConfig(format!(
            "Gamma computations disagree: {gamma_kernel} vs {gamma_cokernel}"
        )));
    }
    if gamma_kernel.order() * &diagonal_order != g.order() || g_star != g {
        return Err(Error::DegenerateConfig("group orders are inconsistent".into()));
    }
    Ok(SymmetryGroups { g, g_star, gamma: gamma_kernel, diagonal_order })
}

/// Whether `Σ_j ι(e_{I_j}) = n_σ`.
pub fn block_functionals_sum_to_n_sigma(vt: &ValidatedToricData) -> bool {
    let mut s = vec![Q::zero(); vt.n()];
    for j in 0..vt.r() {
        for (a, b) in s.iter_mut().zip(block_functional(vt, j)) {
            *a += b;
        }
    }
    s == vt.n_sigma
}

pub fn is_one(x: &BigInt) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;

    #[test]
    fn quartic_counts_and_conditions() {
        let vt = fixtures::validated("quartic").unwrap();
        assert_eq!(vt.d, 4);
        assert_eq!(vt.q, vec![1, 1, 1, 1]);
        assert_eq!(vt.xi.len(), 35);
        assert_eq!(vt.xi0.len(), 22);
        assert!(check_nef_partition(&vt).unwrap().holds);
        assert!(check_embeddedness(&vt).unwrap().holds);
        assert!(check_no_bc(&vt).unwrap().holds);
        let g = symmetry_groups(&vt).unwrap();
        assert_eq!(g.g.factors_i64(), vec![4]);
        assert!(g.gamma.is_trivial());
        assert!(block_functionals_sum_to_n_sigma(&vt));
    }

    #[test]
    fn cubic_fourfold_witnesses() {
        let vt = fixtures::validated("cubic-fourfold").unwrap();
        assert_eq!(vt.d, 3);
        assert_eq!(vt.xi0.len(), 24);
        let nef = check_nef_partition(&vt).unwrap();
        assert!(!nef.holds);
        let w = nef.witness.unwrap();
        assert_eq!(w.m, vec![1, 0, 0, 1, 1, 0]);
        assert_eq!(w.pairing, qf(1, 3));
        let emb = check_embeddedness(&vt).unwrap();
        assert!(!emb.holds && emb.witnesses.contains(&vec![0, 3, 4]));
        let nobc = check_no_bc(&vt).unwrap();
        assert!(!nobc.holds && nobc.witnesses.contains(&vec![0, 3, 4]));
        assert!(symmetry_groups(&vt).unwrap().gamma.is_trivial());
    }

    #[test]
    fn z_manifold_witnesses() {
        let vt = fixtures::validated("z-manifold").unwrap();
        assert_eq!(vt.xi0.len(), 36);
        for p in &vt.xi0 {
            let ones = p.iter().filter(|&&x| x == 1).count();
            let threes = p.iter().filter(|&&x| x == 3).count();
            assert!((threes == 1 && ones == 0) || (ones == 3 && threes == 0));
        }
        let emb = check_embeddedness(&vt).unwrap();
        assert_eq!(emb.witnesses.first(), Some(&vec![0, 3, 6]));
        let nef = check_nef_partition(&vt).unwrap().witness.unwrap();
        assert_eq!(nef.m, indicator(9, &[0, 3, 6]));
        assert_eq!(nef.pairing, qf(1, 3));
        assert!(check_no_bc(&vt).unwrap().witnesses.contains(&vec![0, 3, 6]));
        let g = symmetry_groups(&vt).unwrap();
        assert_eq!(g.g.factors_i64(), vec![3, 3]);
        assert_eq!(g.gamma.factors_i64(), vec![3]);
    }

    #[test]
    fn elliptic_xi0_is_the_vertices() {
        let vt = fixtures::validated("elliptic").unwrap();
        assert_eq!(vt.xi0, vec![vec![0, 0, 3], vec![0, 3, 0], vec![3, 0, 0]]);
    }

    #[test]
    fn xi_matches_box_scan() {
        for name in ["elliptic", "quartic", "cubic-fourfold"] {
            let vt = fixtures::validated(name).unwrap();
            let n = vt.n();
            let mut brute = Vec::new();
            let total = (vt.d + 1).pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let m: Vec<i64> = (0..n)
                    .map(|_| {
                        let x = c % (vt.d + 1);
                        c /= vt.d + 1;
                        x
                    })
                    .collect();
                if vt.q_pairing(&m) == vt.d && vt.in_m_bar(&m) {
                    brute.push(m);
                }
            }
            brute.sort();
            assert_eq!(brute, vt.xi, "{name}");
            for p in &vt.xi0 {
                for b in vt.blocks() {
                    assert!(b.iter().filter(|&&i| p[i] != 0).count() <= b.len() - 2);
                }
            }
        }
    }

    #[test]
    fn axiom_failures() {
        let mut bad = fixtures::input("elliptic").unwrap();
        bad.d = vec![3, 3, 4];
        assert!(matches!(validate(bad), Err(Error::DegreeSumNotOne { block: 1, .. })));
        let mut small = fixtures::input("elliptic").unwrap();
        small.blocks = vec![vec![0, 1], vec![2]];
        assert!(matches!(validate(small), Err(Error::BlockTooSmall { .. })));
        let mut nogen = fixtures::input("elliptic").unwrap();
        nogen.lattice = LatticeSpec::Congruences(vec![(vec![1, 1, 1], 9)]);
        assert!(matches!(validate(nogen), Err(Error::MissingGenerator { .. })));
        let mut nodiv = fixtures::input("elliptic").unwrap();
        nodiv.lattice = LatticeSpec::Generators(vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3], vec![1, 1, 1], vec![1, 0, 0]]);
        assert!(matches!(validate(nodiv), Err(Error::DivisibilityFail { .. })));
        let mut badv = fixtures::input("quartic").unwrap();
        badv.v = Some(vec![1, 1, 1, 1]);
        assert!(matches!(validate(badv), Err(Error::InvalidVolumeVector(_))));
    }

    #[test]
    fn default_volume_vectors() {
        let vt = fixtures::validated("quartic").unwrap();
        assert_eq!(default_volume_vector(&vt), vec![1, 1, 1, 0]);
        let vt = fixtures::validated("cubic-fourfold").unwrap();
        assert_eq!(default_volume_vector(&vt), vec![1, 1, 0, 1, 1, 0]);
    }
}
