//! Integer lattices: Hermite and Smith normal forms, membership, kernels,
//! duals and finite quotient groups.
//!
//! Sublattices of `Z^n` are stored by their row-style Hermite normal form:
//! lower-triangular echelon form whose pivot is the last nonzero entry of each
//! row, pivots strictly increasing and positive, and every entry in a pivot
//! column of a later row reduced into `[0, pivot)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qlin;
use crate::rat::Q;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers; all rows must have
    /// length `cols`.
    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let big: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(big, cols)
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows converted to `i64`; panics only if an entry does not fit, which
    /// cannot happen for the bounded data this crate builds.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| crate::rat::to_i64(x).expect("entry fits in i64")).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn to_q_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| Q::from_integer(x.clone())).collect())
            .collect()
    }
}

/// A sublattice of `Z^ambient_rank` in canonical Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    /// Index in the ambient lattice, `None` when the quotient is infinite.
    pub fn index(&self) -> Option<BigInt> {
        if !self.is_full_rank() {
            return None;
        }
        Some((0..self.rank()).fold(BigInt::one(), |acc, i| acc * self.basis.get(i, i)))
    }

    pub fn full(n: usize) -> Self {
        Sublattice { ambient_rank: n, basis: IntMatrix::identity(n) }
    }

    /// Pivot column of basis row `i`.
    fn pivot(&self, i: usize) -> usize {
        let r = self.basis.row(i);
        (0..r.len()).rev().find(|&j| !r[j].is_zero()).expect("basis rows are nonzero")
    }
}

/// Finite abelian group presented by invariant factors `d_1 | d_2 | ...`,
/// each at least 2.  The empty list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: Vec::new() }
    }

    /// Builds the group from arbitrary positive diagonal entries of a Smith
    /// form, dropping units.
    pub fn from_diagonal(diag: &[BigInt]) -> Self {
        let mut f: Vec<BigInt> = diag.iter().map(|x| x.abs()).filter(|x| !x.is_one()).collect();
        f.sort();
        FiniteAbelianGroup { invariant_factors: f }
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn factors_i64(&self) -> Vec<i64> {
        self.invariant_factors.iter().map(|x| crate::rat::to_i64(x).expect("small factor")).collect()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Basis of the rational dual `{n : <n, m> in Z for all m in L}` of a
/// full-rank lattice `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLatticeBasis {
    pub basis: Vec<Vec<Q>>,
}

impl RationalLatticeBasis {
    /// The dual of this lattice.  Dualizing twice returns a basis of the
    /// original lattice.
    pub fn dual(&self) -> Result<RationalLatticeBasis> {
        let n = self.basis.len();
        let inv = qlin::inverse(&self.basis).ok_or(Error::InfiniteQuotient { rank: n, ambient: n })?;
        let rows = (0..n).map(|i| (0..n).map(|j| inv[j][i].clone()).collect()).collect();
        Ok(RationalLatticeBasis { basis: rows })
    }

    /// Whether `v` pairs integrally with every basis vector.
    pub fn pairs_integrally(&self, v: &[Q]) -> bool {
        self.basis.iter().all(|b| crate::rat::is_integer(&crate::rat::dot_q(b, v)))
    }

    /// Canonical integer sublattice spanned by this basis, if integral.
    pub fn to_sublattice(&self) -> Option<Sublattice> {
        if !self.basis.iter().flatten().all(crate::rat::is_integer) {
            return None;
        }
        let n = self.basis.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> =
            self.basis.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
        Some(hnf_canonicalize(&IntMatrix::from_rows(rows, n).ok()?))
    }

    /// Whether `v` lies in the lattice (integer coordinates in this basis).
    pub fn contains(&self, v: &[Q]) -> bool {
        let n = self.basis.len();
        let at: Vec<Vec<Q>> = (0..v.len()).map(|j| (0..n).map(|i| self.basis[i][j].clone()).collect()).collect();
        match qlin::solve(&at, v) {
            Some(c) => c.iter().all(crate::rat::is_integer) && qlin::rank(&self.basis) == n,
            None => false,
        }
    }
}

fn hnf_rows(rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut pending: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in (0..ncols).rev() {
        loop {
            let nz: Vec<usize> = (0..pending.len()).filter(|&i| !pending[i][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| pending[i][col].abs()).unwrap();
            if nz.len() == 1 {
                let mut row = pending.swap_remove(p);
                if row[col].is_negative() {
                    for x in row.iter_mut() {
                        *x = -&*x;
                    }
                }
                out.push(row);
                break;
            }
            let prow = pending[p].clone();
            for &i in &nz {
                if i == p {
                    continue;
                }
                let f = pending[i][col].div_floor(&prow[col]);
                for (x, y) in pending[i].iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        pending.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out.reverse();
    let piv: Vec<usize> = out.iter().map(|r| (0..ncols).rev().find(|&j| !r[j].is_zero()).unwrap()).collect();
    for i in (0..out.len()).rev() {
        let pc = piv[i];
        let pv = out[i][pc].clone();
        let prow = out[i].clone();
        for k in i + 1..out.len() {
            let f = out[k][pc].div_floor(&pv);
            if !f.is_zero() {
                for (x, y) in out[k].iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
    }
    out
}

/// Canonical Hermite normal form of the lattice generated by the rows of
/// `generators`; zero rows are dropped.
pub fn hnf_canonicalize(generators: &IntMatrix) -> Sublattice {
    let n = generators.cols();
    let rows = hnf_rows(generators.to_rows(), n);
    let basis = IntMatrix::from_rows(rows, n).expect("rows have ambient length");
    Sublattice { ambient_rank: n, basis }
}

/// Lattice generated by integer vectors of length `n`.
pub fn lattice_from_generators(n: usize, gens: &[Vec<BigInt>]) -> Result<Sublattice> {
    Ok(hnf_canonicalize(&IntMatrix::from_rows(gens.to_vec(), n)?))
}

/// Integer coordinates of `v` in the Hermite basis of `lat`, if `v` lies in
/// the lattice.
pub fn coordinates(lat: &Sublattice, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if v.len() != lat.ambient_rank {
        return Err(Error::DimensionMismatch { expected: lat.ambient_rank, got: v.len() });
    }
    let mut rem = v.to_vec();
    let k = lat.rank();
    let mut coeff = vec![BigInt::zero(); k];
    for i in (0..k).rev() {
        let pc = lat.pivot(i);
        let row = lat.basis.row(i);
        // Entries right of this pivot must already be cleared.
        let (c, r) = rem[pc].div_rem(&row[pc]);
        if !r.is_zero() {
            return Ok(None);
        }
        if !c.is_zero() {
            for (x, y) in rem.iter_mut().zip(row) {
                *x -= &c * y;
            }
        }
        coeff[i] = c;
        let next_pivot = if i == 0 { 0 } else { lat.pivot(i - 1) + 1 };
        if rem[next_pivot..pc].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
    }
    if rem.iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    Ok(Some(coeff))
}

/// Whether `v` is an integer combination of the basis rows.
pub fn contains(lat: &Sublattice, v: &[BigInt]) -> Result<bool> {
    Ok(coordinates(lat, v)?.is_some())
}

pub fn contains_i64(lat: &Sublattice, v: &[i64]) -> Result<bool> {
    contains(lat, &crate::rat::big_vec(v))
}

/// Nonzero diagonal entries (positive, each dividing the next) of the Smith
/// normal form of `m`.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        let best = (t..r)
            .flat_map(|i| (t..c).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = a[i][t].div_floor(&a[t][t]);
                let prow = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let y = row[t].clone();
                    row[j] -= &f * y;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // Move the smallest remaining entry of row/column t to the pivot.
                let mut best = (t, t);
                for i in t..r {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..c {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                } else if best.1 != t {
                    for row in a.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&ri) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Sublattice `{m : <c_k, m> = 0 mod n_k for all k}` of `Z^n`.
pub fn sublattice_from_congruences(n: usize, congruences: &[(Vec<i64>, i64)]) -> Result<Sublattice> {
    let mut a_rows = Vec::new();
    for (c, modulus) in congruences {
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: c.len() });
        }
        if *modulus < 1 {
            return Err(Error::Config(format!("modulus must be at least 1, got {modulus}")));
        }
        a_rows.push(crate::rat::big_vec(c));
    }
    let a = IntMatrix::from_rows(a_rows, n)?;
    let moduli: Vec<BigInt> = congruences.iter().map(|(_, m)| BigInt::from(*m)).collect();
    let target = IntMatrix::from_rows(
        (0..moduli.len())
            .map(|i| (0..moduli.len()).map(|j| if i == j { moduli[i].clone() } else { BigInt::zero() }).collect())
            .collect(),
        moduli.len(),
    )?;
    preimage(&a, &hnf_canonicalize(&target))
}

/// Basis of the integer right kernel `{x in Z^cols : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Sublattice {
    let (k, n) = (a.rows(), a.cols());
    // Rows (column j of A | e_j); unimodular row operations clear the first k
    // coordinates and the rows with vanishing prefix span the kernel.
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut r: Vec<BigInt> = (0..k).map(|i| a.get(i, j).clone()).collect();
            r.extend((0..n).map(|t| if t == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut start = 0;
    for col in 0..k {
        loop {
            let nz: Vec<usize> = (start..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            if nz.len() == 1 {
                rows.swap(start, p);
                start += 1;
                break;
            }
            let prow = rows[p].clone();
            for &i in &nz {
                if i != p {
                    let f = rows[i][col].div_floor(&prow[col]);
                    for (x, y) in rows[i].iter_mut().zip(&prow) {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    let gens: Vec<Vec<BigInt>> = rows[start..].iter().map(|r| r[k..].to_vec()).collect();
    hnf_canonicalize(&IntMatrix::from_rows(gens, n).expect("kernel rows have length n"))
}

/// Preimage `{x in Z^n : A x in L}` of a sublattice `L` of `Z^k` under the
/// `k x n` matrix `A`.
pub fn preimage(a: &IntMatrix, lat: &Sublattice) -> Result<Sublattice> {
    let (k, n) = (a.rows(), a.cols());
    if lat.ambient_rank != k {
        return Err(Error::DimensionMismatch { expected: k, got: lat.ambient_rank });
    }
    let r = lat.rank();
    // Kernel of [A | -B^T] over Z^(n + r), projected to the first n coordinates.
    let mut big = Vec::with_capacity(k);
    for i in 0..k {
        let mut row: Vec<BigInt> = a.row(i).to_vec();
        row.extend((0..r).map(|t| -lat.basis.get(t, i)));
        big.push(row);
    }
    let ker = integer_kernel(&IntMatrix::from_rows(big, n + r)?);
    let gens: Vec<Vec<BigInt>> = ker.basis.to_rows().into_iter().map(|row| row[..n].to_vec()).collect();
    lattice_from_generators(n, &gens)
}

/// Sum of two sublattices of the same ambient lattice.
pub fn lattice_sum(a: &Sublattice, b: &Sublattice) -> Result<Sublattice> {
    if a.ambient_rank != b.ambient_rank {
        return Err(Error::DimensionMismatch { expected: a.ambient_rank, got: b.ambient_rank });
    }
    let mut rows = a.basis.to_rows();
    rows.extend(b.basis.to_rows());
    lattice_from_generators(a.ambient_rank, &rows)
}

/// `Z^n / lat` as a finite abelian group.
pub fn quotient_group(n: usize, lat: &Sublattice) -> Result<FiniteAbelianGroup> {
    if lat.ambient_rank != n {
        return Err(Error::DimensionMismatch { expected: n, got: lat.ambient_rank });
    }
    if !lat.is_full_rank() {
        return Err(Error::InfiniteQuotient { rank: lat.rank(), ambient: n });
    }
    Ok(FiniteAbelianGroup::from_diagonal(&smith_invariants(&lat.basis)))
}

/// Finite quotient `outer / inner` for sublattices `inner <= outer` of equal
/// rank.
pub fn quotient_of_lattices(outer: &Sublattice, inner: &Sublattice) -> Result<FiniteAbelianGroup> {
    let (torsion, free) = cokernel_in(outer, inner)?;
    if free > 0 {
        return Err(Error::InfiniteQuotient { rank: inner.rank(), ambient: outer.rank() });
    }
    Ok(torsion)
}

/// Torsion part and free rank of `outer / inner`; errors if `inner` is not
/// contained in `outer`.
pub fn cokernel_in(outer: &Sublattice, inner: &Sublattice) -> Result<(FiniteAbelianGroup, usize)> {
    let mut coords = Vec::new();
    for i in 0..inner.rank() {
        let c = coordinates(outer, inner.basis.row(i))?
            .ok_or_else(|| Error::DegenerateConfig("inner lattice is not contained in the outer one".into()))?;
        coords.push(c);
    }
    let k = outer.rank();
    let m = IntMatrix::from_rows(coords, k)?;
    let diag = smith_invariants(&m);
    Ok((FiniteAbelianGroup::from_diagonal(&diag), k - diag.len()))
}

/// Dual lattice of a full-rank sublattice: rows of the inverse transpose of
/// its basis.
pub fn dual_lattice(lat: &Sublattice) -> Result<RationalLatticeBasis> {
    if !lat.is_full_rank() {
        return Err(Error::InfiniteQuotient { rank: lat.rank(), ambient: lat.ambient_rank });
    }
    RationalLatticeBasis { basis: lat.basis.to_q_rows() }.dual()
}
