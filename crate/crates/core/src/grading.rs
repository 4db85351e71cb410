//! Finitely presented grading data and the morphisms between them.
//!
//! A grading datum is `Z ⊕ Z^k` modulo a relation lattice, with the map
//! `Z → datum`, `j ↦ (j, 0)`.  Degrees are compared by membership of their
//! difference in the relation lattice.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlat::{self, FiniteAbelianGroup, IntMatrix, Sublattice};
use crate::rat::{self, q, Q};
use crate::toricdata::ValidatedToricData;

pub const G: &str = "G";
pub const G_TILDE: &str = "G~";
pub const G_DELTA: &str = "G_Delta";
pub const G_MF: &str = "G_MF";
pub const G_Z: &str = "Z";

#[derive(Clone, Debug)]
pub struct GradingDatum {
    pub name: String,
    /// `k`, the rank of the lattice part.
    pub rank: usize,
    /// Relators as written, rows of length `1 + k`.
    pub relators: Vec<Vec<i64>>,
    pub relations: Sublattice,
    /// Elements are `(j, m)` with `m` in this lattice; `None` means `Z^k`.
    pub m_domain: Option<Sublattice>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GDeg {
    pub datum: String,
    pub j: i64,
    pub m: Vec<i64>,
}

impl GDeg {
    pub fn new(datum: &str, j: i64, m: Vec<i64>) -> GDeg {
        GDeg { datum: datum.to_string(), j, m }
    }

    fn vector(&self) -> Vec<i64> {
        let mut v = vec![self.j];
        v.extend(&self.m);
        v
    }

    pub fn add(&self, o: &GDeg) -> GDeg {
        GDeg { datum: self.datum.clone(), j: self.j + o.j, m: self.m.iter().zip(&o.m).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: i64) -> GDeg {
        GDeg { datum: self.datum.clone(), j: s * self.j, m: self.m.iter().map(|a| s * a).collect() }
    }
}

impl GradingDatum {
    fn new(name: &str, rank: usize, relators: Vec<Vec<i64>>, m_domain: Option<Sublattice>) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = relators.iter().map(|r| rat::big_vec(r)).collect();
        let relations = intlat::lattice_from_generators(rank + 1, &rows)?;
        Ok(GradingDatum { name: name.into(), rank, relators, relations, m_domain })
    }

    pub fn deg(&self, j: i64, m: Vec<i64>) -> GDeg {
        GDeg::new(&self.name, j, m)
    }

    pub fn zero(&self) -> GDeg {
        self.deg(0, vec![0; self.rank])
    }

    /// Whether `(j, m)` is an element of this datum.
    pub fn contains(&self, a: &GDeg) -> bool {
        a.datum == self.name
            && a.m.len() == self.rank
            && self.m_domain.as_ref().is_none_or(|l| intlat::contains_i64(l, &a.m).unwrap_or(false))
    }

    /// Parity of the first coordinate is well defined.
    pub fn sign_map_well_defined(&self) -> bool {
        self.relators.iter().all(|r| r[0] % 2 == 0)
    }

    pub fn sign(&self, a: &GDeg) -> i64 {
        a.j.rem_euclid(2)
    }
}

/// `a ~ b` in the datum.
pub fn deg_equal(datum: &GradingDatum, a: &GDeg, b: &GDeg) -> Result<bool> {
    for x in [a, b] {
        if x.datum != datum.name {
            return Err(Error::DatumMismatch(x.datum.clone(), datum.name.clone()));
        }
        if x.m.len() != datum.rank {
            return Err(Error::DimensionMismatch { expected: datum.rank, got: x.m.len() });
        }
    }
    let diff: Vec<i64> = a.vector().iter().zip(b.vector()).map(|(x, y)| x - y).collect();
    intlat::contains_i64(&datum.relations, &diff)
}

/// A linear map `(j, m) ↦ A (j, m)` between data.  Entries may be rational
/// when the map is only integral on the source domain.
#[derive(Clone, Debug)]
pub struct GradingMorphism {
    pub name: String,
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<Q>>,
}

impl GradingMorphism {
    pub fn apply(&self, a: &GDeg) -> Result<GDeg> {
        if a.datum != self.source {
            return Err(Error::DatumMismatch(a.datum.clone(), self.source.clone()));
        }
        let v = a.vector();
        let out: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| {
                let x = rat::dot_qi(row, &v);
                if rat::is_integer(&x) {
                    Ok(rat::to_i64(&x.to_integer()).expect("small degree"))
                } else {
                    Err(Error::NonIntegralDegree(format!("{} applied to {:?}", self.name, v)))
                }
            })
            .collect::<Result<_>>()?;
        Ok(GDeg::new(&self.target, out[0], out[1..].to_vec()))
    }
}

/// All grading data and morphisms attached to validated toric data.
#[derive(Clone, Debug)]
pub struct GradingData {
    pub g: GradingDatum,
    pub g_tilde: GradingDatum,
    pub g_delta: GradingDatum,
    pub g_mf: GradingDatum,
    pub z: GradingDatum,
    pub p: GradingMorphism,
    pub q: GradingMorphism,
    pub r: GradingMorphism,
    pub s: GradingMorphism,
    pub t: GradingMorphism,
    pub u: GradingMorphism,
    pub v: GradingMorphism,
    pub volume_vector: Vec<i64>,
}

fn identity_block(n: usize, sign: i64) -> Vec<Vec<Q>> {
    (0..n).map(|i| (0..n).map(|k| if i == k { q(sign) } else { Q::zero() }).collect()).collect()
}

fn with_j_row(j_row: Vec<Q>, m_rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let mut out = vec![j_row];
    out.extend(m_rows);
    out
}

/// Prepends a zero column (the `j` input) to each row.
fn pad_left(rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    rows.into_iter()
        .map(|r| {
            let mut v = vec![Q::zero()];
            v.extend(r);
            v
        })
        .collect()
}

pub fn build_grading_data(vt: &ValidatedToricData) -> Result<GradingData> {
    let n = vt.n();
    let blocks: Vec<Vec<i64>> = (0..vt.r()).map(|j| vt.block_vector(j)).collect();
    let with_j = |j: i64, m: &[i64]| {
        let mut v = vec![j];
        v.extend(m);
        v
    };

    let g = GradingDatum::new(G, n, blocks.iter().map(|e| with_j(0, e)).collect(), Some(vt.m_bar.clone()))?;
    let g_tilde = GradingDatum::new(
        G_TILDE,
        n,
        blocks.iter().map(|e| with_j(2 * (1 - e.iter().sum::<i64>()), e)).collect(),
        None,
    )?;
    let delta_rel = vt
        .m_bar
        .basis()
        .to_i64_rows()
        .iter()
        .map(|m| {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            with_j(2 * vt.q_pairing(m) / vt.d, &neg)
        })
        .collect();
    let g_delta = GradingDatum::new(G_DELTA, n, delta_rel, None)?;
    let g_mf = GradingDatum::new(G_MF, 1, vec![vec![2, -vt.d]], None)?;
    let z = GradingDatum::new(G_Z, 0, Vec::new(), None)?;

    let ones = vec![q(1); n];
    let v = vt.volume_vector();

    // p(k, m) = (k + 2<n_σ - e_I, m>, m)
    let mut p_j = vec![q(1)];
    p_j.extend(vt.n_sigma.iter().map(|x| (x - q(1)) * q(2)));
    let p = GradingMorphism {
        name: "p".into(),
        source: G.into(),
        target: G_TILDE.into(),
        matrix: with_j_row(p_j, pad_left(identity_block(n, 1))),
    };
    // q(j, m) = j
    let mut q_j = vec![q(1)];
    q_j.extend(vec![Q::zero(); n]);
    let q_m = GradingMorphism { name: "q".into(), source: G.into(), target: G_Z.into(), matrix: vec![q_j] };
    // r(k, m) = (k + 2|m|, -m)
    let mut r_j = vec![q(1)];
    r_j.extend(ones.iter().map(|x| x * q(2)));
    let r = GradingMorphism {
        name: "r".into(),
        source: G_TILDE.into(),
        target: G_DELTA.into(),
        matrix: with_j_row(r_j, pad_left(identity_block(n, -1))),
    };
    // s(k) = (k, 0)
    let mut s_rows = vec![vec![q(1)]];
    s_rows.extend((0..n).map(|_| vec![Q::zero()]));
    let s = GradingMorphism { name: "s".into(), source: G_Z.into(), target: G_DELTA.into(), matrix: s_rows };
    // t(k, m) = (k, <q, m>)
    let mut t_j = vec![q(1)];
    t_j.extend(vec![Q::zero(); n]);
    let mut t_m = vec![Q::zero()];
    t_m.extend(vt.q.iter().map(|&x| q(x)));
    let t = GradingMorphism { name: "t".into(), source: G_DELTA.into(), target: G_MF.into(), matrix: vec![t_j, t_m] };
    // u(k) = (k, 0)
    let u = GradingMorphism {
        name: "u".into(),
        source: G_Z.into(),
        target: G_MF.into(),
        matrix: vec![vec![q(1)], vec![Q::zero()]],
    };
    // v(j, m) = j + 2<v, m>
    let mut v_j = vec![q(1)];
    v_j.extend(v.iter().map(|&x| q(2 * x)));
    let v_m = GradingMorphism { name: "v".into(), source: G_TILDE.into(), target: G_Z.into(), matrix: vec![v_j] };

    Ok(GradingData { g, g_tilde, g_delta, g_mf, z, p, q: q_m, r, s, t, u, v: v_m, volume_vector: v })
}

impl GradingData {
    pub fn datum(&self, name: &str) -> &GradingDatum {
        match name {
            G => &self.g,
            G_TILDE => &self.g_tilde,
            G_DELTA => &self.g_delta,
            G_MF => &self.g_mf,
            _ => &self.z,
        }
    }

    pub fn data(&self) -> [&GradingDatum; 5] {
        [&self.g, &self.g_tilde, &self.g_delta, &self.g_mf, &self.z]
    }

    pub fn morphisms(&self) -> [&GradingMorphism; 7] {
        [&self.p, &self.q, &self.r, &self.s, &self.t, &self.u, &self.v]
    }

    /// Every relator of the source maps to zero in the target.
    pub fn morphism_well_defined(&self, f: &GradingMorphism) -> Result<bool> {
        let src = self.datum(&f.source);
        let tgt = self.datum(&f.target);
        for rel in &src.relators {
            let img = f.apply(&src.deg(rel[0], rel[1..].to_vec()))?;
            if !deg_equal(tgt, &img, &tgt.zero())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generators of the source: `(1, 0)` and `(0, b)` for a basis of the
    /// `m`-domain.
    pub fn spanning_set(&self, datum: &GradingDatum) -> Vec<GDeg> {
        let mut out = vec![datum.deg(1, vec![0; datum.rank])];
        match &datum.m_domain {
            Some(l) => out.extend(l.basis().to_i64_rows().into_iter().map(|b| datum.deg(0, b))),
            None => out.extend((0..datum.rank).map(|i| {
                let mut e = vec![0; datum.rank];
                e[i] = 1;
                datum.deg(0, e)
            })),
        }
        out
    }
}

/// Degree of a named generator.
pub fn generator_degrees(vt: &ValidatedToricData) -> Vec<(String, GDeg)> {
    let n = vt.n();
    let e = |i: usize, s: i64| {
        let mut v = vec![0; n];
        v[i] = s;
        v
    };
    let mut out = Vec::new();
    for i in 0..n {
        out.push((format!("z_{}", i + 1), GDeg::new(G_TILDE, 2, e(i, -1))));
        out.push((format!("theta_{}", i + 1), GDeg::new(G_TILDE, -1, e(i, 1))));
        out.push((format!("phi_{}", i + 1), GDeg::new(G_TILDE, 1, e(i, -1))));
        out.push((format!("u_{}", i + 1), GDeg::new(G_TILDE, 1, vec![0; n])));
        out.push((format!("z_{} (Delta)", i + 1), GDeg::new(G_DELTA, 0, e(i, 1))));
    }
    out
}

/// `r_p = p(0, p)`, the degree of the coefficient of `z^p`.
pub fn coefficient_degree(data: &GradingData, p: &[i64]) -> Result<GDeg> {
    data.p.apply(&data.g.deg(0, p.to_vec()))
}

/// Degree of `z^a` in `G~`.
pub fn monomial_degree(a: &[i64]) -> GDeg {
    GDeg::new(G_TILDE, 2 * a.iter().sum::<i64>(), a.iter().map(|x| -x).collect())
}

/// `s ∘ q ~ r ∘ p` on a spanning set of `G`.
pub fn check_commutative_square(data: &GradingData) -> Result<bool> {
    for x in data.spanning_set(&data.g) {
        let left = data.s.apply(&data.q.apply(&x)?)?;
        let right = data.r.apply(&data.p.apply(&x)?)?;
        if !deg_equal(&data.g_delta, &left, &right)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Kernel `{x : f(x) ~ 0} / relations` of a morphism, as a finite group and
/// a free rank.  With `mod_z`, both sides are first divided by the image of
/// `Z`.
pub fn morphism_kernel(data: &GradingData, f: &GradingMorphism, mod_z: bool) -> Result<(FiniteAbelianGroup, usize)> {
    let src = data.datum(&f.source);
    let tgt = data.datum(&f.target);
    let dim = src.rank + 1;
    let tdim = tgt.rank + 1;
    let unit = |len: usize| {
        let mut v = vec![0i64; len];
        v[0] = 1;
        v
    };
    // Hermite basis of the source domain Z ⊕ (m-domain).
    let mut gens: Vec<Vec<BigInt>> = vec![rat::big_vec(&unit(dim))];
    match &src.m_domain {
        Some(l) => gens.extend(l.basis().to_rows().into_iter().map(|b| {
            let mut v = vec![BigInt::zero()];
            v.extend(b);
            v
        })),
        None => gens.extend((1..dim).map(|i| (0..dim).map(|k| BigInt::from((i == k) as i64)).collect())),
    }
    let dom = intlat::lattice_from_generators(dim, &gens)?;
    let domain = dom.basis().to_i64_rows();
    let images: Vec<Vec<i64>> = domain
        .iter()
        .map(|x| f.apply(&src.deg(x[0], x[1..].to_vec())).map(|g| g.vector()))
        .collect::<Result<_>>()?;
    let mut trel: Vec<Vec<BigInt>> = tgt.relators.iter().map(|r| rat::big_vec(r)).collect();
    let mut srel: Vec<Vec<i64>> = src.relators.clone();
    if mod_z {
        trel.push(rat::big_vec(&unit(tdim)));
        srel.push(unit(dim));
    }
    let target_rel = intlat::lattice_from_generators(tdim, &trel)?;
    // Columns of A are the images of the domain basis.
    let a_rows: Vec<Vec<i64>> = (0..tdim).map(|i| images.iter().map(|c| c[i]).collect()).collect();
    let a = IntMatrix::from_i64_rows(&a_rows, domain.len())?;
    let ker = intlat::preimage(&a, &target_rel)?;
    let rel_coords: Vec<Vec<BigInt>> = srel
        .iter()
        .map(|r| {
            intlat::coordinates(&dom, &rat::big_vec(r))?
                .ok_or_else(|| Error::DegenerateConfig(format!("relator {r:?} outside the domain")))
        })
        .collect::<Result<_>>()?;
    let rel_lat = intlat::lattice_from_generators(domain.len(), &rel_coords)?;
    intlat::cokernel_in(&ker, &rel_lat)
}

/// Cokernel of `G/Z → ker(G~/Z → G_Δ/Z)` induced by `p`, where
/// `G/Z = M̄/E`, `G~/Z = Z^I/E`, `G_Δ/Z = Z^I/M̄` and `E` is spanned by the
/// block vectors.
pub fn coker_h(vt: &ValidatedToricData) -> Result<FiniteAbelianGroup> {
    let n = vt.n();
    let e_rows: Vec<Vec<BigInt>> = (0..vt.r()).map(|j| rat::big_vec(&vt.block_vector(j))).collect();
    let e = intlat::lattice_from_generators(n, &e_rows)?;
    // r induces m ↦ -m on the lattice parts.
    let neg: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| if i == k { -1 } else { 0 }).collect()).collect();
    let ker = intlat::preimage(&IntMatrix::from_i64_rows(&neg, n)?, &vt.m_bar)?;
    let ker = intlat::lattice_sum(&ker, &e)?;
    // p induces m ↦ m on the lattice parts.
    let image = intlat::lattice_sum(&vt.m_bar, &e)?;
    let (group, free) = intlat::cokernel_in(&ker, &image)?;
    if free != 0 {
        return Err(Error::DegenerateConfig(format!("cokernel has free rank {free}")));
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;

    #[test]
    fn relations_as_written() {
        let vt = fixtures::validated("quartic").unwrap();
        let data = build_grading_data(&vt).unwrap();
        assert_eq!(data.g_mf.relators, vec![vec![2, -4]]);
        let mf = &data.g_mf;
        assert!(deg_equal(mf, &mf.deg(2, vec![-4]), &mf.zero()).unwrap());
        let gd = &data.g_delta;
        assert!(deg_equal(gd, &gd.deg(2, vec![-1, -1, -1, -1]), &gd.zero()).unwrap());
        for datum in data.data() {
            assert!(datum.sign_map_well_defined());
            if datum.rank > 0 || !datum.relators.is_empty() {
                assert!(!deg_equal(datum, &datum.deg(1, vec![0; datum.rank]), &datum.zero()).unwrap());
            }
        }
        assert!(matches!(deg_equal(mf, &gd.zero(), &mf.zero()), Err(Error::DatumMismatch(..))));
    }

    #[test]
    fn morphisms_square_and_cokernel_on_fixtures() {
        for name in fixtures::NAMES {
            let vt = fixtures::validated(name).unwrap();
            let data = build_grading_data(&vt).unwrap();
            for f in data.morphisms() {
                assert!(data.morphism_well_defined(f).unwrap(), "{name}: {}", f.name);
            }
            assert!(check_commutative_square(&data).unwrap());
            assert!(coker_h(&vt).unwrap().is_trivial());
            let (k, free) = morphism_kernel(&data, &data.p, false).unwrap();
            assert!(k.is_trivial() && free == 0, "{name}");
            let (k, free) = morphism_kernel(&data, &data.p, true).unwrap();
            assert!(k.is_trivial() && free == 0, "{name}");
        }
    }

    #[test]
    fn superpotential_monomials_have_degree_two() {
        for name in fixtures::NAMES {
            let vt = fixtures::validated(name).unwrap();
            let data = build_grading_data(&vt).unwrap();
            let two = data.g_tilde.deg(2, vec![0; vt.n()]);
            for p in &vt.xi0 {
                let d = monomial_degree(p).add(&coefficient_degree(&data, p).unwrap());
                assert!(deg_equal(&data.g_tilde, &d, &two).unwrap());
                let z_delta = data.g_delta.deg(0, p.clone());
                let mf = data.t.apply(&z_delta).unwrap();
                assert!(deg_equal(&data.g_mf, &mf, &data.g_mf.deg(2, vec![0])).unwrap());
            }
            for j in 0..vt.r() {
                let d = monomial_degree(&vt.block_vector(j));
                assert!(deg_equal(&data.g_tilde, &d, &two).unwrap());
            }
        }
    }

    #[test]
    fn generator_degrees_match_conventions() {
        let vt = fixtures::validated("elliptic").unwrap();
        let degs = generator_degrees(&vt);
        assert!(degs.contains(&("z_1".into(), GDeg::new(G_TILDE, 2, vec![-1, 0, 0]))));
        assert!(degs.contains(&("theta_2".into(), GDeg::new(G_TILDE, -1, vec![0, 1, 0]))));
        assert!(degs.contains(&("z_3 (Delta)".into(), GDeg::new(G_DELTA, 0, vec![0, 0, 1]))));
    }
}
