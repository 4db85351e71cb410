//! Facets of full-dimensional rational polytopes by gift wrapping, and
//! pulling triangulations.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qlin;
use crate::rat::{self, Q};

/// A facet `{x : normal · x = offset}` with `normal · x <= offset` on every
/// input point.  `members` are the input points on the facet, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<Q>,
    pub offset: Q,
    pub members: Vec<usize>,
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scales a nonzero vector to coprime integers.
pub fn normalize(v: Vec<Q>) -> Vec<Q> {
    use num_integer::Integer;
    let lcm = v.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

/// Dimension of the affine hull of the selected points (-1 encoded as 0 for
/// an empty selection).
pub fn affine_dim(points: &[Vec<Q>], idx: &[usize]) -> usize {
    if idx.len() <= 1 {
        return 0;
    }
    let r0 = &points[idx[0]];
    let rows: Vec<Vec<Q>> = idx[1..].iter().map(|&i| sub(&points[i], r0)).collect();
    qlin::rank(&rows)
}

/// Row indices of a maximal linearly independent subset, chosen greedily.
fn independent_rows(rows: &[Vec<Q>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        basis.push(r.clone());
        if qlin::rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Affine coordinates of the selected points inside their own affine hull,
/// which must have dimension `dim`.  Returns the local points and the
/// direction basis used.
pub fn local_coordinates(points: &[Vec<Q>], idx: &[usize], dim: usize) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let r0 = &points[idx[0]];
    let diffs: Vec<Vec<Q>> = idx.iter().map(|&i| sub(&points[i], r0)).collect();
    let basis: Vec<Vec<Q>> = independent_rows(&diffs).into_iter().map(|i| diffs[i].clone()).collect();
    assert_eq!(basis.len(), dim, "affine hull has unexpected dimension");
    let amb = r0.len();
    // Solve B^T t = y - r0.
    let bt: Vec<Vec<Q>> = (0..amb).map(|c| basis.iter().map(|b| b[c].clone()).collect()).collect();
    let local = diffs
        .iter()
        .map(|y| qlin::solve(&bt, y).expect("point lies in the affine hull"))
        .collect();
    (local, basis)
}

fn members_of(points: &[Vec<Q>], normal: &[Q], offset: &Q) -> Vec<usize> {
    (0..points.len()).filter(|&i| rat::dot_q(normal, &points[i]) == *offset).collect()
}

/// Rotates the supporting hyperplane `(n, F)` about `aff(F)` in the
/// direction `w` until it meets another point.
fn rotate(points: &[Vec<Q>], n: &[Q], w: &[Q], r: &[Q]) -> (Vec<Q>, Q) {
    let mut best: Option<Q> = None;
    for x in points {
        let dx = sub(x, r);
        let a = -rat::dot_q(n, &dx);
        if a.is_positive() {
            let ratio = rat::dot_q(w, &dx) / a;
            if best.as_ref().is_none_or(|b| ratio > *b) {
                best = Some(ratio);
            }
        }
    }
    let alpha = best.expect("points are full-dimensional");
    let normal = normalize(n.iter().zip(w).map(|(a, b)| &alpha * a + b).collect());
    let offset = rat::dot_q(&normal, r);
    (normal, offset)
}

fn simplex_facets(points: &[Vec<Q>]) -> Vec<Facet> {
    let k = points.len();
    let mut out: Vec<Facet> = (0..k)
        .map(|drop| {
            let members: Vec<usize> = (0..k).filter(|&i| i != drop).collect();
            let r0 = &points[members[0]];
            let rows: Vec<Vec<Q>> = members[1..].iter().map(|&i| sub(&points[i], r0)).collect();
            let mut n = normalize(qlin::nullspace(&rows, r0.len()).remove(0));
            let mut c = rat::dot_q(&n, r0);
            if rat::dot_q(&n, &points[drop]) > c {
                n = n.into_iter().map(|x| -x).collect();
                c = -c;
            }
            Facet { normal: n, offset: c, members }
        })
        .collect();
    out.sort_by(|a, b| a.members.cmp(&b.members));
    out
}

/// All facets of `conv(points)`.  The points must be distinct and affinely
/// span their ambient space of dimension at least 1.
pub fn facets(points: &[Vec<Q>]) -> Result<Vec<Facet>> {
    let dim = points.first().map_or(0, |p| p.len());
    let all: Vec<usize> = (0..points.len()).collect();
    if dim == 0 || affine_dim(points, &all) != dim {
        return Err(Error::DegenerateConfig(format!(
            "{} points do not affinely span dimension {dim}",
            points.len()
        )));
    }
    if points.len() == dim + 1 {
        return Ok(simplex_facets(points));
    }
    if dim == 1 {
        let lo = points.iter().map(|p| p[0].clone()).min().expect("nonempty");
        let hi = points.iter().map(|p| p[0].clone()).max().expect("nonempty");
        let mut out = vec![
            Facet { normal: vec![-Q::one()], offset: -lo.clone(), members: members_of(points, &[-Q::one()], &-lo) },
            Facet { normal: vec![Q::one()], offset: hi.clone(), members: members_of(points, &[Q::one()], &hi) },
        ];
        out.sort_by(|a, b| a.members.cmp(&b.members));
        return Ok(out);
    }

    // Initial facet: start from a supporting hyperplane and rotate.
    let mut n: Vec<Q> = (0..dim).map(|i| if i == 0 { Q::one() } else { Q::zero() }).collect();
    let mut c = points.iter().map(|p| p[0].clone()).max().expect("nonempty");
    let mut f = members_of(points, &n, &c);
    while affine_dim(points, &f) < dim - 1 {
        let r0 = points[f[0]].clone();
        let mut rows: Vec<Vec<Q>> = f[1..].iter().map(|&i| sub(&points[i], &r0)).collect();
        rows.push(n.clone());
        let w = qlin::nullspace(&rows, dim).remove(0);
        let (n2, c2) = rotate(points, &n, &w, &r0);
        n = n2;
        c = c2;
        f = members_of(points, &n, &c);
    }

    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    seen.insert(f.clone());
    queue.push_back(Facet { normal: n, offset: c, members: f });
    while let Some(facet) = queue.pop_front() {
        let (local, basis) = local_coordinates(points, &facet.members, dim - 1);
        let ridges = facets(&local)?;
        for ridge in ridges {
            // Lift the local ridge normal to a direction inside the facet
            // hyperplane: B w = n_loc, n · w = 0.
            let mut sys = basis.clone();
            sys.push(facet.normal.clone());
            let mut rhs = ridge.normal.clone();
            rhs.push(Q::zero());
            let w = qlin::solve(&sys, &rhs).expect("facet basis with normal is invertible");
            let r = points[facet.members[ridge.members[0]]].clone();
            let (n2, c2) = rotate(points, &facet.normal, &w, &r);
            let m2 = members_of(points, &n2, &c2);
            if seen.insert(m2.clone()) {
                queue.push_back(Facet { normal: n2, offset: c2, members: m2 });
            }
        }
        out.push(facet);
    }
    out.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(out)
}

/// Whether point `k` is a vertex of `conv(points)`.
pub fn is_vertex(points: &[Vec<Q>], k: usize) -> Result<bool> {
    let dim = points[0].len();
    if points.len() == dim + 1 {
        return Ok(true);
    }
    let normals: Vec<Vec<Q>> =
        facets(points)?.into_iter().filter(|f| f.members.contains(&k)).map(|f| f.normal).collect();
    Ok(qlin::rank(&normals) == dim)
}

/// A triangulation of `conv(points)` using only its points, obtained by
/// pulling the first point and recursing into the facets that avoid it.
/// Each simplex is listed by `dim + 1` point indices.
pub fn pulling_triangulation(points: &[Vec<Q>]) -> Result<Vec<Vec<usize>>> {
    let dim = points.first().map_or(0, |p| p.len());
    if points.len() == dim + 1 {
        return Ok(vec![(0..points.len()).collect()]);
    }
    let mut out = Vec::new();
    for f in facets(points)? {
        if f.members.contains(&0) {
            continue;
        }
        let sub_simplices = if dim == 1 {
            vec![vec![0]]
        } else {
            let (local, _) = local_coordinates(points, &f.members, dim - 1);
            pulling_triangulation(&local)?
        };
        for s in sub_simplices {
            let mut simplex: Vec<usize> = s.into_iter().map(|i| f.members[i]).collect();
            simplex.push(0);
            simplex.sort();
            out.push(simplex);
        }
    }
    out.sort();
    Ok(out)
}

/// `|det(x_1 - x_0, ..., x_D - x_0)|` for a simplex given by `D + 1` points.
pub fn normalized_volume(simplex: &[&Vec<Q>]) -> Q {
    let r0 = simplex[0];
    let rows: Vec<Vec<Q>> = simplex[1..].iter().map(|p| sub(p, r0)).collect();
    qlin::det(&rows).abs()
}

/// Normalized volume of `conv(points)`.
pub fn polytope_volume(points: &[Vec<Q>]) -> Result<Q> {
    Ok(pulling_triangulation(points)?
        .iter()
        .map(|s| normalized_volume(&s.iter().map(|&i| &points[i]).collect::<Vec<_>>()))
        .fold(Q::zero(), |a, b| a + b))
}
