//! Independent oracles and helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use mirrorcone::qlin;
use mirrorcone::rat::{self, Q};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lower cells of `{(x_k, h_k)}` by brute force: every affinely independent
/// `(D+1)`-subset spans a non-vertical hyperplane; keep the ones lying
/// weakly below all lifted points and collect the points they touch.
pub fn brute_force_cells(points: &[Vec<Q>], heights: &[Q]) -> Vec<Vec<usize>> {
    let dim = points[0].len();
    let n = points.len();
    let mut cells = BTreeSet::new();
    let mut idx: Vec<usize> = (0..=dim).collect();
    loop {
        // Solve a · x + c = h on the subset.
        let rows: Vec<Vec<Q>> = idx
            .iter()
            .map(|&k| points[k].iter().cloned().chain(std::iter::once(rat::q(1))).collect())
            .collect();
        let rhs: Vec<Q> = idx.iter().map(|&k| heights[k].clone()).collect();
        if qlin::rank(&rows) == dim + 1 {
            let sol = qlin::solve(&rows, &rhs).expect("invertible");
            let eval = |x: &[Q]| rat::dot_q(&sol[..dim], x) + &sol[dim];
            let below = (0..n).all(|k| !(eval(&points[k]) - &heights[k]).is_positive());
            if below {
                let touched: Vec<usize> = (0..n).filter(|&k| eval(&points[k]) == heights[k]).collect();
                cells.insert(touched);
            }
        }
        // Next combination.
        let mut i = dim + 1;
        loop {
            if i == 0 {
                return cells.into_iter().collect();
            }
            i -= 1;
            if idx[i] < n - (dim + 1 - i) {
                break;
            }
        }
        idx[i] += 1;
        for t in i + 1..=dim {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// A random integer vector with block sums `|I_j| - 1`.
pub fn random_admissible_v(blocks: &[Vec<usize>], n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut v = vec![0; n];
    for b in blocks {
        let mut s = 0;
        for &i in &b[..b.len() - 1] {
            v[i] = rng.gen_range(-5..=5);
            s += v[i];
        }
        v[*b.last().unwrap()] = b.len() as i64 - 1 - s;
    }
    v
}

/// Random positive rational weights with small numerators and denominators.
pub fn random_weights(xi0: &[Vec<i64>], seed: u64) -> BTreeMap<Vec<i64>, Q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    xi0.iter().map(|p| (p.clone(), rat::qf(rng.gen_range(1..=40), rng.gen_range(1..=7)))).collect()
}
