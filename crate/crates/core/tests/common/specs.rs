//! Seeded draws of feasible random-problem parameters.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saddlegap_core::RandomSpec;

/// A feasible spec with `n ≤ n_max`, `m ≤ m_max` and every admissible rank
/// structure reachable, including full rank, zero operators and kernel
/// overlap.
pub fn draw_spec(rng: &mut ChaCha8Rng, n_max: usize, m_max: usize) -> RandomSpec {
    let n = rng.random_range(1..=n_max);
    let m = rng.random_range(1..=m_max);
    let rank_b = rng.random_range(0..=m.min(n));
    let rank_a = rng.random_range(0..=n);
    let null_b = n - rank_b;
    let null_a = n - rank_a;
    let lo = (null_a + null_b).saturating_sub(n);
    let hi = null_a.min(null_b);
    let overlap_dim = rng.random_range(lo..=hi);
    let scale = 10f64.powf(rng.random_range(-2.0..2.0));
    RandomSpec {
        scale,
        ..RandomSpec::new(n, m, rank_b, rank_a, overlap_dim, rng.random())
    }
}

/// `count` specs from one master seed.
pub fn spec_batch(seed: u64, count: usize, n_max: usize, m_max: usize) -> Vec<RandomSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| draw_spec(&mut rng, n_max, m_max))
        .collect()
}

/// A random pair of subspaces of `Rⁿ`, `n ≤ n_max`, given as spanning sets.
///
/// The pair shares a random number of directions, and with some probability
/// one contains the other or the pair is nearly orthogonal, so vacuous,
/// degenerate and generic gaps all occur.
pub fn draw_subspace_pair(
    rng: &mut ChaCha8Rng,
    n_max: usize,
) -> (saddlegap_core::DenseMatrix, saddlegap_core::DenseMatrix) {
    use rand_distr::StandardNormal;
    let n = rng.random_range(1..=n_max);
    let k1 = rng.random_range(0..=n);
    let k2 = rng.random_range(0..=n);
    let shared = rng.random_range(0..=k1.min(k2));
    let mut gauss =
        |len: usize| -> Vec<f64> { (0..len).map(|_| rng.sample(StandardNormal)).collect() };
    let common: Vec<Vec<f64>> = (0..shared).map(|_| gauss(n)).collect();
    let mut d = common.clone();
    d.extend((shared..k1).map(|_| gauss(n)));
    let mut p = common;
    p.extend((shared..k2).map(|_| gauss(n)));
    let mode: u8 = rng.random_range(0..6);
    if mode == 0 {
        // P ⊇ D
        p.extend(d.iter().cloned());
    } else if mode == 1 && n > 1 {
        // Nearly orthogonal: D in the first half of the coordinates, P in the second.
        let half = n / 2;
        for v in d.iter_mut() {
            v[half..].iter_mut().for_each(|x| *x *= 1e-3);
        }
        for v in p.iter_mut() {
            v[..half].iter_mut().for_each(|x| *x *= 1e-3);
        }
    }
    let to_mat = |cols: &[Vec<f64>]| saddlegap_core::DenseMatrix::from_columns(n, cols).unwrap();
    (to_mat(&d), to_mat(&p))
}
