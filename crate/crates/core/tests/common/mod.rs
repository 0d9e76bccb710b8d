// Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use pcgrad::matrix::upper_len;
use pcgrad::{AdditivePCMatrix, MultiplicativePCMatrix, PExponent};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fin(p: f64) -> PExponent {
    PExponent::finite(p).unwrap()
}

/// Random matrix with log-entries uniform in `[-spread, spread]`.
pub fn random_matrix(rng: &mut impl Rng, n: usize, spread: f64) -> MultiplicativePCMatrix {
    let upper = (0..upper_len(n))
        .map(|_| rng.random_range(-spread..=spread).exp())
        .collect();
    MultiplicativePCMatrix::from_upper(n, upper).unwrap()
}

/// Random matrix whose triad defects all lie in `[lo, hi]` (rejection sampling).
pub fn random_matrix_with_defects(
    rng: &mut impl Rng,
    n: usize,
    lo: f64,
    hi: f64,
) -> MultiplicativePCMatrix {
    random_matrix_with_defects_spread(rng, n, lo, hi, 3.0)
}

pub fn random_matrix_with_defects_spread(
    rng: &mut impl Rng,
    n: usize,
    lo: f64,
    hi: f64,
    spread: f64,
) -> MultiplicativePCMatrix {
    loop {
        let m = random_matrix(rng, n, spread);
        if m.to_additive()
            .triad_defects()
            .iter()
            .all(|&d| d >= lo && d <= hi)
        {
            return m;
        }
    }
}

pub fn random_additive(rng: &mut impl Rng, n: usize, spread: f64) -> AdditivePCMatrix {
    random_matrix(rng, n, spread).to_additive()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// Central-difference gradient of `f` at `x`.
pub fn central_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], step: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + step;
            let up = f(&y);
            y[i] = x[i] - step;
            let down = f(&y);
            y[i] = x[i];
            (up - down) / (2.0 * step)
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs_sum(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x + y).abs())
        .fold(0.0, f64::max)
}
