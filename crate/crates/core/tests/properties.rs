mod common;

use common::*;
use pcgrad::gradients::{difference_gradient, instant_pv3_mult, instant_pv_np};
use pcgrad::indicators::{kii3, kii3_ratio_form, p_average};
use pcgrad::matrix::{enumerate_triads, upper_len};
use pcgrad::{kii, MultiplicativePCMatrix, PExponent, PriorityVector};
use proptest::prelude::*;

fn log_entries(n: usize, spread: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-spread..=spread, upper_len(n))
}

fn matrix(n: usize, spread: f64) -> impl Strategy<Value = MultiplicativePCMatrix> {
    log_entries(n, spread).prop_map(move |logs| {
        MultiplicativePCMatrix::from_upper(n, logs.into_iter().map(f64::exp).collect()).unwrap()
    })
}

fn any_matrix() -> impl Strategy<Value = MultiplicativePCMatrix> {
    (3usize..=7).prop_flat_map(|n| matrix(n, 4.0))
}

fn exponent() -> impl Strategy<Value = PExponent> {
    prop_oneof![
        Just(PExponent::Infinity),
        (0.05f64..8.0).prop_map(fin),
        (-6.0f64..-0.05).prop_map(fin),
    ]
}

proptest! {
    #[test]
    fn log_exp_round_trip(m in any_matrix()) {
        let back = m.to_additive().to_multiplicative();
        for (a, b) in m.upper().iter().zip(back.upper()) {
            prop_assert!(((a - b) / a).abs() < 1e-12);
        }
        let b = m.to_additive();
        let again = b.to_multiplicative().to_additive();
        prop_assert!(max_abs_diff(b.upper(), again.upper()) < 1e-12);
    }

    #[test]
    fn triad_defect_ignores_index_order(m in (3usize..=6).prop_flat_map(|n| matrix(n, 3.0))) {
        let n = m.order();
        let b = m.to_additive();
        let g = b.to_grid();
        for t in enumerate_triads(n).unwrap() {
            let (i, j, k) = (t.i - 1, t.j - 1, t.k - 1);
            let d = b.triad_defect(t);
            for (x, y, z) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                let cyclic = (g[x][y] + g[y][z] + g[z][x]).abs();
                prop_assert!((cyclic - d).abs() < 1e-12, "{cyclic} vs {d}");
            }
        }
    }

    #[test]
    fn weights_give_consistent_matrices(w in (3usize..=8).prop_flat_map(|n| prop::collection::vec(-3.0f64..=3.0, n))) {
        let w: Vec<f64> = w.into_iter().map(|x| 10f64.powf(x)).collect();
        let pv = PriorityVector::new(w.clone()).unwrap();
        let m = MultiplicativePCMatrix::from_weights(&pv).unwrap();
        prop_assert!(m.to_additive().triad_defects().iter().all(|&d| d < 1e-12));
        let total: f64 = w.iter().sum();
        let gmm = m.gmm_priority_vector();
        for (g, x) in gmm.weights().iter().zip(&w) {
            prop_assert!((g - x / total).abs() < 1e-10);
        }
    }

    #[test]
    fn indicator_in_unit_interval(m in any_matrix(), p in exponent()) {
        if let Ok(v) = kii(&m, p) {
            prop_assert!((0.0..1.0).contains(&v), "{v}");
        }
    }

    #[test]
    fn zero_exactly_on_consistent(w in prop::collection::vec(-2.0f64..=2.0, 5), p in exponent()) {
        let pv = PriorityVector::new(w.into_iter().map(f64::exp).collect()).unwrap();
        let m = MultiplicativePCMatrix::from_weights(&pv).unwrap();
        if !p.is_negative() {
            prop_assert!(kii(&m, p).unwrap() < 1e-12);
        }
    }

    #[test]
    fn positive_on_inconsistent(m in matrix(4, 3.0), p in exponent()) {
        prop_assume!(!m.is_consistent(1e-9));
        if let Ok(v) = kii(&m, p) {
            prop_assert!(v > 0.0);
        }
    }

    #[test]
    fn order_three_collapses(m in matrix(3, 5.0), p in exponent()) {
        let u = m.upper();
        let want = kii3(u[0], u[1], u[2]);
        prop_assume!(want > 1e-9);
        prop_assert!((kii(&m, p).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn triad_closed_forms_agree(m in matrix(3, 6.0)) {
        let u = m.upper();
        prop_assert!((kii3(u[0], u[1], u[2]) - kii3_ratio_form(u[0], u[1], u[2])).abs() < 1e-12);
    }

    #[test]
    fn relabeling_keeps_indicator(m in (4usize..=6).prop_flat_map(|n| matrix(n, 3.0)), p in exponent(), seed in any::<u64>()) {
        let perm = random_permutation(&mut rng(seed), m.order());
        if let Ok(base) = kii(&m, p) {
            prop_assert!((kii(&m.permuted(&perm), p).unwrap() - base).abs() < 1e-12);
            prop_assert!((kii(&m.transpose(), p).unwrap() - base).abs() < 1e-12);
        }
    }

    #[test]
    fn power_mean_monotone_in_arguments(xs in prop::collection::vec(0.01f64..10.0, 1..8), idx in any::<prop::sample::Index>(), bump in 0.0f64..5.0, p in exponent()) {
        let mut ys = xs.clone();
        let i = idx.index(xs.len());
        ys[i] += bump;
        prop_assert!(p_average(&ys, p).unwrap() >= p_average(&xs, p).unwrap() * (1.0 - 1e-12));
    }

    #[test]
    fn power_mean_of_constant(c in 0.001f64..1e3, len in 1usize..10, p in exponent()) {
        let v = p_average(&vec![c; len], p).unwrap();
        prop_assert!((v - c).abs() <= 1e-12 * c);
    }

    #[test]
    fn triad_gradient_collapse(m in matrix(3, 4.0), p in (0.1f64..5.0)) {
        let u = m.upper();
        prop_assume!(kii3(u[0], u[1], u[2]) > 1e-6);
        let general = instant_pv_np(&m, fin(p)).unwrap();
        let closed = instant_pv3_mult(u[0], u[1], u[2]).unwrap();
        prop_assert!(max_abs_diff(general.components(), closed.components()) < 1e-10);
    }

    #[test]
    fn analytic_gradient_matches_central_differences(seed in any::<u64>(), p in prop_oneof![Just(0.5), Just(2.0), Just(3.0)]) {
        let m = random_matrix_with_defects(&mut rng(seed), 4, 0.1, 5.0);
        let p = fin(p);
        let v = instant_pv_np(&m, p).unwrap();
        let f = |x: &[f64]| kii(&MultiplicativePCMatrix::from_upper(4, x.to_vec()).unwrap(), p).unwrap();
        let oracle = central_gradient(f, m.upper(), 1e-6);
        prop_assert!(max_abs_sum(v.components(), &oracle) < 1e-6, "{:?} vs {:?}", v.components(), oracle);
        // the library's forward difference converges to the same gradient
        let fd = difference_gradient(&m, p, 1e-6).unwrap();
        prop_assert!(max_abs_diff(fd.components(), &oracle) < 1e-3 * (1.0 + v.norm()));
    }
}

#[test]
fn inversion_flips_triad_direction() {
    // a -> 1/a maps u to -u; by the chain rule the direction at the inverse
    // satisfies v'(1/a) = -a^2 v(a) componentwise.
    let mut r = rng(7);
    for _ in 0..500 {
        let m = random_matrix(&mut r, 3, 4.0);
        let u = m.upper();
        let Ok(v) = instant_pv3_mult(u[0], u[1], u[2]) else {
            continue;
        };
        let w = instant_pv3_mult(1.0 / u[0], 1.0 / u[1], 1.0 / u[2]).unwrap();
        for ((a, x), y) in u.iter().zip(v.components()).zip(w.components()) {
            let want = -a * a * x;
            assert!(
                (y - want).abs() <= 1e-12 * want.abs().max(1.0),
                "{y} vs {want}"
            );
        }
    }
}

#[test]
fn indicator_increases_with_exponent_on_sample() {
    let m = pcgrad::repro::sample_square_matrix();
    let values: Vec<f64> = [fin(-1.0), fin(0.5), fin(1.0), fin(2.0), PExponent::Infinity]
        .into_iter()
        .map(|p| kii(&m, p).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
}

#[test]
fn approaches_max_indicator() {
    let mut r = rng(11);
    for n in [4, 5] {
        for _ in 0..50 {
            let m = random_matrix_with_defects(&mut r, n, 0.1, 5.0);
            let top = kii(&m, PExponent::Infinity).unwrap();
            let series: Vec<f64> = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
                .iter()
                .map(|&p| kii(&m, fin(p)).unwrap())
                .collect();
            assert!(series.windows(2).all(|w| w[0] <= w[1]), "{series:?}");
            assert!((top - series[5]).abs() < 0.02 && series[5] <= top);
        }
    }
}

#[test]
fn forward_difference_error_is_first_order() {
    let mut r = rng(12);
    for _ in 0..50 {
        let m = random_matrix_with_defects(&mut r, 4, 0.1, 5.0);
        let v = instant_pv_np(&m, fin(2.0)).unwrap();
        let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&l| {
                max_abs_sum(
                    v.components(),
                    difference_gradient(&m, fin(2.0), l).unwrap().components(),
                )
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[1] / w[0];
            assert!((0.05..0.2).contains(&ratio), "{errs:?}");
        }
    }
}
