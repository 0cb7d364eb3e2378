//! Weight-coefficient oracles and Fourier-operator invariants.

use std::f64::consts::{LN_2, PI};

use calderon::fourier::{
    diff_apply, dld_apply, interpolate, lambda_apply, oracle, psi_hat, weighted_conv, TrigPolynomial, Weight,
    WeightTable,
};
use calderon::Complex64;
use proptest::prelude::*;

const WEIGHTS: [Weight; 3] = [Weight::Smooth, Weight::Log, Weight::SinSqLog];

#[test]
fn tables_match_quadrature_and_series() {
    let mut worst: f64 = 0.0;
    for w in WEIGHTS {
        for n in -64..=64 {
            let q = oracle::psi_hat_quadrature(w, n);
            let s = oracle::psi_hat_series(w, n);
            assert!((q - s).abs() <= 1e-12, "{w:?} n={n}: quadrature {q} series {s}");
            worst = worst.max((psi_hat(w, n) - q).abs());
        }
    }
    assert!(worst <= 1e-12, "worst table/oracle gap {worst:e}");
}

#[test]
fn printed_table_values_fail_the_oracle() {
    // misprinted log-weight values: −2 log 4 at n = 0 and −2/|n| otherwise,
    // sin²·log values ½ at n = 0 and −3/8 at |n| = 1
    let printed = [
        (Weight::Log, 0, -2.0 * 4f64.ln()),
        (Weight::Log, 3, -2.0 / 3.0),
        (Weight::SinSqLog, 0, 0.5),
        (Weight::SinSqLog, 1, -0.375),
    ];
    for (w, n, v) in printed {
        assert!((oracle::psi_hat_quadrature(w, n) - v).abs() > 1e-3, "{w:?} n={n}");
    }
}

#[test]
fn sinsq_log_from_log_by_product_rule() {
    for n in -64..=64i64 {
        let rhs = 0.5 * psi_hat(Weight::Log, n) - 0.25 * (psi_hat(Weight::Log, n - 1) + psi_hat(Weight::Log, n + 1));
        assert!((psi_hat(Weight::SinSqLog, n) - rhs).abs() < 1e-15, "n={n}");
    }
}

#[test]
fn interpolation_error_decays_geometrically() {
    let f = |t: f64| 1.0 / (2.0 + t.cos());
    let err = |half: usize| -> f64 {
        let samples: Vec<Complex64> =
            (0..2 * half).map(|j| Complex64::new(f(j as f64 * PI / half as f64), 0.0)).collect();
        let g = interpolate(&samples).unwrap();
        (0..997).map(|i| (g.eval(i as f64 * 2.0 * PI / 997.0).re - f(i as f64 * 2.0 * PI / 997.0)).abs()).fold(0.0, f64::max)
    };
    let e: Vec<f64> = [8, 16, 32].iter().map(|&h| err(h)).collect();
    assert!(e[1] <= 0.5 * e[0] && e[2] <= 0.5 * e[1].max(1e-15), "{e:?}");
}

#[test]
fn spectral_symbols_exact_up_to_64() {
    let half = 64;
    for n in -63..=64i64 {
        let e = TrigPolynomial::basis(n, half).unwrap();
        let lam = if n == 0 { LN_2 } else { 0.5 / n.unsigned_abs() as f64 };
        let l = lambda_apply(&e);
        let d = dld_apply(&e);
        for j in 0..2 * half {
            assert!((l.nodal()[j] - e.nodal()[j] * lam).norm() <= 1e-14);
            assert!((d.nodal()[j] - e.nodal()[j] * (-0.5 * n.unsigned_abs() as f64)).norm() <= 1e-14 * (1.0 + n.abs() as f64));
        }
    }
}

/// Product quadrature done the slow way: sum of exact `∫ψ e_n` integrals.
fn brute_force(weight: Weight, samples: &[Complex64]) -> Vec<Complex64> {
    let half = samples.len() / 2;
    let g = interpolate(samples).unwrap();
    (0..2 * half)
        .map(|i| {
            let s = i as f64 * PI / half as f64;
            (-(half as i64) + 1..=half as i64)
                .map(|n| g.coefficient(n) * 2.0 * PI * psi_hat(weight, n) * Complex64::from_polar(1.0, n as f64 * s))
                .sum()
        })
        .collect()
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weighted_conv_matches_brute_force(half in 1usize..=32, seed in complex_vec(64), m in 0u32..3) {
        let samples = &seed[..2 * half];
        let w = Weight::from_index(m).unwrap();
        let fast = weighted_conv(&WeightTable::new(w, half).unwrap(), samples).unwrap();
        let slow = brute_force(w, samples);
        for (a, b) in fast.iter().zip(&slow) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn nodal_and_spectral_views_agree(half in 1usize..=32, seed in complex_vec(64)) {
        let samples = &seed[..2 * half];
        let g = interpolate(samples).unwrap();
        for (j, s) in samples.iter().enumerate() {
            prop_assert!((g.eval(j as f64 * PI / half as f64) - s).norm() <= 1e-13 * (1.0 + s.norm()));
        }
        let again = interpolate(g.nodal()).unwrap();
        for (a, b) in again.spectral().iter().zip(g.spectral()) {
            prop_assert!((a - b).norm() <= 1e-14);
        }
    }

    #[test]
    fn diagonal_operators_commute_with_grid_shifts(seed in complex_vec(32), shift in 0usize..32) {
        let g = interpolate(&seed).unwrap();
        let shifted: Vec<Complex64> = (0..32).map(|j| seed[(j + shift) % 32]).collect();
        let gs = interpolate(&shifted).unwrap();
        for op in [lambda_apply, diff_apply, dld_apply] {
            let a = op(&g);
            let b = op(&gs);
            for j in 0..32 {
                prop_assert!((a.nodal()[(j + shift) % 32] - b.nodal()[j]).norm() <= 1e-12);
            }
        }
    }
}
