//! Diagonal limits of the smooth kernels against Richardson extrapolation
//! of off-diagonal samples.

use calderon::geometry::ParametricCurve;
use calderon::kernels::{KernelContext, KernelId};
use calderon::Complex64;
use std::f64::consts::TAU;
use proptest::prelude::*;

/// Limit as `t → s` from symmetric samples at `±δ`, `±δ/2`.
fn extrapolate(f: impl Fn(f64) -> Complex64, delta: f64) -> Complex64 {
    let sym = |d: f64| 0.5 * (f(d) + f(-d));
    (4.0 * sym(delta / 2.0) - sym(delta)) / 3.0
}

type Kernel<'a> = Box<dyn Fn(f64, f64) -> Complex64 + 'a>;

fn check(ctx: &KernelContext, s: f64) {
    let cases: [(&str, Kernel); 4] = [
        ("B", Box::new(|s, t| ctx.kernel_b(s, t))),
        ("Ã", Box::new(|s, t| ctx.kernel_a_tilde(s, t))),
        ("C", Box::new(|s, t| Complex64::from(ctx.kernel_c(s, t)))),
        ("D", Box::new(|s, t| ctx.kernel_d(s, t))),
    ];
    for (name, k) in cases {
        let diag = k(s, s);
        let limit = extrapolate(|d| k(s, s + d), 4e-3);
        let err = (diag - limit).norm() / diag.norm().max(1.0);
        assert!(err < 1e-7, "{name} at s = {s}: diagonal {diag}, limit {limit}");
        // no blow-up right next to the diagonal
        let near = k(s, s + std::f64::consts::PI / 1024.0);
        assert!((near - diag).norm() < 0.1 * diag.norm().max(1.0), "{name} jumps near s = {s}");
    }
}

#[test]
fn limits_on_the_kite() {
    let ctx = KernelContext::new(ParametricCurve::Kite, 8.0).unwrap();
    for s in [0.0, 0.4, 1.7, 3.0, 4.4, 6.0] {
        check(&ctx, s);
    }
}

#[test]
fn limits_on_the_cavity() {
    let ctx = KernelContext::new(ParametricCurve::Cavity, 5.0).unwrap();
    for s in [0.2, 1.5, 2.9, 5.1] {
        check(&ctx, s);
    }
}

#[test]
fn circle_kernels_are_circulant() {
    let ctx = KernelContext::new(ParametricCurve::unit_circle(), 3.0).unwrap();
    for id in [KernelId::A, KernelId::B, KernelId::ATilde, KernelId::C, KernelId::D, KernelId::E, KernelId::F] {
        let m = ctx.matrix(id, 16);
        let n = m.rows();
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((m[(i, j)] - m[((i + 1) % n, (j + 1) % n)]).norm());
            }
        }
        assert!(dev < 1e-11, "{id:?}: {dev:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `A`, `Ã` and `B` are symmetric in `(s, t)`.
    #[test]
    fn single_layer_kernels_are_symmetric(s in 0.0..TAU, t in 0.0..TAU, k in 0.5..20.0f64) {
        let ctx = KernelContext::new(ParametricCurve::Kite, k).unwrap();
        for (a, b) in [
            (ctx.kernel_a(s, t), ctx.kernel_a(t, s)),
            (ctx.kernel_b(s, t), ctx.kernel_b(t, s)),
            (ctx.kernel_a_tilde(s, t), ctx.kernel_a_tilde(t, s)),
        ] {
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    /// Recombining the split recovers `(i/4)H₀(k|x(s) − x(t)|)`.
    #[test]
    fn split_recombines(s in 0.0..TAU, t in 0.0..TAU, k in 0.5..20.0f64) {
        let ctx = KernelContext::new(ParametricCurve::Kite, k).unwrap();
        let tau = s - t;
        prop_assume!((tau.sin()).abs() > 1e-3 && (tau / 2.0).sin().abs() > 1e-3);
        let (xs, xt) = (ParametricCurve::Kite.point(s), ParametricCurve::Kite.point(t));
        let r = (xs[0] - xt[0]).hypot(xs[1] - xt[1]);
        let exact = Complex64::new(0.0, 0.25) * calderon::specfun::hankel1(0, k * r).unwrap();
        let ln_s = ((tau / 2.0).sin().powi(2)).ln();
        let split = ctx.kernel_a(s, t) * ln_s + ctx.kernel_b(s, t);
        prop_assert!((split - exact).norm() <= 1e-12 * exact.norm().max(1.0));
    }
}
