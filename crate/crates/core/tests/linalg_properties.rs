//! Dense solvers on random systems and on every formulation.

use calderon::formulations::{Assembler, Formulation, Incident, Method, TransmissionProblem, solve};
use calderon::geometry::ParametricCurve;
use calderon::kernels::KernelContext;
use calderon::linalg::{gmres, lu_solve, norm2, norm_inf, CMatrix};
use calderon::operators::OperatorSet;
use calderon::Complex64;
use proptest::prelude::*;

fn matrix(n: usize, vals: &[f64], shift: f64) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        let v = Complex64::new(vals[2 * (i * n + j)], vals[2 * (i * n + j) + 1]);
        if i == j { v + shift } else { v / (n as f64).sqrt() }
    })
}

fn vector(vals: &[f64]) -> Vec<Complex64> {
    vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lu_residual_on_random_systems(vals in prop::collection::vec(-1.0..1.0f64, 2 * 50 * 50), rhs in prop::collection::vec(-1.0..1.0f64, 100)) {
        let a = matrix(50, &vals, 3.0);
        let b = vector(&rhs);
        let x = lu_solve(&a, &b).unwrap();
        let r: Vec<Complex64> = a.matvec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        prop_assert!(norm_inf(&r) <= 1e-11 * norm_inf(&b));
    }

    #[test]
    fn gmres_history_is_monotone(vals in prop::collection::vec(-1.0..1.0f64, 2 * 40 * 40), rhs in prop::collection::vec(-1.0..1.0f64, 80)) {
        let a = matrix(40, &vals, 2.0);
        let b = vector(&rhs);
        let r = gmres(|v| a.matvec(v), &b, 1e-12, 200).unwrap();
        prop_assert!(r.history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        prop_assert!(*r.history.last().unwrap() <= 1e-12);
        let res: Vec<Complex64> = a.matvec(&r.x).iter().zip(&b).map(|(p, q)| p - q).collect();
        prop_assert!(norm2(&res) <= 1e-10 * norm2(&b));
    }

    /// Discrete operators are linear maps.
    #[test]
    fn operators_are_linear(x in prop::collection::vec(-1.0..1.0f64, 64), y in prop::collection::vec(-1.0..1.0f64, 64), s in -3.0..3.0f64) {
        let set = OperatorSet::new(KernelContext::new(ParametricCurve::Kite, 5.0).unwrap(), 16).unwrap();
        let (x, y) = (vector(&x), vector(&y));
        let c = Complex64::new(s, 0.5);
        let combo: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a + c * b).collect();
        for op in [set.v_plain(), set.v_tilde(), set.k_plain(), set.kt_tilde(), set.h()] {
            let lhs = op.apply(&combo);
            let (ox, oy) = (op.apply(&x), op.apply(&y));
            let err = lhs.iter().zip(ox.iter().zip(&oy)).map(|(l, (a, b))| (l - a - c * b).norm()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-12 * norm_inf(&lhs).max(1.0), "{:?}", op.id);
        }
    }
}

#[test]
fn lu_and_gmres_agree_on_every_formulation() {
    let k = 6.0;
    let p = TransmissionProblem::new(ParametricCurve::Kite, k, 10.0, 1.4, Incident::PlaneWave { angle: 0.4 }).unwrap();
    let asm = Assembler::new(&p, 64).unwrap();
    for f in [
        Formulation::L1,
        Formulation::L2,
        Formulation::L2Plain,
        Formulation::L3 { kappa: Complex64::new(k, 0.5) },
        Formulation::L4 { rho: k },
    ] {
        let sys = asm.assemble(f).unwrap();
        let direct = solve(&sys, Method::Lu).unwrap();
        let iterative = solve(&sys, Method::Gmres { tol: 1e-13, max_iter: 2000 }).unwrap();
        assert!(direct.residual <= 1e-10, "{}", f.name());
        let d = match (&direct.solution, &iterative.solution) {
            (calderon::formulations::Solution::Direct { a, phi }, calderon::formulations::Solution::Direct { a: a2, phi: p2 }) => {
                norm_inf(&a.iter().zip(a2).map(|(x, y)| x - y).collect::<Vec<_>>())
                    .max(norm_inf(&phi.iter().zip(p2).map(|(x, y)| x - y).collect::<Vec<_>>()))
                    / norm_inf(a).max(norm_inf(phi))
            }
            (calderon::formulations::Solution::Indirect { mu }, calderon::formulations::Solution::Indirect { mu: m2 }) => {
                norm_inf(&mu.iter().zip(m2).map(|(x, y)| x - y).collect::<Vec<_>>()) / norm_inf(mu)
            }
            _ => unreachable!(),
        };
        assert!(d <= 1e-9, "{}: {d:e}", f.name());
    }
}

/// Iteration counts are a diagnostic of the formulation, not a requirement.
#[test]
fn regularized_formulation_needs_fewer_iterations() {
    let k = 8.0;
    let p = TransmissionProblem::new(ParametricCurve::Kite, k, 32.0, 1.0, Incident::PlaneWave { angle: 0.0 }).unwrap();
    let asm = Assembler::new(&p, 64).unwrap();
    let its = |f| solve(&asm.assemble(f).unwrap(), Method::Gmres { tol: 1e-10, max_iter: 2000 }).unwrap().iterations;
    let (l2, l3) = (its(Formulation::L2), its(Formulation::L3 { kappa: Complex64::new(k, 0.5) }));
    println!("GMRES iterations at N=64, tol 1e-10: L2 {l2}, L3 {l3}");
    assert!(l3 < l2);
}
