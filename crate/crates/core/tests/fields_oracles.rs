//! Layer potentials and far fields against the Green representation and the
//! radiation limit.

use calderon::fields::*;
use calderon::geometry::ParametricCurve;
use calderon::harness::verify::extinction_errors;
use calderon::Complex64;

const SOURCE: [f64; 2] = [0.1, 0.2];

/// Exterior Green representation of `Φ_k(· − SOURCE)`.
fn representation(k: f64, half: usize) -> FieldEvaluator {
    let curve = ParametricCurve::Kite;
    let (a, phi) = cauchy_data(&curve, half, |x| fundamental(k, x, SOURCE), |x| fundamental_gradient(k, x, SOURCE)).unwrap();
    FieldEvaluator::new(&curve, half)
        .unwrap()
        .single_layer(k, phi.iter().map(|v| -v).collect())
        .unwrap()
        .double_layer(k, a)
        .unwrap()
}

#[test]
fn far_field_is_the_radiation_limit() {
    let k = 5.0;
    let rep = representation(k, 96);
    let angles = [0.0, 1.1, 2.5, 4.0];
    let ff = rep.far_field(&angles).unwrap();
    for (j, &th) in angles.iter().enumerate() {
        let xhat = [th.cos(), th.sin()];
        let scaled = |r: f64| {
            let u = rep.eval(&[[r * xhat[0], r * xhat[1]]]).unwrap()[0];
            u * r.sqrt() * Complex64::from_polar(1.0, -k * r)
        };
        let (a, b, c) = (scaled(50.0), scaled(100.0), scaled(200.0));
        // eliminate the 1/R and 1/R² terms
        let ab = 2.0 * b - a;
        let bc = 2.0 * c - b;
        let limit = (4.0 * bc - ab) / 3.0;
        assert!((limit - ff.values[j]).norm() < 1e-8, "θ = {th}: {limit} vs {}", ff.values[j]);
        assert!((ff.values[j] - fundamental_far_field(k, th, SOURCE)).norm() < 1e-12);
    }
}

#[test]
fn representation_and_null_field() {
    let outside: Vec<[f64; 2]> = directions(10).iter().map(|t| [3.0 * t.cos(), 2.5 * t.sin()]).collect();
    let inside: Vec<[f64; 2]> = directions(10).iter().map(|t| [0.3 * t.cos(), 0.5 * t.sin()]).collect();
    let (repro, null) = extinction_errors(&ParametricCurve::Kite, 8.0, SOURCE, 128, &outside, &inside).unwrap();
    assert!(repro <= 1e-10 && null <= 1e-10, "{repro:e} {null:e}");
}

#[test]
fn point_values_converge_fast() {
    let z = [3.0, 2.0];
    let exact = fundamental(8.0, z, SOURCE);
    let errs: Vec<f64> = [32, 40, 48, 64].iter().map(|&n| (representation(8.0, n).eval(&[z]).unwrap()[0] - exact).norm()).collect();
    assert!(errs[0] > 1e3 * errs[3] && errs[3] < 1e-11, "{errs:?}");
}

#[test]
fn guard_distance_scales_with_spacing() {
    let rep = representation(3.0, 64);
    let expected = GUARD_FACTOR * std::f64::consts::PI / 64.0;
    let speed = (0..1000)
        .map(|j| ParametricCurve::Kite.eval(j as f64 * 0.00628).speed())
        .fold(0.0, f64::max);
    assert!((rep.guard_distance() / expected - speed).abs() < 0.01 * speed);
    // the tip of the kite at t = 0 is (1, 0)
    assert!(matches!(rep.eval(&[[1.0 + 0.5 * rep.guard_distance(), 0.0]]), Err(calderon::Error::Domain(_))));
}

#[test]
fn far_field_needs_one_wavenumber() {
    let curve = ParametricCurve::unit_circle();
    let ev = FieldEvaluator::new(&curve, 8)
        .unwrap()
        .single_layer(1.0, vec![Complex64::new(1.0, 0.0); 16])
        .unwrap()
        .single_layer(2.0, vec![Complex64::new(1.0, 0.0); 16])
        .unwrap();
    assert!(ev.far_field(&[0.0]).is_err());
}
