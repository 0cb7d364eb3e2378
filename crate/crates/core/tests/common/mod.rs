//! Shared oracles for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use calderon::specfun::bessel_jy_orders;
use calderon::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Mie series far field of a penetrable disk of radius `r` hit by the plane
/// wave `e^{ik₊x₁}`; `ν` scales the interior normal derivative.
pub fn mie_far_field(r: f64, k_plus: f64, k_minus: f64, nu: f64, angles: &[f64]) -> Vec<Complex64> {
    let n_max = (k_plus.max(k_minus) * r) as usize + 40;
    let (jp, yp) = bessel_jy_orders(n_max + 1, k_plus * r).unwrap();
    let (jm, _) = bessel_jy_orders(n_max + 1, k_minus * r).unwrap();
    let deriv = |f: &[f64], n: usize, x: f64| if n == 0 { -f[1] } else { f[n - 1] - n as f64 / x * f[n] };
    let mut coef = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let hp = Complex64::new(jp[n], yp[n]);
        let dhp = Complex64::new(deriv(&jp, n, k_plus * r), deriv(&yp, n, k_plus * r));
        let djp = deriv(&jp, n, k_plus * r);
        let djm = deriv(&jm, n, k_minus * r);
        let inn = I.powu(n as u32);
        // a·H − b·J₋ = −iⁿJ₊,  a·k₊H' − b·νk₋J₋' = −iⁿk₊J₊'
        let (m11, m12, m21, m22) = (hp, Complex64::from(-jm[n]), k_plus * dhp, Complex64::from(-nu * k_minus * djm));
        let (r1, r2) = (-inn * jp[n], -inn * k_plus * djp);
        let det = m11 * m22 - m12 * m21;
        coef.push((r1 * m22 - m12 * r2) / det);
    }
    let c = Complex64::from_polar((2.0 / (PI * k_plus)).sqrt(), -0.25 * PI);
    angles
        .iter()
        .map(|&th| {
            let s: Complex64 = coef
                .iter()
                .enumerate()
                .map(|(n, a)| a * (-I).powu(n as u32) * if n == 0 { 1.0 } else { 2.0 } * (n as f64 * th).cos())
                .sum();
            c * s
        })
        .collect()
}
