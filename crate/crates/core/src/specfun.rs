//! Bessel and Hankel functions of orders 0 and 1.
//!
//! For `|z| ≤ 20` the four functions come from one Miller backward
//! recurrence normalized by `J₀ + 2ΣJ₂ₖ = 1`, with `Y₀` and `Y₁` obtained
//! from their Neumann series in the same pass. Beyond that the Hankel
//! asymptotic expansions are summed to below `1e-17`. Both paths accept
//! complex arguments with moderate imaginary part, which is what the
//! regularizing wavenumber of the combined-field formulation needs.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::Error;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const ASYMPTOTIC_CROSSOVER: f64 = 20.0;
const RESCALE_ABOVE: f64 = 1e200;

/// `J₀, J₁, Y₀, Y₁` at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bessel01<T> {
    pub j0: T,
    pub j1: T,
    pub y0: T,
    pub y1: T,
}

impl Bessel01<f64> {
    pub fn h0(&self) -> Complex64 {
        Complex64::new(self.j0, self.y0)
    }

    pub fn h1(&self) -> Complex64 {
        Complex64::new(self.j1, self.y1)
    }
}

impl Bessel01<Complex64> {
    pub fn h0(&self) -> Complex64 {
        self.j0 + Complex64::i() * self.y0
    }

    pub fn h1(&self) -> Complex64 {
        self.j1 + Complex64::i() * self.y1
    }
}

fn start_order(abs_z: f64) -> usize {
    let n = (abs_z + 10.0 * abs_z.cbrt() + 16.0).ceil() as usize;
    n + (n & 1)
}

/// All four functions at a positive real argument, without domain checks.
pub fn bessel01(x: f64) -> Bessel01<f64> {
    debug_assert!(x > 0.0);
    if x > ASYMPTOTIC_CROSSOVER {
        asymptotic_real(x)
    } else {
        miller_real(x)
    }
}

fn miller_real(x: f64) -> Bessel01<f64> {
    let n0 = start_order(x);
    let mut f_next = 0.0; // f_{n+1}
    let mut f = 1e-30; // f_n
    let mut even_sum = 0.0; // Σ_{k≥1} f_{2k}
    let mut y0_sum = 0.0; // Σ_{k≥1} (-1)^k f_{2k} / k
    let mut y1_sum = 0.0; // Σ_{k≥1} (-1)^k (f_{2k-1} - f_{2k+1}) / k
    let mut f1 = 0.0;

    let accumulate = |m: usize, fm: f64, even_sum: &mut f64, y0_sum: &mut f64, y1_sum: &mut f64| {
        if m % 2 == 0 {
            if m >= 2 {
                let k = (m / 2) as f64;
                let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
                *even_sum += fm;
                *y0_sum += sign * fm / k;
            }
        } else {
            let sign = if ((m + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let mut w = 2.0 / (m + 1) as f64;
            if m >= 3 {
                w += 2.0 / (m - 1) as f64;
            }
            *y1_sum += sign * fm * w;
        }
    };

    accumulate(n0, f, &mut even_sum, &mut y0_sum, &mut y1_sum);
    for n in (1..=n0).rev() {
        let f_prev = (2.0 * n as f64 / x) * f - f_next;
        f_next = f;
        f = f_prev;
        accumulate(n - 1, f, &mut even_sum, &mut y0_sum, &mut y1_sum);
        if n - 1 == 1 {
            f1 = f;
        }
        if f.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            f *= s;
            f_next *= s;
            f1 *= s;
            even_sum *= s;
            y0_sum *= s;
            y1_sum *= s;
        }
    }
    let f0 = f;
    let norm = f0 + 2.0 * even_sum;
    let j0 = f0 / norm;
    let j1 = f1 / norm;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = (2.0 / PI) * (log_term * j0 - 2.0 * y0_sum / norm);
    let y1 = (2.0 / PI) * (-j0 / x + log_term * j1 + y1_sum / norm);
    Bessel01 { j0, j1, y0, y1 }
}

/// Hankel expansion factors `(P, Q)` for order `nu ∈ {0, 1}`.
fn hankel_pq(nu: f64, inv_8x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) * inv_8x / k as f64;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn asymptotic_real(x: f64) -> Bessel01<f64> {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    let inv_8x = 1.0 / (8.0 * x);
    let (p0, q0) = hankel_pq(0.0, inv_8x);
    let (p1, q1) = hankel_pq(1.0, inv_8x);
    // χ₀ = x − π/4, χ₁ = x − 3π/4
    let (c0, s0) = ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
    let (c1, s1) = ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2);
    Bessel01 {
        j0: amp * (p0 * c0 - q0 * s0),
        y0: amp * (p0 * s0 + q0 * c0),
        j1: amp * (p1 * c1 - q1 * s1),
        y1: amp * (p1 * s1 + q1 * c1),
    }
}

/// All four functions at a complex argument with `Re z > 0`.
///
/// Checked against the multiprecision fixture for `|z| ≤ 40`, `Im z ≤ 5`.
pub fn bessel01_complex(z: Complex64) -> Bessel01<Complex64> {
    if z.norm() > ASYMPTOTIC_CROSSOVER {
        asymptotic_complex(z)
    } else {
        miller_complex(z)
    }
}

fn miller_complex(z: Complex64) -> Bessel01<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let n0 = start_order(z.norm());
    let inv_z = 1.0 / z;
    let mut f_next = zero;
    let mut f = Complex64::new(1e-30, 0.0);
    let mut even_sum = zero;
    let mut y0_sum = zero;
    let mut y1_sum = zero;
    let mut f1 = zero;

    let accumulate = |m: usize, fm: Complex64, even_sum: &mut Complex64, y0_sum: &mut Complex64, y1_sum: &mut Complex64| {
        if m % 2 == 0 {
            if m >= 2 {
                let k = (m / 2) as f64;
                let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
                *even_sum += fm;
                *y0_sum += fm * (sign / k);
            }
        } else {
            let sign = if ((m + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let mut w = 2.0 / (m + 1) as f64;
            if m >= 3 {
                w += 2.0 / (m - 1) as f64;
            }
            *y1_sum += fm * (sign * w);
        }
    };

    accumulate(n0, f, &mut even_sum, &mut y0_sum, &mut y1_sum);
    for n in (1..=n0).rev() {
        let f_prev = f * (2.0 * n as f64) * inv_z - f_next;
        f_next = f;
        f = f_prev;
        accumulate(n - 1, f, &mut even_sum, &mut y0_sum, &mut y1_sum);
        if n - 1 == 1 {
            f1 = f;
        }
        if f.norm() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            f *= s;
            f_next *= s;
            f1 *= s;
            even_sum *= s;
            y0_sum *= s;
            y1_sum *= s;
        }
    }
    let f0 = f;
    let norm = f0 + 2.0 * even_sum;
    let j0 = f0 / norm;
    let j1 = f1 / norm;
    let log_term = (0.5 * z).ln() + EULER_GAMMA;
    let y0 = (2.0 / PI) * (log_term * j0 - 2.0 * y0_sum / norm);
    let y1 = (2.0 / PI) * (-j0 * inv_z + log_term * j1 + y1_sum / norm);
    Bessel01 { j0, j1, y0, y1 }
}

fn hankel_pq_complex(nu: f64, inv_8z: Complex64) -> (Complex64, Complex64) {
    let mu = 4.0 * nu * nu;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= inv_8z * ((mu - odd * odd) / k as f64);
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += term * sign;
        } else {
            q += term * sign;
        }
        if term.norm() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn asymptotic_complex(z: Complex64) -> Bessel01<Complex64> {
    let amp = (2.0 / (PI * z)).sqrt();
    let inv_8z = 1.0 / (8.0 * z);
    let (p0, q0) = hankel_pq_complex(0.0, inv_8z);
    let (p1, q1) = hankel_pq_complex(1.0, inv_8z);
    let chi0 = z - 0.25 * PI;
    let chi1 = z - 0.75 * PI;
    let (c0, s0) = (chi0.cos(), chi0.sin());
    let (c1, s1) = (chi1.cos(), chi1.sin());
    Bessel01 {
        j0: amp * (p0 * c0 - q0 * s0),
        y0: amp * (p0 * s0 + q0 * c0),
        j1: amp * (p1 * c1 - q1 * s1),
        y1: amp * (p1 * s1 + q1 * c1),
    }
}

/// `1 − J₀(x)` without cancellation for small `x`.
pub fn one_minus_j0(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let q = 0.25 * x * x;
        let mut term = q;
        let mut sum = q;
        for m in 2..30 {
            term *= -q / (m * m) as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        1.0 - bessel01(x.abs()).j0
    }
}

/// Complex counterpart of [`one_minus_j0`].
pub fn one_minus_j0_complex(z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        let q = 0.25 * z * z;
        let mut term = q;
        let mut sum = q;
        for m in 2..30 {
            term *= -q / (m * m) as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        1.0 - bessel01_complex(z).j0
    }
}

fn check_order(order: u32) -> Result<(), Error> {
    if order > 1 {
        return Err(Error::Domain(format!("only orders 0 and 1 are provided, got {order}")));
    }
    Ok(())
}

/// `J₀(z)` or `J₁(z)` for real `z ≥ 0`.
pub fn bessel_j(order: u32, z: f64) -> Result<f64, Error> {
    check_order(order)?;
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::Domain(format!("bessel_j requires a finite z ≥ 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    let b = bessel01(z);
    Ok(if order == 0 { b.j0 } else { b.j1 })
}

/// `Y₀(z)` or `Y₁(z)` for real `z > 0`.
pub fn bessel_y(order: u32, z: f64) -> Result<f64, Error> {
    check_order(order)?;
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!("bessel_y requires a finite z > 0, got {z}")));
    }
    let b = bessel01(z);
    Ok(if order == 0 { b.y0 } else { b.y1 })
}

/// `H^{(1)}_order(z) = J_order(z) + i Y_order(z)` for real `z > 0`.
pub fn hankel1(order: u32, z: f64) -> Result<Complex64, Error> {
    check_order(order)?;
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!("hankel1 requires a finite z > 0, got {z}")));
    }
    let b = bessel01(z);
    Ok(if order == 0 { b.h0() } else { b.h1() })
}

/// `H^{(1)}_order(z)` for complex `z` with `Re z > 0` and `Im z ≥ 0`.
pub fn hankel1_complex(order: u32, z: Complex64) -> Result<Complex64, Error> {
    check_order(order)?;
    if !(z.re > 0.0 && z.im >= 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!("hankel1_complex requires Re z > 0 and Im z ≥ 0, got {z}")));
    }
    let b = bessel01_complex(z);
    Ok(if order == 0 { b.h0() } else { b.h1() })
}

/// `J_n(x)` and `Y_n(x)` for `n = 0, …, n_max` and real `x > 0`.
///
/// `J_n` comes from a normalized backward recurrence started well above
/// `n_max`; `Y_n` from forward recurrence, which is stable for `Y`. The
/// forward recurrence loses about `log10(|Y_n|/|Y_1|)` digits of relative
/// accuracy only through rounding in the starting values.
pub fn bessel_jy_orders(n_max: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>), Error> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("bessel_jy_orders requires x > 0, got {x}")));
    }
    let n0 = {
        let n = start_order(x) + n_max + 20;
        n + (n & 1)
    };
    let mut f = vec![0.0; n0 + 2];
    f[n0] = 1e-30;
    for n in (1..=n0).rev() {
        f[n - 1] = (2.0 * n as f64 / x) * f[n] - f[n + 1];
        if f[n - 1].abs() > RESCALE_ABOVE {
            for v in f[n - 1..].iter_mut() {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let norm = f[0] + 2.0 * f.iter().skip(2).step_by(2).sum::<f64>();
    let mut j: Vec<f64> = f[..=n_max].iter().map(|v| v / norm).collect();
    // the first two orders come from the dedicated routine
    let b = bessel01(x);
    j[0] = b.j0;
    if n_max >= 1 {
        j[1] = b.j1;
    }
    let mut y = vec![0.0; n_max + 1];
    y[0] = b.y0;
    if n_max >= 1 {
        y[1] = b.y1;
    }
    for n in 1..n_max {
        y[n + 1] = (2.0 * n as f64 / x) * y[n] - y[n - 1];
    }
    Ok((j, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(0, f64::NAN).is_err());
        assert!(bessel_j(2, 1.0).is_err());
        assert!(hankel1(0, 0.0).is_err());
        assert!(hankel1(1, -2.0).is_err());
        assert!(hankel1_complex(0, Complex64::new(1.0, -0.1)).is_err());
    }

    #[test]
    fn hankel_log_singularity() {
        let h = hankel1(0, 1e-6).unwrap();
        assert!(h.im < -8.0);
        let expected = (2.0 / PI) * ((0.5e-6f64).ln() + EULER_GAMMA);
        assert!((h.im - expected).abs() < 1e-10);
    }

    #[test]
    fn wronskian_at_two() {
        let b = bessel01(2.0);
        let w = b.j1 * b.y0 - b.j0 * b.y1;
        assert!((w - 2.0 / (PI * 2.0)).abs() < 1e-13);
    }

    #[test]
    fn one_minus_j0_is_continuous_across_switch() {
        // mpmath values of 1 − J₀ on both sides of the series cutoff
        let below = one_minus_j0(1.0 - 1e-12);
        let above = one_minus_j0(1.0 + 1e-12);
        assert!((below - 0.234_802_313_441_593_4).abs() < 5e-16);
        assert!((above - 0.234_802_313_442_473_5).abs() < 5e-16);
        assert!((one_minus_j0(1e-4) - 2.5e-9).abs() < 2e-18);
    }

    #[test]
    fn complex_path_agrees_with_real_on_real_axis() {
        for &x in &[0.3, 1.0, 7.5, 19.9, 20.1, 33.0] {
            let r = bessel01(x);
            let c = bessel01_complex(Complex64::new(x, 0.0));
            for (a, b) in [(r.j0, c.j0), (r.j1, c.j1), (r.y0, c.y0), (r.y1, c.y1)] {
                assert!((a - b.re).abs() < 1e-14 * (1.0 + a.abs()), "x={x}");
                assert!(b.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn order_sequence_matches_order_one_and_recurrence() {
        let (j, y) = bessel_jy_orders(10, 2.0).unwrap();
        // J_2(2) from the recurrence J_2 = (2/x)J_1 − J_0
        let b = bessel01(2.0);
        assert!((j[2] - (b.j1 - b.j0)).abs() < 1e-15);
        // Wronskian for every order
        for n in 0..10 {
            let w = j[n + 1] * y[n] - j[n] * y[n + 1];
            assert!((w - 1.0 / PI).abs() < 1e-12 / PI, "n={n}");
        }
    }
}
