//! Smooth kernel functions of the logarithmic splittings.
//!
//! With `τ = s − t`, `S = sin²(τ/2)`, `L = log S`, `Δ = x(s) − x(t)`,
//! `r = |Δ|`, `ν(t) = (x₂'(t), −x₁'(t))` and `w = Δ·ν(t)`:
//!
//! * single layer `(i/4)H₀(kr) = A·L + B`, with `A = −J₀(kr)/(4π)`;
//! * tilde split `A = −1/(4π) + Ã·S`, with `Ã = (1 − J₀(kr))/(4πS)`;
//! * double layer `(ik/4)H₁(kr)·w/r = C·S·L + D`, with
//!   `C = −(k/4π)·J₁(kr)·w/(rS)`.
//!
//! The adjoint double layer kernel is the double layer kernel with `s` and
//! `t` exchanged. All diagonal values are closed-form Taylor limits.
//!
//! The hypersingular operator is handled through the Maue identity
//! `H = DVD + k²V((x'(s)·x'(t))·)`. Integrating by parts twice leaves
//! `DΛD` plus a logarithmic kernel `E` and a smooth kernel `F`:
//!
//! ```text
//! E = −Ã_st·S + ½(Ã_s − Ã_t)·sin τ + ½Ã·cos τ + k²(x'(s)·x'(t))·A
//! F = −B_st + ½(Ã_s − Ã_t)·sin τ + Ã·(½ + cos τ) + k²(x'(s)·x'(t))·B
//! ```
//!
//! The partial derivatives come from 2D spectral differentiation of `Ã`
//! and `B` sampled on an oversampled grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fourier::{frequency, FftPair};
use crate::geometry::{dot, CurvePoint, ParametricCurve};
use crate::linalg::CMatrix;
use crate::specfun::{bessel01, bessel01_complex, one_minus_j0, one_minus_j0_complex, Bessel01, EULER_GAMMA};
use crate::Error;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const FOUR_PI: f64 = 4.0 * PI;

/// A curve together with a wavenumber.
///
/// Real wavenumbers take the real Bessel path; a complex wavenumber (used
/// only for the regularizer of the combined formulation) takes the complex
/// path and supports the single layer and hypersingular kernels.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelContext {
    pub curve: ParametricCurve,
    k: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelId {
    A,
    B,
    ATilde,
    C,
    D,
    E,
    F,
}

struct Pair {
    s: f64,
    log_s: f64,
    r: f64,
    w_t: f64,
    dot_tangents: f64,
}

impl Pair {
    fn new(ps: &CurvePoint, pt: &CurvePoint, tau: f64) -> Self {
        let delta = [ps.x[0] - pt.x[0], ps.x[1] - pt.x[1]];
        let half = (0.5 * tau).sin();
        let s = half * half;
        Pair {
            s,
            log_s: s.ln(),
            r: delta[0].hypot(delta[1]),
            w_t: dot(delta, pt.scaled_normal()),
            dot_tangents: dot(ps.dx, pt.dx),
        }
    }
}

/// Reduces `s − t` to `(−π, π]`.
fn reduce(tau: f64) -> f64 {
    let r = tau.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

impl KernelContext {
    pub fn new(curve: ParametricCurve, k: f64) -> Result<Self, Error> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidArgument(format!("wavenumber must be positive, got {k}")));
        }
        Ok(KernelContext { curve, k: Complex64::new(k, 0.0) })
    }

    pub fn complex(curve: ParametricCurve, k: Complex64) -> Result<Self, Error> {
        if !(k.is_finite() && k.re > 0.0 && k.im >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "complex wavenumber needs Re k > 0 and Im k ≥ 0, got {k}"
            )));
        }
        Ok(KernelContext { curve, k })
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn is_real(&self) -> bool {
        self.k.im == 0.0
    }

    fn require_real(&self, what: &str) {
        assert!(self.is_real(), "{what} kernels are only provided for real wavenumbers");
    }

    fn bessel(&self, r: f64) -> Bessel01<Complex64> {
        if self.is_real() {
            let b = bessel01(self.k.re * r);
            let c = |v: f64| Complex64::new(v, 0.0);
            Bessel01 { j0: c(b.j0), j1: c(b.j1), y0: c(b.y0), y1: c(b.y1) }
        } else {
            bessel01_complex(self.k * r)
        }
    }

    fn one_minus_j0(&self, r: f64) -> Complex64 {
        if self.is_real() {
            Complex64::new(one_minus_j0(self.k.re * r), 0.0)
        } else {
            one_minus_j0_complex(self.k * r)
        }
    }

    /// `(A, B, Ã)` for one pair of points; `tau = 0` selects the diagonal limits.
    fn single_layer_parts(&self, ps: &CurvePoint, pt: &CurvePoint, tau: f64) -> (Complex64, Complex64, Complex64) {
        let k = self.k;
        if tau == 0.0 {
            let speed = ps.speed();
            let a = Complex64::new(-1.0 / FOUR_PI, 0.0);
            let b = 0.25 * I - ((k * speed).ln() + EULER_GAMMA) / (2.0 * PI);
            let at = k * k * (speed * speed / FOUR_PI);
            return (a, b, at);
        }
        let p = Pair::new(ps, pt, tau);
        let bes = self.bessel(p.r);
        let a = -bes.j0 / FOUR_PI;
        let b = 0.25 * I * bes.h0() - a * p.log_s;
        let at = self.one_minus_j0(p.r) / (FOUR_PI * p.s);
        (a, b, at)
    }

    /// `(C, D)` for one pair; `tau = 0` selects the diagonal limits.
    fn double_layer_parts(&self, ps: &CurvePoint, pt: &CurvePoint, tau: f64) -> (f64, Complex64) {
        self.require_real("double layer");
        let k = self.k.re;
        if tau == 0.0 {
            let cross = ps.cross();
            let speed_sq = dot(ps.dx, ps.dx);
            return (k * k * cross / FOUR_PI, Complex64::new(-cross / (FOUR_PI * speed_sq), 0.0));
        }
        let p = Pair::new(ps, pt, tau);
        let bes = bessel01(k * p.r);
        let ratio = p.w_t / p.r;
        let cs = -(k / FOUR_PI) * bes.j1 * ratio;
        let d = 0.25 * I * k * Complex64::new(bes.j1, bes.y1) * ratio - cs * p.log_s;
        (cs / p.s, d)
    }

    fn points(&self, s: f64, t: f64) -> (CurvePoint, CurvePoint, f64) {
        (self.curve.eval(s), self.curve.eval(t), reduce(s - t))
    }

    pub fn kernel_a(&self, s: f64, t: f64) -> Complex64 {
        let (ps, pt, tau) = self.points(s, t);
        self.single_layer_parts(&ps, &pt, tau).0
    }

    pub fn kernel_b(&self, s: f64, t: f64) -> Complex64 {
        let (ps, pt, tau) = self.points(s, t);
        self.single_layer_parts(&ps, &pt, tau).1
    }

    pub fn kernel_a_tilde(&self, s: f64, t: f64) -> Complex64 {
        let (ps, pt, tau) = self.points(s, t);
        self.single_layer_parts(&ps, &pt, tau).2
    }

    pub fn kernel_c(&self, s: f64, t: f64) -> f64 {
        let (ps, pt, tau) = self.points(s, t);
        self.double_layer_parts(&ps, &pt, tau).0
    }

    pub fn kernel_d(&self, s: f64, t: f64) -> Complex64 {
        let (ps, pt, tau) = self.points(s, t);
        self.double_layer_parts(&ps, &pt, tau).1
    }

    /// The kernels of `id` sampled at the grid nodes `(t_i, t_j)`.
    pub fn matrix(&self, id: KernelId, half: usize) -> CMatrix {
        match id {
            KernelId::E | KernelId::F => {
                let (e, f) = self.maue_matrices(half, 2);
                if id == KernelId::E {
                    e
                } else {
                    f
                }
            }
            _ => {
                let pts = self.sample(half);
                let h = PI / half as f64;
                CMatrix::from_fn(2 * half, 2 * half, |i, j| {
                    let tau = if i == j { 0.0 } else { reduce((i as f64 - j as f64) * h) };
                    match id {
                        KernelId::A => self.single_layer_parts(&pts[i], &pts[j], tau).0,
                        KernelId::B => self.single_layer_parts(&pts[i], &pts[j], tau).1,
                        KernelId::ATilde => self.single_layer_parts(&pts[i], &pts[j], tau).2,
                        KernelId::C => Complex64::new(self.double_layer_parts(&pts[i], &pts[j], tau).0, 0.0),
                        KernelId::D => self.double_layer_parts(&pts[i], &pts[j], tau).1,
                        KernelId::E | KernelId::F => unreachable!(),
                    }
                })
            }
        }
    }

    /// `A`, `B` and `Ã` on the grid in one pass.
    pub fn single_layer_matrices(&self, half: usize) -> [CMatrix; 3] {
        let n = 2 * half;
        let pts = self.sample(half);
        let h = PI / half as f64;
        let mut vals = vec![(Complex64::default(), Complex64::default(), Complex64::default()); n * n];
        vals.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                let tau = if i == j { 0.0 } else { reduce((i as f64 - j as f64) * h) };
                *v = self.single_layer_parts(&pts[i], &pts[j], tau);
            }
        });
        let pick = |f: fn(&(Complex64, Complex64, Complex64)) -> Complex64| {
            CMatrix::from_vec(n, n, vals.iter().map(f).collect()).expect("square")
        };
        [pick(|v| v.0), pick(|v| v.1), pick(|v| v.2)]
    }

    /// `C` and `D` on the grid in one pass.
    pub fn double_layer_matrices(&self, half: usize) -> [CMatrix; 2] {
        let n = 2 * half;
        let pts = self.sample(half);
        let h = PI / half as f64;
        let mut vals = vec![(0.0, Complex64::default()); n * n];
        vals.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                let tau = if i == j { 0.0 } else { reduce((i as f64 - j as f64) * h) };
                *v = self.double_layer_parts(&pts[i], &pts[j], tau);
            }
        });
        let c = CMatrix::from_vec(n, n, vals.iter().map(|v| Complex64::new(v.0, 0.0)).collect()).expect("square");
        let d = CMatrix::from_vec(n, n, vals.iter().map(|v| v.1).collect()).expect("square");
        [c, d]
    }

    fn sample(&self, half: usize) -> Vec<CurvePoint> {
        (0..2 * half).map(|j| self.curve.eval(j as f64 * PI / half as f64)).collect()
    }

    /// Grid samples of the Maue kernels `E` and `F`.
    ///
    /// `oversample` is the refinement factor of the grid on which `Ã` and
    /// `B` are differentiated; `1` differentiates on the operator grid itself.
    pub fn maue_matrices(&self, half: usize, oversample: usize) -> (CMatrix, CMatrix) {
        assert!(oversample >= 1, "oversampling factor must be at least 1");
        let n = 2 * half;
        let fine_half = half * oversample;
        let m = 2 * fine_half;
        let fine = self.sample(fine_half);
        let h = PI / fine_half as f64;

        let mut at = vec![Complex64::default(); m * m];
        let mut b = vec![Complex64::default(); m * m];
        at.par_chunks_mut(m).zip(b.par_chunks_mut(m)).enumerate().for_each(|(i, (ra, rb))| {
            for j in 0..m {
                let tau = if i == j { 0.0 } else { reduce((i as f64 - j as f64) * h) };
                let (_, bv, av) = self.single_layer_parts(&fine[i], &fine[j], tau);
                ra[j] = av;
                rb[j] = bv;
            }
        });

        let fft = FftPair::new(m);
        let at_hat = fft2(&fft, at.clone(), m);
        let b_hat = fft2(&fft, b, m);
        let d_s = derivative(&fft, &at_hat, m, oversample, true, false);
        let d_t = derivative(&fft, &at_hat, m, oversample, false, true);
        let d_st = derivative(&fft, &at_hat, m, oversample, true, true);
        let b_st = derivative(&fft, &b_hat, m, oversample, true, true);
        drop(at_hat);
        drop(b_hat);

        let pts = self.sample(half);
        let hc = PI / half as f64;
        let k2 = self.k * self.k;
        let mut e = CMatrix::zeros(n, n);
        let mut f = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let tau = if i == j { 0.0 } else { reduce((i as f64 - j as f64) * hc) };
                let (a, bv, _) = self.single_layer_parts(&pts[i], &pts[j], tau);
                let atv = at[(i * oversample) * m + j * oversample];
                let idx = i * n + j;
                let sq = (0.5 * tau).sin().powi(2);
                let odd = 0.5 * (d_s[idx] - d_t[idx]) * tau.sin();
                let dots = dot(pts[i].dx, pts[j].dx);
                e[(i, j)] = -d_st[idx] * sq + odd + 0.5 * atv * tau.cos() + k2 * dots * a;
                f[(i, j)] = -b_st[idx] + odd + atv * (0.5 + tau.cos()) + k2 * dots * bv;
            }
        }
        (e, f)
    }

    /// `x'(s)·x'(t)`, exposed for alternative assemblies.
    pub fn tangent_products(&self, half: usize) -> CMatrix {
        let pts = self.sample(half);
        CMatrix::from_fn(2 * half, 2 * half, |i, j| Complex64::new(Pair::new(&pts[i], &pts[j], 1.0).dot_tangents, 0.0))
    }
}

/// Unnormalized-forward 2D transform of a row-major `m × m` array.
fn fft2(fft: &FftPair, mut data: Vec<Complex64>, m: usize) -> Vec<Complex64> {
    data.par_chunks_mut(m).for_each(|row| fft.analyze(row));
    let mut t = transpose(&data, m);
    t.par_chunks_mut(m).for_each(|row| fft.analyze(row));
    transpose(&t, m)
}

fn transpose(data: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); m * m];
    out.par_chunks_mut(m).enumerate().for_each(|(j, row)| {
        for (i, v) in row.iter_mut().enumerate() {
            *v = data[i * m + j];
        }
    });
    out
}

/// Spectral partial derivative of a transformed array, subsampled to the
/// coarse grid. The unpaired top mode is dropped for odd-order factors.
fn derivative(fft: &FftPair, hat: &[Complex64], m: usize, step: usize, ds: bool, dt: bool) -> Vec<Complex64> {
    let half = m / 2;
    let factor = |k: usize, on: bool| -> Complex64 {
        if !on {
            return Complex64::new(1.0, 0.0);
        }
        if k == half {
            return Complex64::default();
        }
        Complex64::new(0.0, frequency(k, half) as f64)
    };
    let mut data: Vec<Complex64> = hat.to_vec();
    data.par_chunks_mut(m).enumerate().for_each(|(p, row)| {
        let fp = factor(p, ds);
        for (q, v) in row.iter_mut().enumerate() {
            *v *= fp * factor(q, dt);
        }
        fft.synthesize(row);
    });
    let mut t = transpose(&data, m);
    t.par_chunks_mut(m).for_each(|row| fft.synthesize(row));
    let full = transpose(&t, m);
    let n = m / step;
    let mut out = vec![Complex64::default(); n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = full[(i * step) * m + j * step];
        }
    }
    out
}
