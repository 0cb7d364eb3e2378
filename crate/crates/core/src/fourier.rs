//! Trigonometric interpolation on the `2N`-point grid, the Fourier
//! coefficients of the three quadrature weights, weighted convolution and
//! the Fourier-diagonal operators `Λ`, `D` and `DΛD`.
//!
//! Conventions: a degree-`N` trigonometric polynomial is
//! `Σ_{n=−N+1}^{N} ĝ(n) e^{int}` with `ĝ(n) = (1/2N) Σ_j g(t_j) e^{−int_j}`.
//! Spectral vectors are stored in FFT order, slot `n mod 2N`, so slot `N`
//! holds the unpaired top mode `n = N`. Weight coefficients are normalized
//! so that `∫₀^{2π} ψ(s−t) e^{int} dt = 2π ψ̂(n) e^{ins}`.

use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::Error;

/// Forward and inverse transforms of one length, planned once.
#[derive(Clone)]
pub struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    len: usize,
}

impl FftPair {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPair { forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len), len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Nodal values to coefficients `ĝ(n)`, in place.
    pub fn analyze(&self, data: &mut [Complex64]) {
        self.forward.process(data);
        let scale = 1.0 / self.len as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    /// Coefficients to nodal values, in place.
    pub fn synthesize(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
    }
}

/// Signed frequency stored in FFT slot `slot` of a length-`2N` vector.
#[inline]
pub fn frequency(slot: usize, half: usize) -> i64 {
    if slot <= half {
        slot as i64
    } else {
        slot as i64 - 2 * half as i64
    }
}

/// FFT slot of frequency `n ∈ (−N, N]`.
#[inline]
pub fn slot(n: i64, half: usize) -> usize {
    n.rem_euclid(2 * half as i64) as usize
}

fn check_even(len: usize) -> Result<usize, Error> {
    if len < 2 || len % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "trigonometric interpolation needs an even number (≥ 2) of samples, got {len}"
        )));
    }
    Ok(len / 2)
}

/// A trigonometric polynomial of degree `N`, kept in both nodal and
/// spectral form.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    half: usize,
    nodal: Vec<Complex64>,
    spectral: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn from_nodal(samples: &[Complex64]) -> Result<Self, Error> {
        let half = check_even(samples.len())?;
        let mut spectral = samples.to_vec();
        FftPair::new(samples.len()).analyze(&mut spectral);
        Ok(TrigPolynomial { half, nodal: samples.to_vec(), spectral })
    }

    /// Builds the polynomial from coefficients in FFT order.
    pub fn from_spectral(coefficients: &[Complex64]) -> Result<Self, Error> {
        let half = check_even(coefficients.len())?;
        let mut nodal = coefficients.to_vec();
        FftPair::new(coefficients.len()).synthesize(&mut nodal);
        Ok(TrigPolynomial { half, nodal, spectral: coefficients.to_vec() })
    }

    /// The basis function `e_n` sampled on the grid with half-size `half`.
    pub fn basis(n: i64, half: usize) -> Result<Self, Error> {
        if half == 0 || n <= -(half as i64) || n > half as i64 {
            return Err(Error::InvalidArgument(format!("e_{n} is not in the degree-{half} space")));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * half];
        c[slot(n, half)] = Complex64::new(1.0, 0.0);
        Self::from_spectral(&c)
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn nodal(&self) -> &[Complex64] {
        &self.nodal
    }

    pub fn spectral(&self) -> &[Complex64] {
        &self.spectral
    }

    /// Coefficient `ĝ(n)`; zero outside `(−N, N]`.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        if n <= -(self.half as i64) || n > self.half as i64 {
            return Complex64::new(0.0, 0.0);
        }
        self.spectral[slot(n, self.half)]
    }

    /// Evaluates the spectral sum at an arbitrary `t`.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.spectral
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, frequency(k, self.half) as f64 * t))
            .sum()
    }

    /// Applies a Fourier multiplier `σ(n)`.
    pub fn apply_symbol(&self, symbol: impl Fn(i64) -> Complex64) -> Self {
        let spectral: Vec<Complex64> =
            self.spectral.iter().enumerate().map(|(k, c)| c * symbol(frequency(k, self.half))).collect();
        Self::from_spectral(&spectral).expect("length already validated")
    }
}

/// The unique element of the degree-`N` space matching `2N` samples.
pub fn interpolate(samples: &[Complex64]) -> Result<TrigPolynomial, Error> {
    TrigPolynomial::from_nodal(samples)
}

/// Weight `ψ₀ ≡ 1`, `ψ₁ = log sin²(t/2)` or `ψ₂ = sin²(t/2) log sin²(t/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    Smooth,
    Log,
    SinSqLog,
}

impl Weight {
    pub fn from_index(m: u32) -> Result<Self, Error> {
        match m {
            0 => Ok(Weight::Smooth),
            1 => Ok(Weight::Log),
            2 => Ok(Weight::SinSqLog),
            _ => Err(Error::InvalidArgument(format!("weight index must be 0, 1 or 2, got {m}"))),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Weight::Smooth => 0,
            Weight::Log => 1,
            Weight::SinSqLog => 2,
        }
    }

    /// `ψ(t)` itself, for quadrature oracles.
    pub fn eval(self, t: f64) -> f64 {
        let s = (0.5 * t).sin();
        match self {
            Weight::Smooth => 1.0,
            Weight::Log => 2.0 * s.abs().ln(),
            Weight::SinSqLog => {
                if s == 0.0 {
                    0.0
                } else {
                    s * s * 2.0 * s.abs().ln()
                }
            }
        }
    }
}

fn psi1(n: i64) -> f64 {
    if n == 0 {
        -2.0 * LN_2
    } else {
        -1.0 / n.unsigned_abs() as f64
    }
}

/// Fourier coefficient `ψ̂_m(n)`.
pub fn psi_hat(weight: Weight, n: i64) -> f64 {
    let a = n.unsigned_abs();
    match weight {
        Weight::Smooth => {
            if a == 0 {
                1.0
            } else {
                0.0
            }
        }
        Weight::Log => psi1(n),
        Weight::SinSqLog => match a {
            0 => 0.5 - LN_2,
            1 => -0.375 + 0.5 * LN_2,
            _ => {
                let a = a as f64;
                0.25 * (1.0 / (a + 1.0) + 1.0 / (a - 1.0) - 2.0 / a)
            }
        },
    }
}

/// `ψ̂(n)` for `n = −N+1, …, N`, stored in FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
    weight: Weight,
    half: usize,
    values: Vec<f64>,
}

impl WeightTable {
    pub fn new(weight: Weight, half: usize) -> Result<Self, Error> {
        if half == 0 {
            return Err(Error::InvalidArgument("weight table needs N ≥ 1".into()));
        }
        let values = (0..2 * half).map(|k| psi_hat(weight, frequency(k, half))).collect();
        Ok(WeightTable { weight, half, values })
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn get(&self, n: i64) -> f64 {
        self.values[slot(n, self.half)]
    }

    /// First column of the circulant quadrature matrix:
    /// `w(d) = (π/N) Σ_n ψ̂(n) e^{indπ/N}`, `d = 0, …, 2N−1`.
    pub fn circulant(&self) -> Vec<f64> {
        let n = self.half;
        let h = PI / n as f64;
        (0..2 * n)
            .map(|d| {
                let mut acc = self.get(0);
                for m in 1..n {
                    acc += 2.0 * self.get(m as i64) * (m as f64 * d as f64 * h).cos();
                }
                acc += self.get(n as i64) * if d % 2 == 0 { 1.0 } else { -1.0 };
                h * acc
            })
            .collect()
    }
}

/// Nodal values of `s ↦ ∫₀^{2π} ψ(s−t) P_N[g](t) dt`.
pub fn weighted_conv(table: &WeightTable, samples: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    if samples.len() != 2 * table.half {
        return Err(Error::InvalidArgument(format!(
            "weight table covers N = {} but {} samples were given",
            table.half,
            samples.len()
        )));
    }
    let fft = FftPair::new(samples.len());
    let mut data = samples.to_vec();
    fft.analyze(&mut data);
    for (v, w) in data.iter_mut().zip(&table.values) {
        *v *= 2.0 * PI * w;
    }
    fft.synthesize(&mut data);
    Ok(data)
}

/// Symbol of the Bessel operator: `log 2` at `n = 0`, `1/(2|n|)` otherwise.
pub fn lambda_symbol(n: i64) -> f64 {
    -0.5 * psi1(n)
}

/// Symbol of `DΛD`: `−|n|/2`.
pub fn dld_symbol(n: i64) -> f64 {
    -0.5 * n.unsigned_abs() as f64
}

/// Symbol of differentiation: `in`.
pub fn diff_symbol(n: i64) -> Complex64 {
    Complex64::new(0.0, n as f64)
}

pub fn lambda_apply(g: &TrigPolynomial) -> TrigPolynomial {
    g.apply_symbol(|n| Complex64::new(lambda_symbol(n), 0.0))
}

pub fn diff_apply(g: &TrigPolynomial) -> TrigPolynomial {
    g.apply_symbol(diff_symbol)
}

pub fn dld_apply(g: &TrigPolynomial) -> TrigPolynomial {
    g.apply_symbol(|n| Complex64::new(dld_symbol(n), 0.0))
}

/// First column `c(d)` of the nodal circulant matrix of a Fourier
/// multiplier, so that `(Mg)_i = Σ_j c((i−j) mod 2N) g_j`.
pub fn symbol_circulant(half: usize, symbol: impl Fn(i64) -> Complex64) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = (0..2 * half).map(|k| symbol(frequency(k, half))).collect();
    FftPair::new(2 * half).synthesize(&mut c);
    let scale = 1.0 / (2 * half) as f64;
    c.iter_mut().for_each(|v| *v *= scale);
    c
}

/// `(|ĝ(0)|² + Σ_{n≠0} |n|^{2p} |ĝ(n)|²)^{1/2}`.
pub fn sobolev_norm(g: &TrigPolynomial, p: f64) -> f64 {
    g.spectral
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let n = frequency(k, g.half);
            let w = if n == 0 { 1.0 } else { (n.unsigned_abs() as f64).powf(2.0 * p) };
            w * c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// Independent reference values for the weight coefficients.
pub mod oracle {
    use super::*;

    /// Gauss–Legendre nodes and weights on `[−1, 1]`.
    pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        (nodes, weights)
    }

    /// `ψ̂(n) = (1/π) ∫₀^π ψ(t) cos(nt) dt` by composite Gauss–Legendre:
    /// uniform panels of width `π/64`, with the first panel split
    /// geometrically toward the logarithmic endpoint.
    pub fn psi_hat_quadrature(weight: Weight, n: i64) -> f64 {
        let (x, w) = gauss_legendre(24);
        let panel = |a: f64, b: f64| -> f64 {
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            x.iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let t = mid + half * xi;
                    wi * weight.eval(t) * (n as f64 * t).cos()
                })
                .sum::<f64>()
                * half
        };
        let h = PI / 64.0;
        let mut total = 0.0;
        let mut right = h;
        for _ in 0..60 {
            total += panel(0.5 * right, right);
            right *= 0.5;
        }
        for j in 1..64 {
            total += panel(j as f64 * h, (j + 1) as f64 * h);
        }
        total / PI
    }

    /// Coefficients from `log(4 sin²(t/2)) = −2 Σ_{m≥1} cos(mt)/m` and, for
    /// `ψ₂`, the product rule `sin²(t/2) = ½ − ¼(e^{it} + e^{−it})`.
    pub fn psi_hat_series(weight: Weight, n: i64) -> f64 {
        let log_part = |n: i64| -> f64 {
            if n == 0 {
                -(4.0f64).ln()
            } else {
                -1.0 / n.unsigned_abs() as f64
            }
        };
        match weight {
            Weight::Smooth => {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Weight::Log => log_part(n),
            Weight::SinSqLog => 0.5 * log_part(n) - 0.25 * (log_part(n - 1) + log_part(n + 1)),
        }
    }
}
