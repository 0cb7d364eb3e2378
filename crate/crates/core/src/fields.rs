//! Layer potentials, field reconstruction and far-field patterns.
//!
//! Densities are parameterized: a single-layer density already carries the
//! speed factor `|x'(t)|`, a double-layer density does not. With these
//! conventions
//!
//! ```text
//! SL σ(z) = ∫ Φ_k(z − x(t)) σ(t) dt
//! DL δ(z) = ∫ ∂_{n(t)} Φ_k(z − x(t)) |x'(t)| δ(t) dt
//! ```
//!
//! and both are evaluated with the trapezoidal rule on the grid, which is
//! spectrally accurate away from the curve. Far-field patterns follow
//! `u(R x̂) ≈ e^{ikR} R^{−1/2} u∞(x̂)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::geometry::{dot, CurvePoint, ParametricCurve, SampledCurve, GridNodes, Vec2};
use crate::specfun::bessel01;
use crate::Error;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Points closer to a node than `GUARD_FACTOR · π/N · max|x'|` are rejected.
pub const GUARD_FACTOR: f64 = 5.0;

/// `Φ_k(x − y) = (i/4) H₀⁽¹⁾(k|x − y|)`.
pub fn fundamental(k: f64, x: Vec2, y: Vec2) -> Complex64 {
    let r = (x[0] - y[0]).hypot(x[1] - y[1]);
    0.25 * I * bessel01(k * r).h0()
}

/// Gradient of `Φ_k(x − y)` with respect to `x`.
pub fn fundamental_gradient(k: f64, x: Vec2, y: Vec2) -> [Complex64; 2] {
    let d = [x[0] - y[0], x[1] - y[1]];
    let r = d[0].hypot(d[1]);
    let f = -0.25 * I * k * bessel01(k * r).h1() / r;
    [f * d[0], f * d[1]]
}

/// `e^{iπ/4}/√(8πk)`, the far-field amplitude of `Φ_k`.
pub fn far_field_constant(k: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (8.0 * PI * k).sqrt(), 0.25 * PI)
}

/// Far-field pattern of `Φ_k(· − y)` in the direction `x̂ = (cos θ, sin θ)`.
pub fn fundamental_far_field(k: f64, theta: f64, y: Vec2) -> Complex64 {
    let (s, c) = theta.sin_cos();
    far_field_constant(k) * Complex64::from_polar(1.0, -k * (c * y[0] + s * y[1]))
}

/// `M` equispaced observation angles `2πj/M`.
pub fn directions(m: usize) -> Vec<f64> {
    (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FarFieldPattern {
    pub angles: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl FarFieldPattern {
    /// `max_j |u∞(θ_j) − v∞(θ_j)|`.
    pub fn max_difference(&self, other: &FarFieldPattern) -> Result<f64, Error> {
        if self.angles != other.angles {
            return Err(Error::InvalidArgument("far-field patterns use different directions".into()));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// One potential term `coefficient · (SL or DL)_k density`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTerm {
    pub k: f64,
    pub single_layer: bool,
    pub density: Vec<Complex64>,
}

/// A field given as a sum of layer potentials over one curve.
#[derive(Clone, Debug)]
pub struct FieldEvaluator {
    sampled: SampledCurve,
    terms: Vec<PotentialTerm>,
}

impl FieldEvaluator {
    pub fn new(curve: &ParametricCurve, half: usize) -> Result<Self, Error> {
        Ok(FieldEvaluator { sampled: SampledCurve::new(curve, GridNodes::new(half)?), terms: Vec::new() })
    }

    pub fn half(&self) -> usize {
        self.sampled.grid.half()
    }

    fn push(mut self, k: f64, single_layer: bool, density: Vec<Complex64>) -> Result<Self, Error> {
        if density.len() != self.sampled.points.len() {
            return Err(Error::InvalidArgument(format!(
                "density has {} values for a {}-node grid",
                density.len(),
                self.sampled.points.len()
            )));
        }
        self.terms.push(PotentialTerm { k, single_layer, density });
        Ok(self)
    }

    /// Adds `SL_k σ`.
    pub fn single_layer(self, k: f64, density: Vec<Complex64>) -> Result<Self, Error> {
        self.push(k, true, density)
    }

    /// Adds `DL_k δ`.
    pub fn double_layer(self, k: f64, density: Vec<Complex64>) -> Result<Self, Error> {
        self.push(k, false, density)
    }

    pub fn terms(&self) -> &[PotentialTerm] {
        &self.terms
    }

    /// Smallest admissible distance from the nodes.
    pub fn guard_distance(&self) -> f64 {
        GUARD_FACTOR * self.sampled.grid.spacing() * self.sampled.max_speed()
    }

    fn term_at(&self, term: &PotentialTerm, z: Vec2) -> Complex64 {
        let h = self.sampled.grid.spacing();
        let mut acc = Complex64::default();
        for (p, d) in self.sampled.points.iter().zip(&term.density) {
            acc += d * kernel(term, p, z);
        }
        acc * h
    }

    /// Field values; points too close to the curve are rejected.
    pub fn eval(&self, points: &[Vec2]) -> Result<Vec<Complex64>, Error> {
        let guard = self.guard_distance();
        for p in points {
            let d = self.sampled.nodal_distance(*p);
            if d <= guard {
                return Err(Error::Domain(format!(
                    "point ({}, {}) lies {d:.3e} from the curve, inside the accuracy guard {guard:.3e}",
                    p[0], p[1]
                )));
            }
        }
        Ok(points.par_iter().map(|&z| self.terms.iter().map(|t| self.term_at(t, z)).sum()).collect())
    }

    /// Far-field pattern, all terms sharing the same wavenumber.
    pub fn far_field(&self, angles: &[f64]) -> Result<FarFieldPattern, Error> {
        let k = match self.terms.first() {
            Some(t) => t.k,
            None => return Ok(FarFieldPattern { angles: angles.to_vec(), values: vec![Complex64::default(); angles.len()] }),
        };
        if self.terms.iter().any(|t| t.k != k) {
            return Err(Error::InvalidArgument("far field needs a single exterior wavenumber".into()));
        }
        let h = self.sampled.grid.spacing();
        let c = far_field_constant(k) * h;
        let values = angles
            .par_iter()
            .map(|&theta| {
                let (s, co) = theta.sin_cos();
                let xhat = [co, s];
                let mut acc = Complex64::default();
                for (j, p) in self.sampled.points.iter().enumerate() {
                    let phase = Complex64::from_polar(1.0, -k * dot(xhat, p.x));
                    let mut dens = Complex64::default();
                    for t in &self.terms {
                        if t.single_layer {
                            dens += t.density[j];
                        } else {
                            dens += -I * k * dot(xhat, p.scaled_normal()) * t.density[j];
                        }
                    }
                    acc += dens * phase;
                }
                acc * c
            })
            .collect();
        Ok(FarFieldPattern { angles: angles.to_vec(), values })
    }
}

fn kernel(term: &PotentialTerm, p: &CurvePoint, z: Vec2) -> Complex64 {
    if term.single_layer {
        fundamental(term.k, z, p.x)
    } else {
        let d = [z[0] - p.x[0], z[1] - p.x[1]];
        let r = d[0].hypot(d[1]);
        0.25 * I * term.k * bessel01(term.k * r).h1() * dot(d, p.scaled_normal()) / r
    }
}

/// Cauchy data `(γu∘x, |x'|·∂ₙu∘x)` of a field with known value and gradient.
pub fn cauchy_data(
    curve: &ParametricCurve,
    half: usize,
    value: impl Fn(Vec2) -> Complex64,
    gradient: impl Fn(Vec2) -> [Complex64; 2],
) -> Result<(Vec<Complex64>, Vec<Complex64>), Error> {
    let grid = GridNodes::new(half)?;
    let mut a = Vec::with_capacity(grid.len());
    let mut phi = Vec::with_capacity(grid.len());
    for t in grid.nodes() {
        let p = curve.eval(t);
        a.push(value(p.x));
        let g = gradient(p.x);
        let nu = p.scaled_normal();
        phi.push(g[0] * nu[0] + g[1] * nu[1]);
    }
    Ok((a, phi))
}
