//! Boundary integral formulations of the transmission problem
//!
//! ```text
//! Δu₊ + k₊²u₊ = 0 in D⁺,  Δu₋ + k₋²u₋ = 0 in D⁻,
//! γu₊ − γu₋ = −γu_inc,  ∂ₙu₊ − ν∂ₙu₋ = −∂ₙu_inc,  u₊ radiating.
//! ```
//!
//! Jump data are parameterized as `h = −γu_inc∘x` and
//! `η = −|x'|·∂ₙu_inc∘x`. The three direct formulations solve for the
//! Cauchy data `(a, φ) = (γu_t∘x, |x'|·∂ₙu_t∘x)` of the total exterior wave
//! `u_t = u₊ + u_inc`; the indirect one solves for a single density `μ`.
//!
//! When the incident field solves the `k₊` equation inside the obstacle
//! (plane waves, sources outside) the right-hand sides collapse to
//! `(f_D, f_N) = −(h, η)`. For general jump data they are
//! `f_D = (K₊ − ½)h − V₊η` and `f_N = H₊h − (½ + K₊ᵀ)η`. The indirect
//! formulation then also adds `DL₊h − SL₊η` to the exterior field, a term
//! that vanishes for data regular inside.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fields::{fundamental, fundamental_gradient, FarFieldPattern, FieldEvaluator};
use crate::geometry::{dot, GridNodes, ParametricCurve, SampledCurve, Vec2};
use crate::kernels::KernelContext;
use crate::linalg::{gmres, lu_solve, norm2, CMatrix};
use crate::operators::{dld, lambda, OperatorSet};
use crate::Error;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Incident {
    /// `e^{ik₊ d·x}` with `d = (cos angle, sin angle)`.
    PlaneWave { angle: f64 },
    /// `Φ_{k₊}(x − location)`.
    PointSource { location: Vec2 },
}

impl Incident {
    pub fn value(&self, k: f64, x: Vec2) -> Complex64 {
        match *self {
            Incident::PlaneWave { angle } => Complex64::from_polar(1.0, k * dot([angle.cos(), angle.sin()], x)),
            Incident::PointSource { location } => fundamental(k, x, location),
        }
    }

    pub fn gradient(&self, k: f64, x: Vec2) -> [Complex64; 2] {
        match *self {
            Incident::PlaneWave { angle } => {
                let d = [angle.cos(), angle.sin()];
                let u = I * k * self.value(k, x);
                [u * d[0], u * d[1]]
            }
            Incident::PointSource { location } => fundamental_gradient(k, x, location),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmissionProblem {
    pub curve: ParametricCurve,
    pub k_plus: f64,
    pub k_minus: f64,
    pub nu: f64,
    pub incident: Incident,
}

impl TransmissionProblem {
    pub fn new(curve: ParametricCurve, k_plus: f64, k_minus: f64, nu: f64, incident: Incident) -> Result<Self, Error> {
        let p = TransmissionProblem { curve, k_plus, k_minus, nu, incident };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (name, v) in [("k₊", self.k_plus), ("k₋", self.k_minus), ("ν", self.nu)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if let Incident::PointSource { location } = self.incident {
            let probe = SampledCurve::new(&self.curve, GridNodes::new(1024)?);
            let dist = probe.nodal_distance(location);
            if dist < 10.0 * PI / 1024.0 * probe.max_speed() {
                return Err(Error::InvalidArgument(format!(
                    "point source ({}, {}) lies on or too close to the curve",
                    location[0], location[1]
                )));
            }
        }
        Ok(())
    }

    /// Whether the incident field solves the `k₊` equation inside the curve.
    pub fn incident_is_regular_inside(&self) -> bool {
        match self.incident {
            Incident::PlaneWave { .. } => true,
            Incident::PointSource { location } => {
                SampledCurve::new(&self.curve, GridNodes::new(512).expect("N > 0")).winding_number(location) == 0
            }
        }
    }
}

/// Parameterized jump data on the `2N` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TransmissionData {
    pub half: usize,
    pub h: Vec<Complex64>,
    pub eta: Vec<Complex64>,
    /// The data come from a `k₊` solution that is regular inside the curve.
    pub regular_inside: bool,
}

impl TransmissionData {
    /// Arbitrary jump data; right-hand sides use the general formulas.
    pub fn from_jumps(h: Vec<Complex64>, eta: Vec<Complex64>) -> Result<Self, Error> {
        if h.len() != eta.len() || h.len() < 2 || h.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!("jump data lengths {} and {} are not a 2N grid", h.len(), eta.len())));
        }
        Ok(TransmissionData { half: h.len() / 2, h, eta, regular_inside: false })
    }
}

pub fn build_data(problem: &TransmissionProblem, half: usize) -> Result<TransmissionData, Error> {
    problem.validate()?;
    let grid = GridNodes::new(half)?;
    let k = problem.k_plus;
    let mut h = Vec::with_capacity(grid.len());
    let mut eta = Vec::with_capacity(grid.len());
    for t in grid.nodes() {
        let p = problem.curve.eval(t);
        h.push(-problem.incident.value(k, p.x));
        let g = problem.incident.gradient(k, p.x);
        let nu = p.scaled_normal();
        eta.push(-(g[0] * nu[0] + g[1] * nu[1]));
    }
    Ok(TransmissionData { half, h, eta, regular_inside: problem.incident_is_regular_inside() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum Formulation {
    /// Plain-family direct formulation with identity leading part.
    L1,
    /// Tilde-family direct formulation with `Λ`/`DΛD` leading part.
    L2,
    /// `L2` with the single layer blocks taken from the plain family.
    L2Plain,
    /// `L2` regularized by the complex-wavenumber operator `R_κ`.
    L3 { kappa: Complex64 },
    /// Single-density indirect formulation.
    L4 { rho: f64 },
}

impl Formulation {
    pub fn name(&self) -> &'static str {
        match self {
            Formulation::L1 => "L1",
            Formulation::L2 => "L2",
            Formulation::L2Plain => "L2plain",
            Formulation::L3 { .. } => "L3",
            Formulation::L4 { .. } => "L4",
        }
    }

    /// Parses a formulation name, filling `κ = k₊ + 0.5i` and `ρ = k₊` when
    /// not given.
    pub fn parse(name: &str, k_plus: f64, kappa: Option<Complex64>, rho: Option<f64>) -> Result<Self, Error> {
        let f = match name.to_ascii_lowercase().as_str() {
            "l1" => Formulation::L1,
            "l2" | "l2tilde" => Formulation::L2,
            "l2plain" | "l2_plain" => Formulation::L2Plain,
            "l3" => Formulation::L3 { kappa: kappa.unwrap_or(Complex64::new(k_plus, 0.5)) },
            "l4" => Formulation::L4 { rho: rho.unwrap_or(k_plus) },
            other => return Err(Error::Config(format!("unknown formulation '{other}'"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), Error> {
        match *self {
            Formulation::L3 { kappa } if !(kappa.im > 0.0 && kappa.re > 0.0 && kappa.is_finite()) => {
                Err(Error::InvalidArgument(format!("L3 needs Re κ > 0 and Im κ > 0, got {kappa}")))
            }
            Formulation::L4 { rho } if !(rho != 0.0 && rho.is_finite()) => {
                Err(Error::InvalidArgument(format!("L4 needs a real ρ ≠ 0, got {rho}")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_direct(&self) -> bool {
        !matches!(self, Formulation::L4 { .. })
    }
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: CMatrix,
    pub rhs: Vec<Complex64>,
}

#[derive(Clone, Debug)]
enum Recipe {
    Direct { h: Vec<Complex64>, eta: Vec<Complex64> },
    /// `correction` holds `(h, η)` when the data are not regular inside.
    Indirect { kt_minus: CMatrix, v_minus: CMatrix, correction: Option<(Vec<Complex64>, Vec<Complex64>)> },
}

/// A discretized formulation ready to be solved.
#[derive(Clone, Debug)]
pub struct AssembledSystem {
    pub formulation: Formulation,
    pub half: usize,
    pub system: LinearSystem,
    problem: TransmissionProblem,
    recipe: Recipe,
}

/// Operator sets for both media at one `N`, shared between formulations.
pub struct Assembler {
    problem: TransmissionProblem,
    half: usize,
    plus: OperatorSet,
    minus: OperatorSet,
}

fn lin(terms: &[(Complex64, &CMatrix)]) -> CMatrix {
    let (c0, m0) = terms[0];
    terms[1..].iter().fold(m0.scale(c0), |acc, (ci, mi)| acc.add_scaled(mi, *ci))
}

fn mv(m: &CMatrix, x: &[Complex64]) -> Vec<Complex64> {
    m.matvec(x)
}

fn axpy(terms: &[(Complex64, &[Complex64])]) -> Vec<Complex64> {
    let n = terms[0].1.len();
    (0..n).map(|i| terms.iter().map(|(c, v)| c * v[i]).sum()).collect()
}

impl Assembler {
    pub fn new(problem: &TransmissionProblem, half: usize) -> Result<Self, Error> {
        problem.validate()?;
        Ok(Assembler {
            plus: OperatorSet::new(KernelContext::new(problem.curve.clone(), problem.k_plus)?, half)?,
            minus: OperatorSet::new(KernelContext::new(problem.curve.clone(), problem.k_minus)?, half)?,
            problem: problem.clone(),
            half,
        })
    }

    pub fn plus(&self) -> &OperatorSet {
        &self.plus
    }

    pub fn minus(&self) -> &OperatorSet {
        &self.minus
    }

    pub fn data(&self) -> Result<TransmissionData, Error> {
        build_data(&self.problem, self.half)
    }

    /// `(f_D, f_N)` using the given exterior operators.
    fn rhs_parts(&self, data: &TransmissionData, tilde: bool, plain_v: bool) -> (Vec<Complex64>, Vec<Complex64>) {
        if data.regular_inside {
            let neg = |v: &[Complex64]| v.iter().map(|x| -x).collect::<Vec<_>>();
            return (neg(&data.h), neg(&data.eta));
        }
        let p = &self.plus;
        let (k, kt) = if tilde { (p.k_tilde().matrix, p.kt_tilde().matrix) } else { (p.k_plain().matrix, p.kt_plain().matrix) };
        let v = if tilde && !plain_v { p.v_tilde().matrix } else { p.v_plain().matrix };
        let h_op = p.h().matrix;
        let (h, eta) = (&data.h[..], &data.eta[..]);
        let f_d = axpy(&[(c(1.0), &mv(&k, h)), (c(-0.5), h), (c(-1.0), &mv(&v, eta))]);
        let f_n = axpy(&[(c(1.0), &mv(&h_op, h)), (c(-0.5), eta), (c(-1.0), &mv(&kt, eta))]);
        (f_d, f_n)
    }

    pub fn assemble(&self, formulation: Formulation) -> Result<AssembledSystem, Error> {
        let data = self.data()?;
        self.assemble_with_data(formulation, &data)
    }

    pub fn assemble_with_data(&self, formulation: Formulation, data: &TransmissionData) -> Result<AssembledSystem, Error> {
        formulation.validate()?;
        if data.half != self.half {
            return Err(Error::InvalidArgument(format!("data on N = {} for an N = {} assembler", data.half, self.half)));
        }
        let n = 2 * self.half;
        let nu = self.problem.nu;
        let id = CMatrix::identity(n);
        let direct = Recipe::Direct { h: data.h.clone(), eta: data.eta.clone() };
        let (p, m) = (&self.plus, &self.minus);
        let (matrix, rhs, recipe) = match formulation {
            Formulation::L1 => {
                let d = (1.0 + nu) / 2.0;
                let b11 = lin(&[(c(d), &id), (c(nu), &m.k_plain().matrix), (c(-1.0), &p.k_plain().matrix)]);
                let b12 = lin(&[(c(1.0), &p.v_plain().matrix), (c(-1.0), &m.v_plain().matrix)]);
                let b21 = lin(&[(c(nu), &m.t().matrix), (c(-nu), &p.t().matrix)]);
                let b22 = lin(&[(c(d), &id), (c(nu), &p.kt_plain().matrix), (c(-1.0), &m.kt_plain().matrix)]);
                let (f_d, f_n) = self.rhs_parts(data, false, false);
                let rhs = [f_d, f_n.iter().map(|v| v * nu).collect()].concat();
                (CMatrix::block2(&b11, &b12, &b21, &b22), rhs, direct)
            }
            Formulation::L2 | Formulation::L2Plain => {
                let plain = formulation == Formulation::L2Plain;
                let a = self.l2_matrix(plain);
                let (f_d, f_n) = self.rhs_parts(data, true, plain);
                (a, [f_d, f_n].concat(), direct)
            }
            Formulation::L3 { kappa } => {
                let l2 = self.l2_matrix(false);
                let kap = OperatorSet::new(KernelContext::complex(self.problem.curve.clone(), kappa)?, self.half)?;
                let lam = lambda(self.half).matrix;
                let dld_m = dld(self.half).matrix;
                let s = 1.0 / (nu + 1.0);
                let r12 = lin(&[(c(2.0 * s), &lam), (c(2.0 * s), &kap.r_tilde().matrix)]);
                let r21 = lin(&[(c(-2.0 * nu * s), &dld_m), (c(-2.0 * nu * s), &kap.t().matrix)]);
                let r_kappa = CMatrix::block2(&id.scale_real(s), &r12, &r21, &id.scale_real(nu * s));
                let km = m.k_tilde().matrix;
                let b11 = lin(&[(c(0.5), &id), (c(1.0), &km)]);
                let b12 = lin(&[(c(-1.0 / nu), &lam), (c(-1.0 / nu), &m.r_tilde().matrix)]);
                let b21 = lin(&[(c(nu), &dld_m), (c(nu), &m.t().matrix)]);
                let b22 = lin(&[(c(0.5), &id), (c(-1.0), &km.transpose())]);
                let first = CMatrix::block2(&b11, &b12, &b21, &b22);
                let matrix = first.add_scaled(&r_kappa.matmul(&l2), c(1.0));
                let (f_d, f_n) = self.rhs_parts(data, true, false);
                let rhs = r_kappa.matvec(&[f_d, f_n].concat());
                (matrix, rhs, direct)
            }
            Formulation::L4 { rho } => {
                let ktm = m.kt_plain().matrix;
                let ktp = p.kt_plain().matrix;
                let vm = m.v_plain().matrix;
                let vp = p.v_plain().matrix;
                let kp = p.k_plain().matrix;
                let i_plus_2ktm = lin(&[(c(1.0), &id), (c(2.0), &ktm)]);
                let bold_k = lin(&[(c(-nu), &ktm), (c(2.0), &ktm.matmul(&ktm))])
                    .add_scaled(&ktp.matmul(&i_plus_2ktm), c(-nu))
                    .add_scaled(&lin(&[(c(1.0), &p.t().matrix), (c(-1.0), &m.t().matrix)]).matmul(&vm), c(2.0));
                let bold_v = vp
                    .matmul(&i_plus_2ktm)
                    .scale_real(-nu)
                    .add_scaled(&lin(&[(c(1.0), &id), (c(-2.0), &kp)]).matmul(&vm), c(-1.0));
                let matrix = bold_k.shift_diagonal(c(-(nu + 1.0) / 2.0)).add_scaled(&bold_v, Complex64::new(0.0, -rho));
                // general data: u₊ gains DL₊h − SL₊η and the jumps shrink to −(f_D, f_N)
                let (f_d, f_n) = self.rhs_parts(data, false, false);
                let rhs = axpy(&[(c(1.0), &f_n), (Complex64::new(0.0, -rho), &f_d)]);
                let correction = (!data.regular_inside).then(|| (data.h.clone(), data.eta.clone()));
                (matrix, rhs, Recipe::Indirect { kt_minus: ktm, v_minus: vm, correction })
            }
        };
        Ok(AssembledSystem { formulation, half: self.half, system: LinearSystem { matrix, rhs }, problem: self.problem.clone(), recipe })
    }

    fn l2_matrix(&self, plain: bool) -> CMatrix {
        let nu = self.problem.nu;
        let (p, m) = (&self.plus, &self.minus);
        let b11 = lin(&[(c(-1.0), &m.k_tilde().matrix), (c(-1.0), &p.k_tilde().matrix)]);
        let b12 = if plain {
            lin(&[(c(1.0), &p.v_plain().matrix), (c(1.0 / nu), &m.v_plain().matrix)])
        } else {
            lin(&[(c(1.0 + 1.0 / nu), &lambda(self.half).matrix), (c(1.0), &p.r_tilde().matrix), (c(1.0 / nu), &m.r_tilde().matrix)])
        };
        let b21 = lin(&[(c(-(1.0 + nu)), &dld(self.half).matrix), (c(-1.0), &p.t().matrix), (c(-nu), &m.t().matrix)]);
        let b22 = lin(&[(c(1.0), &p.kt_tilde().matrix), (c(1.0), &m.kt_tilde().matrix)]);
        CMatrix::block2(&b11, &b12, &b21, &b22)
    }
}

pub fn assemble(problem: &TransmissionProblem, formulation: Formulation, half: usize) -> Result<AssembledSystem, Error> {
    Assembler::new(problem, half)?.assemble(formulation)
}

pub fn assemble_l1(problem: &TransmissionProblem, half: usize) -> Result<AssembledSystem, Error> {
    assemble(problem, Formulation::L1, half)
}

pub fn assemble_l2(problem: &TransmissionProblem, half: usize) -> Result<AssembledSystem, Error> {
    assemble(problem, Formulation::L2, half)
}

pub fn assemble_l3(problem: &TransmissionProblem, half: usize, kappa: Complex64) -> Result<AssembledSystem, Error> {
    assemble(problem, Formulation::L3 { kappa }, half)
}

pub fn assemble_l4(problem: &TransmissionProblem, half: usize, rho: f64) -> Result<AssembledSystem, Error> {
    assemble(problem, Formulation::L4 { rho }, half)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Lu,
    Gmres { tol: f64, max_iter: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Direct { a: Vec<Complex64>, phi: Vec<Complex64> },
    Indirect { mu: Vec<Complex64> },
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub formulation: Formulation,
    pub half: usize,
    pub solution: Solution,
    /// GMRES iterations; zero for the direct solver.
    pub iterations: usize,
    /// `‖Ax − b‖₂ / ‖b‖₂`.
    pub residual: f64,
    pub history: Vec<f64>,
    pub seconds: f64,
    problem: TransmissionProblem,
    exterior: (Vec<Complex64>, Vec<Complex64>),
    interior: (Vec<Complex64>, Vec<Complex64>),
}

pub fn solve(assembled: &AssembledSystem, method: Method) -> Result<SolveResult, Error> {
    let start = Instant::now();
    let LinearSystem { matrix, rhs } = &assembled.system;
    let (x, iterations, history) = match method {
        Method::Lu => (lu_solve(matrix, rhs)?, 0, Vec::new()),
        Method::Gmres { tol, max_iter } => {
            let r = gmres(|v| matrix.matvec(v), rhs, tol, max_iter)?;
            (r.x, r.iterations, r.history)
        }
    };
    let ax = matrix.matvec(&x);
    let res: Vec<Complex64> = ax.iter().zip(rhs).map(|(a, b)| a - b).collect();
    let bnorm = norm2(rhs);
    let residual = if bnorm > 0.0 { norm2(&res) / bnorm } else { norm2(&res) };
    let n = 2 * assembled.half;
    let nu = assembled.problem.nu;
    let (solution, exterior, interior) = match &assembled.recipe {
        Recipe::Direct { h, eta } => {
            let a = x[..n].to_vec();
            let phi = x[n..].to_vec();
            let sl_out = axpy(&[(c(-1.0), &phi), (c(-1.0), eta)]);
            let dl_out = axpy(&[(c(1.0), &a), (c(1.0), h)]);
            let sl_in: Vec<Complex64> = phi.iter().map(|v| v / nu).collect();
            let dl_in: Vec<Complex64> = a.iter().map(|v| -v).collect();
            (Solution::Direct { a, phi }, (sl_out, dl_out), (sl_in, dl_in))
        }
        Recipe::Indirect { kt_minus, v_minus, correction } => {
            let ktmu = kt_minus.matvec(&x);
            let vmu = v_minus.matvec(&x);
            let mut sl_out = axpy(&[(c(nu), &x), (c(2.0 * nu), &ktmu)]);
            let mut dl_out: Vec<Complex64> = vmu.iter().map(|v| -2.0 * v).collect();
            if let Some((h, eta)) = correction {
                sl_out = axpy(&[(c(1.0), &sl_out), (c(-1.0), eta)]);
                dl_out = axpy(&[(c(1.0), &dl_out), (c(1.0), h)]);
            }
            let sl_in: Vec<Complex64> = x.iter().map(|v| -2.0 * v).collect();
            (Solution::Indirect { mu: x }, (sl_out, dl_out), (sl_in, vec![Complex64::default(); n]))
        }
    };
    Ok(SolveResult {
        formulation: assembled.formulation,
        half: assembled.half,
        solution,
        iterations,
        residual,
        history,
        seconds: start.elapsed().as_secs_f64(),
        problem: assembled.problem.clone(),
        exterior,
        interior,
    })
}

impl SolveResult {
    /// The scattered field `u₊` in the exterior.
    pub fn exterior_field(&self) -> Result<FieldEvaluator, Error> {
        let k = self.problem.k_plus;
        FieldEvaluator::new(&self.problem.curve, self.half)?
            .single_layer(k, self.exterior.0.clone())?
            .double_layer(k, self.exterior.1.clone())
    }

    /// The transmitted field `u₋` in the interior.
    pub fn interior_field(&self) -> Result<FieldEvaluator, Error> {
        let k = self.problem.k_minus;
        FieldEvaluator::new(&self.problem.curve, self.half)?
            .single_layer(k, self.interior.0.clone())?
            .double_layer(k, self.interior.1.clone())
    }

    pub fn far_field(&self, angles: &[f64]) -> Result<FarFieldPattern, Error> {
        self.exterior_field()?.far_field(angles)
    }

    pub fn problem(&self) -> &TransmissionProblem {
        &self.problem
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_problem(nu: f64, km: f64) -> TransmissionProblem {
        TransmissionProblem::new(ParametricCurve::unit_circle(), 2.0, km, nu, Incident::PlaneWave { angle: 0.0 }).unwrap()
    }

    #[test]
    fn plane_wave_data() {
        let p = circle_problem(1.0, 2.0);
        let d = build_data(&p, 8).unwrap();
        let x = p.curve.point(0.3 * PI);
        assert!(d.regular_inside);
        let t = GridNodes::new(8).unwrap().node(3);
        assert!((t - 3.0 * PI / 8.0).abs() < 1e-15);
        let x3 = p.curve.point(t);
        assert!((d.h[3] + Complex64::from_polar(1.0, 2.0 * x3[0])).norm() < 1e-15);
        let _ = x;
        // on the unit circle η = −∂ₙu_inc exactly
        let n = [t.cos(), t.sin()];
        let expected = -I * 2.0 * n[0] * Complex64::from_polar(1.0, 2.0 * x3[0]);
        assert!((d.eta[3] - expected).norm() < 1e-14);
    }

    #[test]
    fn parameter_validation() {
        assert!(TransmissionProblem::new(ParametricCurve::Kite, 0.0, 1.0, 1.0, Incident::PlaneWave { angle: 0.0 }).is_err());
        assert!(TransmissionProblem::new(ParametricCurve::unit_circle(), 1.0, 1.0, 1.0, Incident::PointSource { location: [1.0, 0.0] }).is_err());
        assert!(Formulation::parse("L3", 8.0, Some(Complex64::new(8.0, 0.0)), None).is_err());
        assert!(Formulation::parse("L4", 8.0, None, Some(0.0)).is_err());
        assert!(Formulation::parse("L5", 8.0, None, None).is_err());
        assert_eq!(Formulation::parse("l4", 8.0, None, None).unwrap(), Formulation::L4 { rho: 8.0 });
    }

    #[test]
    fn matched_media_l1_is_identity() {
        let p = circle_problem(1.0, 2.0);
        let sys = assemble_l1(&p, 16).unwrap();
        let dev = sys.system.matrix.add_scaled(&CMatrix::identity(64), c(-1.0)).norm_max();
        assert!(dev < 1e-13, "{dev}");
        let r = solve(&sys, Method::Lu).unwrap();
        let Solution::Direct { a, .. } = &r.solution else { panic!() };
        for (ai, hi) in a.iter().zip(&build_data(&p, 16).unwrap().h) {
            assert!((ai + hi).norm() < 1e-13);
        }
    }
}
