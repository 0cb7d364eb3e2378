//! Verification batteries shared by the CLI and the test suites.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::fields::{cauchy_data, directions, fundamental, fundamental_gradient, FieldEvaluator};
use crate::formulations::{Assembler, Formulation, Incident, Method, TransmissionProblem};
use crate::fourier::{oracle, psi_hat, sobolev_norm, TrigPolynomial, Weight};
use crate::geometry::{GridNodes, ParametricCurve, Vec2};
use crate::kernels::KernelContext;
use crate::linalg::norm_inf;
use crate::operators::{circle, DiscreteOperator, OperatorSet};
use crate::Error;

/// Sup-norm residuals of `(−½ + K)a − Vφ` and `Ha − (½ + Kᵀ)φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalderonResiduals {
    pub plain_dirichlet: f64,
    pub plain_neumann: f64,
    pub tilde_dirichlet: f64,
    pub tilde_neumann: f64,
}

impl CalderonResiduals {
    pub fn max(&self) -> f64 {
        self.plain_dirichlet.max(self.plain_neumann).max(self.tilde_dirichlet).max(self.tilde_neumann)
    }
}

/// Residuals of the exterior Calderón identities for the Cauchy data of
/// `Φ_k(· − source)`, with `source` inside the curve.
pub fn calderon_residuals(curve: &ParametricCurve, k: f64, source: Vec2, half: usize) -> Result<CalderonResiduals, Error> {
    let (a, phi) = cauchy_data(curve, half, |x| fundamental(k, x, source), |x| fundamental_gradient(k, x, source))?;
    let set = OperatorSet::new(KernelContext::new(curve.clone(), k)?, half)?;
    let h_a = set.h().apply(&a);
    let residual = |k_op: Vec<Complex64>, v_phi: Vec<Complex64>, kt_phi: Vec<Complex64>| -> (f64, f64) {
        let first: Vec<Complex64> = (0..a.len()).map(|i| -0.5 * a[i] + k_op[i] - v_phi[i]).collect();
        let second: Vec<Complex64> = (0..a.len()).map(|i| h_a[i] - 0.5 * phi[i] - kt_phi[i]).collect();
        (norm_inf(&first), norm_inf(&second))
    };
    let (pd, pn) = residual(set.k_plain().apply(&a), set.v_plain().apply(&phi), set.kt_plain().apply(&phi));
    let (td, tn) = residual(set.k_tilde().apply(&a), set.v_tilde().apply(&phi), set.kt_tilde().apply(&phi));
    Ok(CalderonResiduals { plain_dirichlet: pd, plain_neumann: pn, tilde_dirichlet: td, tilde_neumann: tn })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// One measured quantity against its bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), measured, bound, relation: Relation::AtMost }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), measured, bound, relation: Relation::AtLeast }
    }

    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.measured <= self.bound,
            Relation::AtLeast => self.measured >= self.bound,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.relation == Relation::AtMost { "<=" } else { ">=" };
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {:.3e} {op} {:.3e}", self.name, self.measured, self.bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Weights,
    Circle,
    Calderon,
    Extinction,
    Crossform,
    Rates,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Weights, Suite::Circle, Suite::Calderon, Suite::Extinction, Suite::Crossform, Suite::Rates];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Weights => "weights",
            Suite::Circle => "circle",
            Suite::Calderon => "calderon",
            Suite::Extinction => "extinction",
            Suite::Crossform => "crossform",
            Suite::Rates => "rates",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

pub fn run_verification(suite: Suite) -> Result<VerificationReport, Error> {
    let checks = match suite {
        Suite::Weights => weights_checks(),
        Suite::Circle => circle_checks()?,
        Suite::Calderon => calderon_checks()?,
        Suite::Extinction => extinction_checks()?,
        Suite::Crossform => crossform_checks()?,
        Suite::Rates => rate_checks()?,
    };
    Ok(VerificationReport { suite, checks })
}

/// Worst table error against the quadrature oracle over `|n| ≤ 64`, and the
/// misfit of known misprinted table values.
pub fn weights_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    for w in [Weight::Smooth, Weight::Log, Weight::SinSqLog] {
        let err = (-64..=64i64).map(|n| (psi_hat(w, n) - oracle::psi_hat_quadrature(w, n)).abs()).fold(0.0, f64::max);
        checks.push(Check::at_most(format!("psi_hat {w:?} vs quadrature, |n| <= 64"), err, 1e-12));
    }
    // misprints: −2 log 4 and −2/|n| for the log weight, ½ and −3/8 for sin²·log
    let printed = [
        ("log weight n=0  misprint", Weight::Log, 0, -2.0 * 4f64.ln()),
        ("log weight n=3  misprint", Weight::Log, 3, -2.0 / 3.0),
        ("sin^2 log weight n=0  misprint", Weight::SinSqLog, 0, 0.5),
        ("sin^2 log weight n=1  misprint", Weight::SinSqLog, 1, -0.375),
    ];
    for (name, w, n, v) in printed {
        checks.push(Check::at_least(format!("{name} misses the oracle"), (oracle::psi_hat_quadrature(w, n) - v).abs(), 1e-3));
    }
    checks
}

/// Worst relative error of `op e_n ≈ λ_n e_n` over `|n| ≤ modes`.
pub fn circle_eigen_error(
    op: &DiscreteOperator,
    k: f64,
    modes: i64,
    eig: impl Fn(&circle::Eigenvalues) -> Complex64,
) -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for n in -modes..=modes {
        let lam = eig(&circle::eigenvalues(n, k)?);
        let e = TrigPolynomial::basis(n, op.half)?;
        let out = op.apply(e.nodal());
        let err = out.iter().zip(e.nodal()).map(|(o, v)| (o - v * lam).norm()).fold(0.0, f64::max);
        worst = worst.max(err / lam.norm());
    }
    Ok(worst)
}

pub fn circle_checks() -> Result<Vec<Check>, Error> {
    let k = 2.0;
    let s = OperatorSet::new(KernelContext::new(ParametricCurve::unit_circle(), k)?, 64)?;
    let cases: [(&str, DiscreteOperator, fn(&circle::Eigenvalues) -> Complex64, f64); 7] = [
        ("V plain", s.v_plain(), |e| e.v, 1e-10),
        ("K plain", s.k_plain(), |e| e.k, 1e-10),
        ("K^T plain", s.kt_plain(), |e| e.kt, 1e-10),
        ("V tilde", s.v_tilde(), |e| e.v, 1e-11),
        ("K tilde", s.k_tilde(), |e| e.k, 1e-11),
        ("K^T tilde", s.kt_tilde(), |e| e.kt, 1e-11),
        ("H", s.h(), |e| e.h, 1e-8),
    ];
    cases
        .into_iter()
        .map(|(name, op, eig, tol)| Ok(Check::at_most(format!("{name} eigenvalues, k=2, N=64, |n|<=8"), circle_eigen_error(&op, k, 8, eig)?, tol)))
        .collect()
}

pub const CALDERON_SOURCE: Vec2 = [0.1, 0.2];

pub fn calderon_checks() -> Result<Vec<Check>, Error> {
    let coarse = calderon_residuals(&ParametricCurve::Kite, 8.0, CALDERON_SOURCE, 32)?;
    let fine = calderon_residuals(&ParametricCurve::Kite, 8.0, CALDERON_SOURCE, 128)?;
    Ok(vec![
        Check::at_most("Dirichlet identity, kite, k=8, N=128", fine.plain_dirichlet.max(fine.tilde_dirichlet), 1e-10),
        Check::at_most("Neumann identity, kite, k=8, N=128", fine.plain_neumann.max(fine.tilde_neumann), 1e-10),
        Check::at_least("residual drop N=32 -> N=128", coarse.max() / fine.max(), 1e3),
    ])
}

/// Ten points on the ellipse `(x₀ + a cos θ, y₀ + b sin θ)`.
fn ring(center: Vec2, a: f64, b: f64) -> Vec<Vec2> {
    directions(10).into_iter().map(|t| [center[0] + a * t.cos(), center[1] + b * t.sin()]).collect()
}

/// Largest errors of the exterior Green representation of `Φ_k(· − y₀)` at
/// exterior points and of its vanishing at interior points.
pub fn extinction_errors(curve: &ParametricCurve, k: f64, source: Vec2, half: usize, outside: &[Vec2], inside: &[Vec2]) -> Result<(f64, f64), Error> {
    let (a, phi) = cauchy_data(curve, half, |x| fundamental(k, x, source), |x| fundamental_gradient(k, x, source))?;
    let rep = FieldEvaluator::new(curve, half)?
        .single_layer(k, phi.iter().map(|v| -v).collect())?
        .double_layer(k, a)?;
    let out = rep.eval(outside)?;
    let repro = out.iter().zip(outside).map(|(u, x)| (u - fundamental(k, *x, source)).norm()).fold(0.0, f64::max);
    let null = rep.eval(inside)?.iter().map(|u| u.norm()).fold(0.0, f64::max);
    Ok((repro, null))
}

pub fn extinction_checks() -> Result<Vec<Check>, Error> {
    let (repro, null) = extinction_errors(
        &ParametricCurve::Kite,
        8.0,
        CALDERON_SOURCE,
        128,
        &ring([0.0, 0.0], 2.5, 2.5),
        &ring([0.05, 0.0], 0.35, 0.6),
    )?;
    Ok(vec![
        Check::at_most("representation at 10 exterior points, N=128", repro, 1e-10),
        Check::at_most("null field at 10 interior points, N=128", null, 1e-10),
    ])
}

/// Largest pairwise far-field discrepancy between formulations.
pub fn crossform_discrepancy(problem: &TransmissionProblem, forms: &[Formulation], half: usize, m: usize) -> Result<f64, Error> {
    let asm = Assembler::new(problem, half)?;
    let angles = directions(m);
    let patterns = forms
        .iter()
        .map(|&f| crate::formulations::solve(&asm.assemble(f)?, Method::Lu)?.far_field(&angles))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut worst: f64 = 0.0;
    for i in 0..patterns.len() {
        for j in i + 1..patterns.len() {
            worst = worst.max(patterns[i].max_difference(&patterns[j])?);
        }
    }
    Ok(worst)
}

pub fn crossform_checks() -> Result<Vec<Check>, Error> {
    let k = 8.0;
    let problem = TransmissionProblem::new(ParametricCurve::Kite, k, 32.0, 1.0, Incident::PlaneWave { angle: 0.0 })?;
    let forms = [
        Formulation::L1,
        Formulation::L2,
        Formulation::L3 { kappa: Complex64::new(k, 0.5) },
        Formulation::L4 { rho: k },
    ];
    let d = crossform_discrepancy(&problem, &forms, 256, 360)?;
    Ok(vec![Check::at_most("pairwise far-field gap L1/L2/L3/L4, N=256, 360 directions", d, 1e-8)])
}

/// Discrete `H⁰` errors of `V_N φ` for `φ = e^{cos t}` on the kite against
/// `N = reference`, for the plain and tilde families.
pub fn single_layer_errors(k: f64, ladder: &[usize], reference: usize) -> Result<Vec<(usize, f64, f64)>, Error> {
    let curve = ParametricCurve::Kite;
    let density = |half: usize| -> Result<Vec<Complex64>, Error> {
        Ok(GridNodes::new(half)?.nodes().into_iter().map(|t| Complex64::new(t.cos().exp(), 0.0)).collect())
    };
    let fine_set = OperatorSet::new(KernelContext::new(curve.clone(), k)?, reference)?;
    let fine = TrigPolynomial::from_nodal(&fine_set.v_tilde().apply(&density(reference)?))?;
    ladder
        .iter()
        .map(|&half| {
            let set = OperatorSet::new(KernelContext::new(curve.clone(), k)?, half)?;
            let phi = density(half)?;
            let nodes = GridNodes::new(half)?.nodes();
            let err = |op: DiscreteOperator| -> Result<f64, Error> {
                let diff: Vec<Complex64> = op.apply(&phi).iter().zip(&nodes).map(|(v, &t)| v - fine.eval(t)).collect();
                Ok(sobolev_norm(&TrigPolynomial::from_nodal(&diff)?, 0.0))
            };
            Ok((half, err(set.v_plain())?, err(set.v_tilde())?))
        })
        .collect()
}

/// Absolute `H⁰` error level below which `V_N φ` differences are rounding.
pub const ROUNDING_FLOOR: f64 = 1e-14;

pub fn rate_checks() -> Result<Vec<Check>, Error> {
    let ladder = [32, 48, 64];
    let errs = single_layer_errors(8.0, &ladder, 512)?;
    let mut checks = Vec::new();
    for &(n, plain, tilde) in &errs {
        checks.push(Check::at_least(format!("plain/tilde single layer error ratio, N={n}"), plain / tilde, 1.0));
    }
    for w in errs.windows(2) {
        let (n0, n1) = (w[0].0 as f64, w[1].0 as f64);
        // a factor 10 per 1.5× in N, rescaled to the actual step
        let need = 10f64.powf((n1 / n0).ln() / 1.5f64.ln());
        checks.push(Check::at_least(format!("plain decay N={n0}->{n1}"), w[0].1 / w[1].1, need));
        checks.push(Check::at_least(format!("tilde decay N={n0}->{n1}"), w[0].2 / w[1].2, need));
    }
    // where both already sit at the rounding floor the decay ratios carry no information
    for &(n, plain, tilde) in errs.iter().filter(|e| e.1.max(e.2) <= ROUNDING_FLOOR) {
        checks.push(Check::at_most(format!("errors at rounding floor, N={n}"), plain.max(tilde), ROUNDING_FLOOR));
    }
    Ok(checks)
}
