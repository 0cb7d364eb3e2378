//! Closed curves given by smooth 2π-periodic parameterizations.
//!
//! Every built-in curve is closed-form, so `x'` and `x''` are exact. All
//! curves are oriented counterclockwise: `(x₂', −x₁')` points into the
//! unbounded exterior.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::Error;

/// A point of the plane or a tangent vector.
pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// Position and first two derivatives of the parameterization at one `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: Vec2,
    pub dx: Vec2,
    pub ddx: Vec2,
}

impl CurvePoint {
    /// `|x'(t)|`.
    #[inline]
    pub fn speed(&self) -> f64 {
        norm(self.dx)
    }

    /// Unnormalized exterior normal `(x₂', −x₁')`, of length `|x'|`.
    #[inline]
    pub fn scaled_normal(&self) -> Vec2 {
        [self.dx[1], -self.dx[0]]
    }

    /// `x₁'x₂'' − x₁''x₂'`, i.e. signed curvature times `|x'|³`.
    #[inline]
    pub fn cross(&self) -> f64 {
        self.dx[0] * self.ddx[1] - self.ddx[0] * self.dx[1]
    }
}

/// Coefficients of the crescent-shaped cavity.
///
/// `x(t) = ρ(u)(cos φ(u), sin φ(u))` with
/// `u = t − β sin 2t`, `ρ = R + w cos u`, `φ = α sin u (1 + γ cos² u)`.
/// The opening faces the negative `x₁` axis.
pub const CAVITY_R: f64 = 0.85;
pub const CAVITY_W: f64 = 0.34;
pub const CAVITY_ALPHA: f64 = 2.0;
pub const CAVITY_GAMMA: f64 = 0.4;
pub const CAVITY_BETA: f64 = 0.3;

/// Kite: `x(t) = (cos t + 0.65 cos 2t − 0.65, 1.5 sin t)`.
pub const KITE_DENT: f64 = 0.65;
pub const KITE_STRETCH: f64 = 1.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "snake_case")]
pub enum ParametricCurve {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Kite,
    Cavity,
}

impl ParametricCurve {
    pub fn unit_circle() -> Self {
        ParametricCurve::Circle { radius: 1.0 }
    }

    /// Builds a curve from its name and an optional parameter list
    /// (`circle [radius]`, `ellipse [a, b]`, `kite`, `cavity`).
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self, Error> {
        let curve = match (name.to_ascii_lowercase().as_str(), params) {
            ("circle", []) => ParametricCurve::unit_circle(),
            ("circle", [r]) => ParametricCurve::Circle { radius: *r },
            ("ellipse", [a, b]) => ParametricCurve::Ellipse { a: *a, b: *b },
            ("kite", []) => ParametricCurve::Kite,
            ("cavity", []) => ParametricCurve::Cavity,
            (other, p) => {
                return Err(Error::Config(format!(
                    "unknown curve `{other}` with {} parameter(s)",
                    p.len()
                )))
            }
        };
        curve.validate()?;
        Ok(curve)
    }

    fn validate(&self) -> Result<(), Error> {
        match *self {
            ParametricCurve::Circle { radius } if !(radius > 0.0 && radius.is_finite()) => {
                Err(Error::Config(format!("circle radius must be positive, got {radius}")))
            }
            ParametricCurve::Ellipse { a, b } if !(a > 0.0 && b > 0.0) => {
                Err(Error::Config(format!("ellipse semi-axes must be positive, got ({a}, {b})")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ParametricCurve::Circle { .. } => "circle",
            ParametricCurve::Ellipse { .. } => "ellipse",
            ParametricCurve::Kite => "kite",
            ParametricCurve::Cavity => "cavity",
        }
    }

    /// `x(t)`, `x'(t)`, `x''(t)`.
    pub fn eval(&self, t: f64) -> CurvePoint {
        match *self {
            ParametricCurve::Circle { radius } => {
                let (s, c) = t.sin_cos();
                CurvePoint {
                    x: [radius * c, radius * s],
                    dx: [-radius * s, radius * c],
                    ddx: [-radius * c, -radius * s],
                }
            }
            ParametricCurve::Ellipse { a, b } => {
                let (s, c) = t.sin_cos();
                CurvePoint {
                    x: [a * c, b * s],
                    dx: [-a * s, b * c],
                    ddx: [-a * c, -b * s],
                }
            }
            ParametricCurve::Kite => {
                let (s, c) = t.sin_cos();
                let (s2, c2) = (2.0 * t).sin_cos();
                CurvePoint {
                    x: [c + KITE_DENT * c2 - KITE_DENT, KITE_STRETCH * s],
                    dx: [-s - 2.0 * KITE_DENT * s2, KITE_STRETCH * c],
                    ddx: [-c - 4.0 * KITE_DENT * c2, -KITE_STRETCH * s],
                }
            }
            ParametricCurve::Cavity => cavity(t),
        }
    }

    pub fn point(&self, t: f64) -> Vec2 {
        self.eval(t).x
    }
}

fn cavity(t: f64) -> CurvePoint {
    let (r0, w, alpha, gamma, beta) = (CAVITY_R, CAVITY_W, CAVITY_ALPHA, CAVITY_GAMMA, CAVITY_BETA);
    let (s2t, c2t) = (2.0 * t).sin_cos();
    let u = t - beta * s2t;
    let du = 1.0 - 2.0 * beta * c2t;
    let ddu = 4.0 * beta * s2t;

    let (su, cu) = u.sin_cos();
    let rho = r0 + w * cu;
    let rho_u = -w * su;
    let rho_uu = -w * cu;
    let phi = alpha * su * (1.0 + gamma * cu * cu);
    let phi_u = alpha * cu * (1.0 + gamma * (cu * cu - 2.0 * su * su));
    let phi_uu = alpha * (-su + gamma * (2.0 * su * su * su - 7.0 * su * cu * cu));

    let (sp, cp) = phi.sin_cos();
    let er = [cp, sp];
    let ephi = [-sp, cp];
    let x_u = [
        rho_u * er[0] + rho * phi_u * ephi[0],
        rho_u * er[1] + rho * phi_u * ephi[1],
    ];
    let radial = rho_uu - rho * phi_u * phi_u;
    let angular = 2.0 * rho_u * phi_u + rho * phi_uu;
    let x_uu = [
        radial * er[0] + angular * ephi[0],
        radial * er[1] + angular * ephi[1],
    ];
    CurvePoint {
        x: [rho * er[0], rho * er[1]],
        dx: [x_u[0] * du, x_u[1] * du],
        ddx: [
            x_uu[0] * du * du + x_u[0] * ddu,
            x_uu[1] * du * du + x_u[1] * ddu,
        ],
    }
}

/// `x(t)`, `x'(t)`, `x''(t)` from the closed-form expressions.
pub fn curve_eval(curve: &ParametricCurve, t: f64) -> CurvePoint {
    curve.eval(t)
}

/// Unit normal pointing into the exterior, `(x₂', −x₁')/|x'|`.
pub fn outward_normal(curve: &ParametricCurve, t: f64) -> Vec2 {
    let p = curve.eval(t);
    let n = p.scaled_normal();
    let len = p.speed();
    [n[0] / len, n[1] / len]
}

/// Uniform grid `t_j = jπ/N`, `j = 0, …, 2N−1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridNodes {
    n: usize,
}

impl GridNodes {
    pub fn new(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidArgument("grid parameter N must be at least 1".into()));
        }
        Ok(GridNodes { n })
    }

    /// The half-size `N`.
    pub fn half(&self) -> usize {
        self.n
    }

    /// Number of nodes, `2N`.
    pub fn len(&self) -> usize {
        2 * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        PI / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * PI / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.node(j)).collect()
    }
}

pub fn grid(n: usize) -> Result<GridNodes, Error> {
    GridNodes::new(n)
}

/// The curve sampled on a grid.
#[derive(Clone, Debug)]
pub struct SampledCurve {
    pub grid: GridNodes,
    pub points: Vec<CurvePoint>,
}

impl SampledCurve {
    pub fn new(curve: &ParametricCurve, grid: GridNodes) -> Self {
        let points = grid.nodes().into_iter().map(|t| curve.eval(t)).collect();
        SampledCurve { grid, points }
    }

    pub fn max_speed(&self) -> f64 {
        self.points.iter().map(CurvePoint::speed).fold(0.0, f64::max)
    }

    /// Distance from `p` to the nearest node.
    pub fn nodal_distance(&self, p: Vec2) -> f64 {
        self.points
            .iter()
            .map(|q| (p[0] - q.x[0]).hypot(p[1] - q.x[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the sampled polygon around `p` (1 inside, 0 outside).
    pub fn winding_number(&self, p: Vec2) -> i32 {
        let mut total = 0.0;
        let m = self.points.len();
        for j in 0..m {
            let a = self.points[j].x;
            let b = self.points[(j + 1) % m].x;
            let (ax, ay) = (a[0] - p[0], a[1] - p[1]);
            let (bx, by) = (b[0] - p[0], b[1] - p[1]);
            total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
        }
        (total / (2.0 * PI)).round() as i32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtins() -> Vec<ParametricCurve> {
        vec![
            ParametricCurve::unit_circle(),
            ParametricCurve::Ellipse { a: 2.0, b: 1.0 },
            ParametricCurve::Kite,
            ParametricCurve::Cavity,
        ]
    }

    #[test]
    fn circle_identities() {
        let p = curve_eval(&ParametricCurve::unit_circle(), 0.0);
        assert_eq!(p.x, [1.0, 0.0]);
        assert_eq!(p.dx, [0.0, 1.0]);
        assert_eq!(p.ddx, [-1.0, 0.0]);
        for t in [0.1, 1.0, 2.5, 4.0] {
            assert!((curve_eval(&ParametricCurve::unit_circle(), t).speed() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn kite_at_zero() {
        let p = curve_eval(&ParametricCurve::Kite, 0.0);
        assert!((p.x[0] - 1.0).abs() < 1e-15 && p.x[1].abs() < 1e-15);
    }

    #[test]
    fn normals() {
        let c = ParametricCurve::unit_circle();
        let n = outward_normal(&c, 0.0);
        assert!((n[0] - 1.0).abs() < 1e-15 && n[1].abs() < 1e-15);
        let n = outward_normal(&c, PI / 2.0);
        assert!(n[0].abs() < 1e-15 && (n[1] - 1.0).abs() < 1e-15);
        // ellipse x²/4 + y² = 1: gradient (x/2, 2y) at (2, 0) is along +x
        let n = outward_normal(&ParametricCurve::Ellipse { a: 2.0, b: 1.0 }, 0.0);
        assert!((n[0] - 1.0).abs() < 1e-15 && n[1].abs() < 1e-15);
    }

    #[test]
    fn grid_nodes() {
        assert!(grid(0).is_err());
        assert_eq!(grid(1).unwrap().nodes(), vec![0.0, PI]);
        let g = grid(2).unwrap().nodes();
        for (a, b) in g.iter().zip([0.0, PI / 2.0, PI, 3.0 * PI / 2.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let g = grid(64).unwrap();
        assert_eq!(g.len(), 128);
        assert!((g.spacing() - PI / 64.0).abs() < 1e-16);
    }

    #[test]
    fn periodicity_and_normals_of_builtins() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut uniform = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for c in builtins() {
            for _ in 0..1000 {
                let t = 2.0 * PI * uniform();
                let a = c.eval(t);
                let b = c.eval(t + 2.0 * PI);
                let scale = 1.0 + norm(a.x);
                assert!(norm([a.x[0] - b.x[0], a.x[1] - b.x[1]]) <= 1e-14 * scale, "{}", c.name());
                assert!(a.speed() > 0.0);
                let n = outward_normal(&c, t);
                assert!((norm(n) - 1.0).abs() < 1e-14);
                assert!(dot(n, a.dx).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        for c in builtins() {
            for &t in &[0.3, 1.7, 2.9, 4.4, 5.8] {
                let p = c.eval(t);
                let mut errs = Vec::new();
                for &h in &[1e-3, 1e-4] {
                    let (a, b) = (c.eval(t + h), c.eval(t - h));
                    let e1 = norm([
                        p.dx[0] - (a.x[0] - b.x[0]) / (2.0 * h),
                        p.dx[1] - (a.x[1] - b.x[1]) / (2.0 * h),
                    ]);
                    let e2 = norm([
                        p.ddx[0] - (a.dx[0] - b.dx[0]) / (2.0 * h),
                        p.ddx[1] - (a.dx[1] - b.dx[1]) / (2.0 * h),
                    ]);
                    errs.push((e1, e2));
                }
                for k in 0..2 {
                    let (coarse, fine) = if k == 0 { (errs[0].0, errs[1].0) } else { (errs[0].1, errs[1].1) };
                    if coarse < 1e-12 {
                        continue; // exact at both steps (e.g. quadratic components)
                    }
                    let order = (coarse / fine).log10();
                    assert!(order >= 1.9, "{} t={t} derivative {k}: order {order}", c.name());
                }
            }
        }
    }

    #[test]
    fn builtins_are_counterclockwise() {
        for c in builtins() {
            let s = SampledCurve::new(&c, grid(256).unwrap());
            // signed area via the trapezoid rule
            let area: f64 = s.points.iter().map(|p| p.x[0] * p.dx[1] - p.x[1] * p.dx[0]).sum::<f64>()
                * 0.5
                * s.grid.spacing();
            assert!(area > 0.0, "{}", c.name());
        }
    }

    #[test]
    fn winding_number_classifies_points() {
        let s = SampledCurve::new(&ParametricCurve::Kite, grid(64).unwrap());
        assert_eq!(s.winding_number([0.0, 0.0]), 1);
        assert_eq!(s.winding_number([3.0, 0.5]), 0);
        let s = SampledCurve::new(&ParametricCurve::Cavity, grid(64).unwrap());
        assert_eq!(s.winding_number([0.85, 0.0]), 1);
        // the mouth of the cavity
        assert_eq!(s.winding_number([0.0, 0.0]), 0);
    }

    #[test]
    fn from_name_parses_parameters() {
        assert_eq!(
            ParametricCurve::from_name("ellipse", &[2.0, 1.0]).unwrap(),
            ParametricCurve::Ellipse { a: 2.0, b: 1.0 }
        );
        assert_eq!(ParametricCurve::from_name("kite", &[]).unwrap(), ParametricCurve::Kite);
        assert!(ParametricCurve::from_name("kite", &[1.0]).is_err());
        assert!(ParametricCurve::from_name("circle", &[-1.0]).is_err());
    }
}
