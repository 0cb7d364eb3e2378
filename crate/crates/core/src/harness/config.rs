//! Study configuration, read from a TOML document.
//!
//! Every key is optional; the defaults give the kite far-field convergence
//! study shipped in `configs/convergence_kite.toml`:
//!
//! ```toml
//! [geometry]
//! curve = "kite"            # circle | ellipse | kite | cavity
//! params = []               # circle: [radius], ellipse: [a, b]
//!
//! [physics]
//! k_plus = 8.0
//! k_minus = 32.0
//! nu = 1.0
//!
//! [incident]
//! type = "plane_wave"       # or "point_source"
//! angle = 0.0               # plane wave direction (radians)
//! # location = [3.0, 0.0]   # point source position
//!
//! [study]
//! formulations = ["L2", "L2plain"]
//! ladder = [96, 128, 160]
//! reference = "L1"          # a formulation name, or "self" for the same one at 2N
//! reference_n = 320         # at least twice the largest ladder entry
//! directions = 360
//! # kappa = [8.0, 0.5]      # L3 wavenumber, default k₊ + 0.5i
//! # rho = 8.0               # L4 coupling, default k₊
//!
//! [solver]
//! method = "lu"             # or "gmres"
//! tol = 1e-12
//! max_iter = 2000
//!
//! [output]
//! dir = "out"
//! far_field = false         # also dump far-field patterns as CSV
//! ```

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::formulations::{Formulation, Incident, Method, TransmissionProblem};
use crate::geometry::ParametricCurve;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub curve: String,
    pub params: Vec<f64>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig { curve: "kite".into(), params: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsConfig {
    pub k_plus: f64,
    pub k_minus: f64,
    pub nu: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        PhysicsConfig { k_plus: 8.0, k_minus: 32.0, nu: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IncidentConfig {
    #[serde(rename = "type")]
    pub kind: String,
    pub angle: f64,
    pub location: Option<[f64; 2]>,
}

impl Default for IncidentConfig {
    fn default() -> Self {
        IncidentConfig { kind: "plane_wave".into(), angle: 0.0, location: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudySection {
    pub formulations: Vec<String>,
    pub ladder: Vec<usize>,
    pub reference: String,
    pub reference_n: usize,
    pub directions: usize,
    pub kappa: Option<[f64; 2]>,
    pub rho: Option<f64>,
}

impl Default for StudySection {
    fn default() -> Self {
        StudySection {
            formulations: vec!["L2".into(), "L2plain".into()],
            ladder: vec![96, 128, 160],
            reference: "L1".into(),
            reference_n: 320,
            directions: 360,
            kappa: None,
            rho: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub method: String,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { method: "lu".into(), tol: 1e-12, max_iter: 2000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub far_field: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("out"), far_field: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub geometry: GeometryConfig,
    pub physics: PhysicsConfig,
    pub incident: IncidentConfig,
    pub study: StudySection,
    pub solver: SolverConfig,
    pub output: OutputConfig,
}

/// Where reference far fields come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reference {
    Formulation(Formulation, usize),
    /// The same formulation at twice the resolution.
    SelfAtDouble,
}

impl StudyConfig {
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let cfg: StudyConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.problem()?;
        self.method()?;
        let forms = self.formulations()?;
        if forms.is_empty() {
            return Err(Error::Config("no formulations listed".into()));
        }
        if self.study.ladder.is_empty() || self.study.ladder.iter().any(|&n| n < crate::operators::MIN_HALF) {
            return Err(Error::Config(format!(
                "ladder must be non-empty with every N ≥ {}",
                crate::operators::MIN_HALF
            )));
        }
        if self.study.directions == 0 {
            return Err(Error::Config("directions must be at least 1".into()));
        }
        if let Reference::Formulation(_, n) = self.reference()? {
            let top = *self.study.ladder.iter().max().expect("non-empty");
            if n < 2 * top {
                return Err(Error::Config(format!("reference_n = {n} is below twice the largest ladder N = {top}")));
            }
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<TransmissionProblem, Error> {
        let curve = ParametricCurve::from_name(&self.geometry.curve, &self.geometry.params)?;
        let incident = match self.incident.kind.as_str() {
            "plane_wave" => Incident::PlaneWave { angle: self.incident.angle },
            "point_source" => Incident::PointSource {
                location: self.incident.location.ok_or_else(|| Error::Config("point_source needs a location".into()))?,
            },
            other => return Err(Error::Config(format!("unknown incident type '{other}'"))),
        };
        let p = &self.physics;
        TransmissionProblem::new(curve, p.k_plus, p.k_minus, p.nu, incident).map_err(|e| Error::Config(e.to_string()))
    }

    fn parse_formulation(&self, name: &str) -> Result<Formulation, Error> {
        let kappa = self.study.kappa.map(|[re, im]| Complex64::new(re, im));
        Formulation::parse(name, self.physics.k_plus, kappa, self.study.rho).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn formulations(&self) -> Result<Vec<Formulation>, Error> {
        self.study.formulations.iter().map(|f| self.parse_formulation(f)).collect()
    }

    pub fn reference(&self) -> Result<Reference, Error> {
        if self.study.reference.eq_ignore_ascii_case("self") {
            Ok(Reference::SelfAtDouble)
        } else {
            Ok(Reference::Formulation(self.parse_formulation(&self.study.reference)?, self.study.reference_n))
        }
    }

    pub fn method(&self) -> Result<Method, Error> {
        match self.solver.method.as_str() {
            "lu" => Ok(Method::Lu),
            "gmres" if self.solver.tol > 0.0 && self.solver.max_iter > 0 => {
                Ok(Method::Gmres { tol: self.solver.tol, max_iter: self.solver.max_iter })
            }
            "gmres" => Err(Error::Config("gmres needs tol > 0 and max_iter > 0".into())),
            other => Err(Error::Config(format!("unknown solver '{other}'"))),
        }
    }
}
