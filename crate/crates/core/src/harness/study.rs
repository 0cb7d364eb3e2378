//! Far-field convergence studies over a ladder of resolutions.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::fields::{directions, FarFieldPattern};
use crate::formulations::{Assembler, Formulation, Method, TransmissionProblem};
use crate::harness::config::{Reference, StudyConfig};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StudyRow {
    pub formulation: String,
    #[serde(rename = "N")]
    pub n: usize,
    /// `max_j |u∞_N(θ_j) − u∞_ref(θ_j)|`; `None` when the cell failed.
    pub error_linf: Option<f64>,
    pub iters: usize,
    /// Wall time of the cell. Operator matrices shared by the formulations
    /// at one `N` are charged to the first cell that needs them.
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StudyReport {
    pub curve: String,
    pub k_plus: f64,
    pub k_minus: f64,
    pub nu: f64,
    pub reference: String,
    pub reference_n: Option<usize>,
    pub rows: Vec<StudyRow>,
    #[serde(skip)]
    pub patterns: Vec<(String, usize, FarFieldPattern)>,
}

/// Far field of one `(formulation, N)` cell and the work it took.
pub fn far_field_cell(
    problem: &TransmissionProblem,
    formulation: Formulation,
    half: usize,
    method: Method,
    angles: &[f64],
) -> Result<(FarFieldPattern, usize), Error> {
    let asm = Assembler::new(problem, half)?;
    let r = crate::formulations::solve(&asm.assemble(formulation)?, method)?;
    Ok((r.far_field(angles)?, r.iterations))
}

struct Cell {
    row: StudyRow,
    pattern: Option<FarFieldPattern>,
}

fn run_cell(
    problem: &TransmissionProblem,
    asm: &Result<Assembler, Error>,
    f: Formulation,
    half: usize,
    method: Method,
    angles: &[f64],
    reference: Option<&FarFieldPattern>,
) -> Cell {
    let start = Instant::now();
    let outcome = (|| -> Result<(FarFieldPattern, usize, f64), Error> {
        let asm = asm.as_ref().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let r = crate::formulations::solve(&asm.assemble(f)?, method)?;
        let ff = r.far_field(angles)?;
        let err = match reference {
            Some(reference) => ff.max_difference(reference)?,
            None => {
                let (fine, _) = far_field_cell(problem, f, 2 * half, method, angles)?;
                ff.max_difference(&fine)?
            }
        };
        Ok((ff, r.iterations, err))
    })();
    let seconds = start.elapsed().as_secs_f64();
    let name = f.name().to_string();
    match outcome {
        Ok((ff, iters, err)) => Cell {
            row: StudyRow { formulation: name, n: half, error_linf: Some(err), iters, seconds, failure: None },
            pattern: Some(ff),
        },
        Err(e) => Cell {
            row: StudyRow { formulation: name, n: half, error_linf: None, iters: 0, seconds, failure: Some(e.to_string()) },
            pattern: None,
        },
    }
}

/// Solves every `(formulation, N)` cell and measures far-field errors.
///
/// A failing cell is recorded in its row and the study continues; only a
/// failing reference solve aborts.
pub fn run_convergence(config: &StudyConfig) -> Result<StudyReport, Error> {
    config.validate()?;
    let problem = config.problem()?;
    let method = config.method()?;
    let forms = config.formulations()?;
    let angles = directions(config.study.directions);
    let (reference, ref_name, ref_n) = match config.reference()? {
        Reference::Formulation(f, n) => {
            let (ff, _) = far_field_cell(&problem, f, n, method, &angles)?;
            (Some(ff), f.name().to_string(), Some(n))
        }
        Reference::SelfAtDouble => (None, "self".to_string(), None),
    };
    let per_n: Vec<Vec<Cell>> = config
        .study
        .ladder
        .par_iter()
        .map(|&half| {
            let asm = Assembler::new(&problem, half);
            forms.iter().map(|&f| run_cell(&problem, &asm, f, half, method, &angles, reference.as_ref())).collect()
        })
        .collect();
    let mut rows = Vec::new();
    let mut patterns = Vec::new();
    for (fi, f) in forms.iter().enumerate() {
        for (ni, &half) in config.study.ladder.iter().enumerate() {
            let cell = &per_n[ni][fi];
            rows.push(cell.row.clone());
            if let Some(p) = &cell.pattern {
                patterns.push((f.name().to_string(), half, p.clone()));
            }
        }
    }
    Ok(StudyReport {
        curve: problem.curve.name().to_string(),
        k_plus: problem.k_plus,
        k_minus: problem.k_minus,
        nu: problem.nu,
        reference: ref_name,
        reference_n: ref_n,
        rows,
        patterns,
    })
}

impl StudyReport {
    pub fn error(&self, formulation: &str, n: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.formulation == formulation && r.n == n).and_then(|r| r.error_linf)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StudyRow> {
        self.rows.iter().filter(|r| r.failure.is_some())
    }

    /// Writes `study.csv`, `summary.json` and, if asked, one far-field CSV
    /// per cell.
    pub fn write(&self, dir: &Path, far_fields: bool) -> Result<(), Error> {
        fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("study.csv")).map_err(csv_error)?;
        w.write_record(["formulation", "N", "error_linf", "iters", "seconds"]).map_err(csv_error)?;
        for r in &self.rows {
            let err = r.error_linf.map_or_else(|| "NaN".to_string(), |e| format!("{e:.6e}"));
            w.write_record([r.formulation.clone(), r.n.to_string(), err, r.iters.to_string(), format!("{:.3}", r.seconds)])
                .map_err(csv_error)?;
        }
        w.flush()?;
        let json = BufWriter::new(File::create(dir.join("summary.json"))?);
        serde_json::to_writer_pretty(json, self).map_err(|e| Error::Io(e.into()))?;
        if far_fields {
            for (name, n, p) in &self.patterns {
                write_far_field(&dir.join(format!("farfield_{name}_{n}.csv")), p)?;
            }
        }
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `angle,re,im` rows.
pub fn write_far_field(path: &Path, pattern: &FarFieldPattern) -> Result<(), Error> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(["angle", "re", "im"]).map_err(csv_error)?;
    for (a, v) in pattern.angles.iter().zip(&pattern.values) {
        w.write_record([format!("{a:.17e}"), format!("{:.17e}", v.re), format!("{:.17e}", v.im)]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Outcome of a single solve, as written by the `solve` command.
#[derive(Clone, Debug, Serialize)]
pub struct SolveSummary {
    pub curve: String,
    pub formulation: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub k_plus: f64,
    pub k_minus: f64,
    pub nu: f64,
    pub iterations: usize,
    pub residual: f64,
    pub seconds: f64,
    pub far_field_max_abs: f64,
}

/// Solves one `(formulation, N)` cell from a study configuration.
pub fn solve_once(config: &StudyConfig, formulation: Formulation, half: usize) -> Result<(SolveSummary, FarFieldPattern), Error> {
    let problem = config.problem()?;
    let start = Instant::now();
    let asm = Assembler::new(&problem, half)?;
    let r = crate::formulations::solve(&asm.assemble(formulation)?, config.method()?)?;
    let ff = r.far_field(&directions(config.study.directions))?;
    let summary = SolveSummary {
        curve: problem.curve.name().to_string(),
        formulation: formulation.name().to_string(),
        n: half,
        k_plus: problem.k_plus,
        k_minus: problem.k_minus,
        nu: problem.nu,
        iterations: r.iterations,
        residual: r.residual,
        seconds: start.elapsed().as_secs_f64(),
        far_field_max_abs: ff.max_abs(),
    };
    Ok((summary, ff))
}

impl SolveSummary {
    /// Writes `solve.json` and `farfield.csv`.
    pub fn write(&self, dir: &Path, pattern: &FarFieldPattern) -> Result<(), Error> {
        fs::create_dir_all(dir)?;
        let json = BufWriter::new(File::create(dir.join("solve.json"))?);
        serde_json::to_writer_pretty(json, self).map_err(|e| Error::Io(e.into()))?;
        write_far_field(&dir.join("farfield.csv"), pattern)
    }
}
