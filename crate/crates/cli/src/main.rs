//! `calderon`: transmission-problem solves, convergence studies and
//! verification suites.
//!
//! Exit codes: 0 success, 1 configuration error, 2 solver failure,
//! 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use calderon::formulations::Formulation;
use calderon::harness::config::StudyConfig;
use calderon::harness::study::{run_convergence, solve_once};
use calderon::harness::verify::{run_verification, Suite, VerificationReport};
use calderon::{Complex64, Error};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(version, about = "Spectral Nyström solver for 2D Helmholtz transmission problems")]
struct Cli {
    /// TOML study configuration; built-in defaults when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the configuration
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one formulation at one resolution and write its far field
    Solve {
        /// Formulation (L1, L2, L2plain, L3, L4); default: first listed in the config
        #[arg(long)]
        formulation: Option<String>,
        /// Half the number of nodes; default: largest ladder entry
        #[arg(long = "n")]
        half: Option<usize>,
    },
    /// Run the convergence ladder against the reference solution
    Study,
    /// Run a verification suite: weights, circle, calderon, extinction, crossform, rates or all
    Verify { suite: String },
}

enum Failure {
    Config(String),
    Solver(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidArgument(_) => Failure::Config(e.to_string()),
            other => Failure::Solver(other.to_string()),
        }
    }
}

fn load(cli: &Cli) -> Result<StudyConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => StudyConfig::load(p)?,
        None => StudyConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output.dir = out.clone();
    }
    Ok(cfg)
}

fn solve(cli: &Cli, formulation: &Option<String>, half: Option<usize>) -> Result<(), Failure> {
    let cfg = load(cli)?;
    let name = formulation.clone().unwrap_or_else(|| cfg.study.formulations[0].clone());
    let kappa = cfg.study.kappa.map(|[re, im]| Complex64::new(re, im));
    let f = Formulation::parse(&name, cfg.physics.k_plus, kappa, cfg.study.rho).map_err(|e| Failure::Config(e.to_string()))?;
    let half = half.unwrap_or_else(|| *cfg.study.ladder.iter().max().expect("validated ladder"));
    let (summary, ff) = solve_once(&cfg, f, half)?;
    summary.write(&cfg.output.dir, &ff)?;
    println!(
        "{} N={} residual={:.2e} iterations={} seconds={:.2} -> {}",
        summary.formulation,
        summary.n,
        summary.residual,
        summary.iterations,
        summary.seconds,
        cfg.output.dir.display()
    );
    Ok(())
}

fn study(cli: &Cli) -> Result<(), Failure> {
    let cfg = load(cli)?;
    let report = run_convergence(&cfg)?;
    report.write(&cfg.output.dir, cfg.output.far_field)?;
    println!("formulation,N,error_linf,iters,seconds");
    for r in &report.rows {
        let err = r.error_linf.map_or_else(|| "NaN".into(), |e| format!("{e:.3e}"));
        println!("{},{},{err},{},{:.2}", r.formulation, r.n, r.iters, r.seconds);
    }
    let failed: Vec<_> = report.failures().map(|r| format!("{} N={}: {}", r.formulation, r.n, r.failure.as_deref().unwrap_or(""))).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Solver(failed.join("; ")))
    }
}

fn write_report(dir: &Path, report: &VerificationReport) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(Error::from)?;
    let file = std::fs::File::create(dir.join(format!("verify_{}.json", report.suite.name()))).map_err(Error::from)?;
    serde_json::to_writer_pretty(file, report).map_err(|e| Failure::Solver(e.to_string()))
}

fn verify(cli: &Cli, suite: &str) -> Result<(), Failure> {
    let suites = if suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let mut ok = true;
    for s in suites {
        let report = run_verification(s)?;
        println!("[{}]", s.name());
        for c in &report.checks {
            println!("  {c}");
        }
        if let Some(dir) = &cli.out {
            write_report(dir, &report)?;
        }
        ok &= report.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match &cli.command {
        Command::Solve { formulation, half } => solve(&cli, formulation, *half),
        Command::Study => study(&cli),
        Command::Verify { suite } => verify(&cli, suite),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("configuration error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(m)) => {
            eprintln!("solver failure: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
    }
}
