//! Spectral Nyström discretization of the 2D Helmholtz Calderón calculus on
//! smooth closed curves, and four boundary integral formulations of the
//! acoustic transmission problem built on it.
//!
//! Densities are always sampled on the uniform grid `t_j = jπ/N`,
//! `j = 0, …, 2N−1`, and every discrete operator is a dense `2N × 2N`
//! complex matrix acting on those nodal vectors.

pub mod fields;
pub mod formulations;
pub mod fourier;
pub mod geometry;
pub mod harness;
pub mod kernels;
pub mod linalg;
pub mod operators;
pub mod specfun;

pub use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("matrix is singular to working precision at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("GMRES did not reach the tolerance in {} iterations (last relative residual {:.3e})", .history.len().saturating_sub(1), .history.last().copied().unwrap_or(f64::NAN))]
    NotConverged { history: Vec<f64> },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
