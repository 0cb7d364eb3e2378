//! Discrete boundary integral operators on the `2N`-point grid.
//!
//! Every operator is a dense matrix on nodal vectors, built as Hadamard
//! products of circulant weight matrices with sampled smooth kernels:
//!
//! | operator | log-weighted part | smooth part |
//! |----------|-------------------|-------------|
//! | `V`      | `W₁ ∘ A`          | `W₀ ∘ B`    |
//! | `R̃`      | `W₂ ∘ Ã`          | `W₀ ∘ B`    |
//! | `K`      | `W₁ ∘ (C·S)`      | `W₀ ∘ D`    |
//! | `K̃`      | `W₂ ∘ C`          | `W₀ ∘ D`    |
//! | `T`      | `W₁ ∘ E`          | `W₀ ∘ F`    |
//!
//! with `W_m(i, j) = w_m(i − j)` from [`WeightTable::circulant`]. The tilde
//! single layer is `Ṽ = Λ + R̃`, the hypersingular operator `H = DΛD + T`,
//! and the adjoint double layers are the transposes of the double layers.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::fourier::{dld_symbol, lambda_symbol, symbol_circulant, diff_symbol, Weight, WeightTable};
use crate::kernels::KernelContext;
use crate::linalg::CMatrix;
use crate::Error;

/// Smallest grid parameter accepted for kernel-based assembly.
pub const MIN_HALF: usize = 8;

/// Default refinement of the grid used to differentiate the Maue kernels.
pub const DEFAULT_OVERSAMPLE: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Plain,
    Tilde,
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorId {
    V,
    K,
    Kt,
    H,
    T,
    R,
    Lambda,
    D,
    DLambdaD,
}

impl OperatorId {
    pub fn name(self) -> &'static str {
        match self {
            OperatorId::V => "V",
            OperatorId::K => "K",
            OperatorId::Kt => "Kt",
            OperatorId::H => "H",
            OperatorId::T => "T",
            OperatorId::R => "R",
            OperatorId::Lambda => "Lambda",
            OperatorId::D => "D",
            OperatorId::DLambdaD => "DLambdaD",
        }
    }
}

/// A dense matrix tagged with the continuous operator it approximates.
#[derive(Clone, Debug)]
pub struct DiscreteOperator {
    pub matrix: CMatrix,
    pub family: Family,
    pub id: OperatorId,
    pub k: Complex64,
    pub half: usize,
}

impl DiscreteOperator {
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix.matvec(x)
    }

    /// Writes `magic, N, Re k, Im k, id` followed by the row-major entries,
    /// all little-endian.
    pub fn dump(&self, path: &Path) -> Result<(), Error> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        out.write_all(b"CALDMAT1")?;
        out.write_all(&(self.half as u64).to_le_bytes())?;
        out.write_all(&self.k.re.to_le_bytes())?;
        out.write_all(&self.k.im.to_le_bytes())?;
        let name = self.id.name().as_bytes();
        out.write_all(&(name.len() as u64).to_le_bytes())?;
        out.write_all(name)?;
        for v in self.matrix.as_slice() {
            out.write_all(&v.re.to_le_bytes())?;
            out.write_all(&v.im.to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }
}

fn spectral(half: usize, id: OperatorId, symbol: impl Fn(i64) -> Complex64) -> DiscreteOperator {
    DiscreteOperator {
        matrix: CMatrix::circulant(&symbol_circulant(half, symbol)),
        family: Family::Spectral,
        id,
        k: Complex64::default(),
        half,
    }
}

pub fn lambda(half: usize) -> DiscreteOperator {
    spectral(half, OperatorId::Lambda, |n| Complex64::new(lambda_symbol(n), 0.0))
}

pub fn diff(half: usize) -> DiscreteOperator {
    spectral(half, OperatorId::D, diff_symbol)
}

pub fn dld(half: usize) -> DiscreteOperator {
    spectral(half, OperatorId::DLambdaD, |n| Complex64::new(dld_symbol(n), 0.0))
}

/// The circulant quadrature matrix of one weight.
pub fn weight_matrix(weight: Weight, half: usize) -> Result<CMatrix, Error> {
    let col: Vec<Complex64> =
        WeightTable::new(weight, half)?.circulant().into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    Ok(CMatrix::circulant(&col))
}

/// Kernel samples and weight matrices for one curve, wavenumber and `N`,
/// from which every operator of the family is assembled.
pub struct OperatorSet {
    ctx: KernelContext,
    half: usize,
    w0: f64,
    w1: CMatrix,
    w2: CMatrix,
    single: [CMatrix; 3],
    double: OnceLock<[CMatrix; 2]>,
    log_sin: OnceLock<CMatrix>,
    maue: OnceLock<(CMatrix, CMatrix)>,
    oversample: usize,
}

impl OperatorSet {
    pub fn new(ctx: KernelContext, half: usize) -> Result<Self, Error> {
        Self::with_oversample(ctx, half, DEFAULT_OVERSAMPLE)
    }

    pub fn with_oversample(ctx: KernelContext, half: usize, oversample: usize) -> Result<Self, Error> {
        if half < MIN_HALF {
            return Err(Error::InvalidArgument(format!("operator assembly needs N ≥ {MIN_HALF}, got {half}")));
        }
        if oversample == 0 {
            return Err(Error::InvalidArgument("oversampling factor must be at least 1".into()));
        }
        let single = ctx.single_layer_matrices(half);
        Ok(OperatorSet {
            half,
            w0: PI / half as f64,
            w1: weight_matrix(Weight::Log, half)?,
            w2: weight_matrix(Weight::SinSqLog, half)?,
            single,
            double: OnceLock::new(),
            log_sin: OnceLock::new(),
            maue: OnceLock::new(),
            oversample,
            ctx,
        })
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn context(&self) -> &KernelContext {
        &self.ctx
    }

    fn wrap(&self, matrix: CMatrix, family: Family, id: OperatorId) -> DiscreteOperator {
        DiscreteOperator { matrix, family, id, k: self.ctx.k(), half: self.half }
    }

    fn weighted(&self, log_part: &CMatrix, log_weight: &CMatrix, smooth: &CMatrix) -> CMatrix {
        log_weight.hadamard(log_part).add_scaled(smooth, Complex64::new(self.w0, 0.0))
    }

    fn double(&self) -> &[CMatrix; 2] {
        self.double.get_or_init(|| self.ctx.double_layer_matrices(self.half))
    }

    fn sin_sq(&self) -> &CMatrix {
        self.log_sin.get_or_init(|| {
            let h = PI / self.half as f64;
            CMatrix::from_fn(2 * self.half, 2 * self.half, |i, j| {
                Complex64::new((0.5 * (i as f64 - j as f64) * h).sin().powi(2), 0.0)
            })
        })
    }

    fn maue(&self) -> &(CMatrix, CMatrix) {
        self.maue.get_or_init(|| self.ctx.maue_matrices(self.half, self.oversample))
    }

    pub fn v_plain(&self) -> DiscreteOperator {
        let [a, b, _] = &self.single;
        self.wrap(self.weighted(a, &self.w1, b), Family::Plain, OperatorId::V)
    }

    /// `R̃ = W₂ ∘ Ã + W₀ ∘ B`.
    pub fn r_tilde(&self) -> DiscreteOperator {
        let [_, b, at] = &self.single;
        self.wrap(self.weighted(at, &self.w2, b), Family::Tilde, OperatorId::R)
    }

    /// `Ṽ = Λ + R̃`.
    pub fn v_tilde(&self) -> DiscreteOperator {
        let m = self.r_tilde().matrix.add_scaled(&lambda(self.half).matrix, Complex64::new(1.0, 0.0));
        self.wrap(m, Family::Tilde, OperatorId::V)
    }

    pub fn k_plain(&self) -> DiscreteOperator {
        let [c, d] = self.double();
        self.wrap(self.weighted(&c.hadamard(self.sin_sq()), &self.w1, d), Family::Plain, OperatorId::K)
    }

    pub fn kt_plain(&self) -> DiscreteOperator {
        self.wrap(self.k_plain().matrix.transpose(), Family::Plain, OperatorId::Kt)
    }

    pub fn k_tilde(&self) -> DiscreteOperator {
        let [c, d] = self.double();
        self.wrap(self.weighted(c, &self.w2, d), Family::Tilde, OperatorId::K)
    }

    pub fn kt_tilde(&self) -> DiscreteOperator {
        self.wrap(self.k_tilde().matrix.transpose(), Family::Tilde, OperatorId::Kt)
    }

    /// `T = W₁ ∘ E + W₀ ∘ F`.
    pub fn t(&self) -> DiscreteOperator {
        let (e, f) = self.maue();
        self.wrap(self.weighted(e, &self.w1, f), Family::Plain, OperatorId::T)
    }

    /// `H = DΛD + T`.
    pub fn h(&self) -> DiscreteOperator {
        let m = self.t().matrix.add_scaled(&dld(self.half).matrix, Complex64::new(1.0, 0.0));
        self.wrap(m, Family::Plain, OperatorId::H)
    }
}

pub fn assemble_v_plain(ctx: &KernelContext, half: usize) -> Result<DiscreteOperator, Error> {
    Ok(OperatorSet::new(ctx.clone(), half)?.v_plain())
}

pub fn assemble_v_tilde(ctx: &KernelContext, half: usize) -> Result<DiscreteOperator, Error> {
    Ok(OperatorSet::new(ctx.clone(), half)?.v_tilde())
}

pub fn assemble_k_plain(ctx: &KernelContext, half: usize) -> Result<DiscreteOperator, Error> {
    Ok(OperatorSet::new(ctx.clone(), half)?.k_plain())
}

pub fn assemble_kt_plain(ctx: &KernelContext, half: usize) -> Result<DiscreteOperator, Error> {
    Ok(OperatorSet::new(ctx.clone(), half)?.kt_plain())
}

pub fn assemble_k_tilde(ctx: &KernelContext, half: usize) -> Result<DiscreteOperator, Error> {
    Ok(OperatorSet::new(ctx.clone(), half)?.k_tilde())
}

pub fn assemble_kt_tilde(ctx: &KernelContext, half: usize) -> Result<DiscreteOperator, Error> {
    Ok(OperatorSet::new(ctx.clone(), half)?.kt_tilde())
}

pub fn assemble_t(ctx: &KernelContext, half: usize) -> Result<DiscreteOperator, Error> {
    Ok(OperatorSet::new(ctx.clone(), half)?.t())
}

pub fn assemble_h(ctx: &KernelContext, half: usize) -> Result<DiscreteOperator, Error> {
    Ok(OperatorSet::new(ctx.clone(), half)?.h())
}

/// Separation-of-variables eigenvalues of the operators on the unit circle,
/// for the mode `e_n`.
pub mod circle {
    use super::*;
    use crate::specfun::bessel_jy_orders;

    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct Eigenvalues {
        pub v: Complex64,
        pub k: Complex64,
        pub kt: Complex64,
        pub h: Complex64,
    }

    pub fn eigenvalues(n: i64, k: f64) -> Result<Eigenvalues, Error> {
        let m = n.unsigned_abs() as usize;
        let (j, y) = bessel_jy_orders(m + 1, k)?;
        let hank = |i: usize| Complex64::new(j[i], y[i]);
        // f'_m = f_{m−1} − (m/k) f_m, with f_{−1} = −f_1
        let prev = |v: &[f64]| if m == 0 { -v[1] } else { v[m - 1] };
        let jp = prev(&j) - m as f64 / k * j[m];
        let hp = Complex64::new(prev(&j), prev(&y)) - hank(m) * (m as f64 / k);
        let i_pi_2 = Complex64::new(0.0, 0.5 * PI);
        let kk = 0.5 + i_pi_2 * k * j[m] * hp;
        Ok(Eigenvalues { v: i_pi_2 * j[m] * hank(m), k: kk, kt: kk, h: i_pi_2 * k * k * jp * hp })
    }
}
