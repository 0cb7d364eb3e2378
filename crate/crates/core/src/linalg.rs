//! Dense complex matrices, LU with partial pivoting and restart-free GMRES.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::Error;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Builds the matrix entrywise, rows in parallel.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64 + Sync) -> Self {
        let mut data = vec![ZERO; rows * cols];
        if cols > 0 {
            data.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = f(i, j);
                }
            });
        }
        CMatrix { rows, cols, data }
    }

    /// The circulant matrix `M(i, j) = c((i − j) mod n)`.
    pub fn circulant(column: &[Complex64]) -> Self {
        let n = column.len();
        Self::from_fn(n, n, |i, j| column[(i + n - j) % n])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    fn check_same_shape(&self, other: &Self, what: &str) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "{what}: shape {}×{} vs {}×{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: Complex64) -> Self {
        self.check_same_shape(other, "add_scaled");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Self) -> Self {
        self.check_same_shape(other, "hadamard");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self + s·I`.
    pub fn shift_diagonal(&self, s: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += s;
        }
        m
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec: dimension mismatch");
        if self.cols == 0 {
            return vec![ZERO; self.rows];
        }
        self.data.par_chunks(self.cols).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: dimension mismatch");
        let (n, m) = (other.cols, self.cols);
        let mut data = vec![ZERO; self.rows * n];
        if n > 0 {
            data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
                let row = &self.data[i * m..(i + 1) * m];
                for (k, a) in row.iter().enumerate() {
                    if *a == ZERO {
                        continue;
                    }
                    let b = &other.data[k * n..(k + 1) * n];
                    for (o, bv) in out.iter_mut().zip(b) {
                        *o += a * bv;
                    }
                }
            });
        }
        CMatrix { rows: self.rows, cols: n, data }
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized square blocks.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        for m in [a, b, c, d] {
            assert!(m.rows == n && m.cols == n, "block2 expects equal square blocks");
        }
        Self::from_fn(2 * n, 2 * n, |i, j| {
            let blk = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[(i % n, j % n)]
        })
    }

    /// Copy of the `size × size` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, size: usize) -> Self {
        Self::from_fn(size, size, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm_inf(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// LU factorization with partial pivoting, `PA = LU`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Self, Error> {
        if !a.is_square() {
            return Err(Error::InvalidArgument(format!("LU needs a square matrix, got {}×{}", a.rows, a.cols)));
        }
        if !a.is_finite() {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.norm_max().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= scale * n as f64 * f64::EPSILON * 1e-3 {
                return Err(Error::Singular { pivot: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
            }
            let pivot = lu[(k, k)];
            let (head, tail) = lu.data.split_at_mut((k + 1) * n);
            let prow = &head[k * n..(k + 1) * n];
            tail.par_chunks_mut(n).for_each(|row| {
                let f = row[k] / pivot;
                row[k] = f;
                if f != ZERO {
                    for j in k + 1..n {
                        row[j] -= f * prow[j];
                    }
                }
            });
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n, "LU solve: dimension mismatch");
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: Complex64 = row[..i].iter().zip(&x[..i]).map(|(a, b)| a * b).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: Complex64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(a, b)| a * b).sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }
}

pub fn lu_solve(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    if b.len() != a.rows {
        return Err(Error::InvalidArgument(format!("rhs has {} entries for a {}-row matrix", b.len(), a.rows)));
    }
    Ok(Lu::factor(a)?.solve(b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GmresResult {
    pub x: Vec<Complex64>,
    pub iterations: usize,
    /// Relative residual norms, starting with `1` for the zero initial guess.
    pub history: Vec<f64>,
}

/// GMRES without restart from the zero initial guess, Arnoldi with
/// modified Gram–Schmidt and Givens rotations on the Hessenberg matrix.
pub fn gmres(
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    b: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<GmresResult, Error> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("GMRES tolerance must be positive, got {tol}")));
    }
    let n = b.len();
    let beta = norm2(b);
    let mut history = vec![1.0];
    if beta == 0.0 {
        return Ok(GmresResult { x: vec![ZERO; n], iterations: 0, history });
    }
    let mut basis: Vec<Vec<Complex64>> = vec![b.iter().map(|v| v / beta).collect()];
    // columns of the rotated Hessenberg matrix
    let mut r: Vec<Vec<Complex64>> = Vec::new();
    let mut rotations: Vec<(f64, Complex64)> = Vec::new();
    let mut g = vec![Complex64::new(beta, 0.0)];
    let max_iter = max_iter.min(n.max(1));

    for j in 0..max_iter {
        let mut w = apply(&basis[j]);
        let mut h = Vec::with_capacity(j + 2);
        for v in &basis {
            let hij: Complex64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            for (wk, vk) in w.iter_mut().zip(v) {
                *wk -= hij * vk;
            }
            h.push(hij);
        }
        let hnext = norm2(&w);
        h.push(Complex64::new(hnext, 0.0));
        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (a, b) = (h[i], h[i + 1]);
            h[i] = c * a + s * b;
            h[i + 1] = -s.conj() * a + c * b;
        }
        let (a, b) = (h[j], h[j + 1]);
        let denom = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if denom == 0.0 {
            (1.0, ZERO)
        } else if a.norm() == 0.0 {
            (0.0, b.conj() / b.norm())
        } else {
            let c = a.norm() / denom;
            (c, (a / a.norm()) * b.conj() / denom)
        };
        h[j] = c * a + s * b;
        h[j + 1] = ZERO;
        rotations.push((c, s));
        let gj = g[j];
        g[j] = c * gj;
        g.push(-s.conj() * gj);
        h.truncate(j + 1);
        r.push(h);

        let rel = g[j + 1].norm() / beta;
        history.push(rel);
        let done = rel <= tol || hnext <= f64::EPSILON * beta;
        if done || j + 1 == max_iter {
            let m = j + 1;
            let mut y = vec![ZERO; m];
            for i in (0..m).rev() {
                let mut s = g[i];
                for k in i + 1..m {
                    s -= r[k][i] * y[k];
                }
                y[i] = s / r[i][i];
            }
            let mut x = vec![ZERO; n];
            for (yk, v) in y.iter().zip(&basis) {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += yk * vi;
                }
            }
            if rel <= tol {
                return Ok(GmresResult { x, iterations: m, history });
            }
            return Err(Error::NotConverged { history });
        }
        basis.push(w.iter().map(|v| v / hnext).collect());
    }
    Err(Error::NotConverged { history })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_solve() {
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5)];
        assert_eq!(lu_solve(&CMatrix::identity(2), &b).unwrap(), b);
    }

    #[test]
    fn permutation_solve() {
        let a = CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let x = lu_solve(&a, &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(x, vec![c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn singular_pivot_reported() {
        let a = CMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        match lu_solve(&a, &[c(1.0, 0.0), c(1.0, 0.0)]) {
            Err(Error::Singular { pivot }) => assert_eq!(pivot, 1),
            other => panic!("expected singular pivot, got {other:?}"),
        }
    }

    #[test]
    fn gmres_identity_one_iteration() {
        let b = vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0)];
        let r = gmres(|x| x.to_vec(), &b, 1e-12, 10).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(r.x.iter().zip(&b).all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn gmres_rank_one_perturbation_two_iterations() {
        let n = 20;
        let u: Vec<Complex64> = (0..n).map(|i| c((i as f64).cos(), 0.3)).collect();
        let v: Vec<Complex64> = (0..n).map(|i| c(0.1, (i as f64).sin() * 0.2)).collect();
        let apply = |x: &[Complex64]| -> Vec<Complex64> {
            let vx: Complex64 = v.iter().zip(x).map(|(a, b)| a * b).sum();
            x.iter().zip(&u).map(|(xi, ui)| xi + ui * vx).collect()
        };
        let b: Vec<Complex64> = (0..n).map(|i| c(1.0, i as f64)).collect();
        let r = gmres(apply, &b, 1e-12, 50).unwrap();
        assert!(r.iterations <= 2);
    }

    #[test]
    fn gmres_reports_non_convergence() {
        let a = CMatrix::from_fn(30, 30, |i, j| c(if i == j { (i + 1) as f64 } else { 0.0 }, 0.0));
        let b = vec![c(1.0, 0.0); 30];
        match gmres(|x| a.matvec(x), &b, 1e-14, 3) {
            Err(Error::NotConverged { history }) => assert_eq!(history.len(), 4),
            other => panic!("expected failure, got {other:?}"),
        }
        assert!(gmres(|x| x.to_vec(), &b, 0.0, 3).is_err());
    }

    #[test]
    fn block_assembly_and_transpose() {
        let a = CMatrix::from_fn(2, 2, |i, j| c((i * 2 + j) as f64, 0.0));
        let z = CMatrix::zeros(2, 2);
        let big = CMatrix::block2(&a, &z, &z, &a.transpose());
        assert_eq!(big[(1, 0)], c(2.0, 0.0));
        assert_eq!(big[(2, 3)], c(2.0, 0.0));
        assert_eq!(big.block(2, 2, 2), a.transpose());
    }
}
