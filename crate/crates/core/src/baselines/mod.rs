//! Comparison solvers working on dense `A`, `B` and the dense Kronecker oracle.

mod bartels_stewart;
mod bssor;
mod hss;

pub use bartels_stewart::{bartels_stewart_report, bartels_stewart_solve};
pub use bssor::{bssor_solve, BssorOptions, TriangularSplit, DIVERGENCE_LIMIT};
pub use hss::{hss_solve, HermitianSplit, HssOptions};

use std::time::Instant;

use crate::dense::{is_real, kron_sum, max_abs, unvec_columns, vec_columns};
use crate::error::{Error, Result};
use crate::report::{SolveReport, SolveStatus};
use crate::toeplitz::DenseMatrix;

/// Largest `mn` accepted by [`kron_oracle_solve`].
pub const ORACLE_LIMIT: usize = 1024;

pub(crate) fn check_square(m: &DenseMatrix, name: &str) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::dims(format!("nonempty square {name}"), format!("{}x{}", m.nrows(), m.ncols())));
    }
    Ok(())
}

pub(crate) fn check_system(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix) -> Result<()> {
    check_square(a, "A")?;
    check_square(b, "B")?;
    if c.shape() != (a.nrows(), b.nrows()) {
        return Err(Error::dims(
            format!("C of shape {}x{}", a.nrows(), b.nrows()),
            format!("{}x{}", c.nrows(), c.ncols()),
        ));
    }
    Ok(())
}

/// Solves `(I_m ⊗ A + Bᵀ ⊗ I_n) vec(X) = vec(C)` by dense LU.
pub fn kron_oracle_solve(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix> {
    check_system(a, b, c)?;
    let (n, m) = c.shape();
    if n * m > ORACLE_LIMIT {
        return Err(Error::input(format!("oracle limited to mn <= {ORACLE_LIMIT}, got {}", n * m)));
    }
    let k = kron_sum(a, b);
    let scale = max_abs(&k);
    let lu = k.lu();
    let floor = 1e3 * f64::EPSILON * scale;
    if (0..n * m).any(|i| !(lu.u()[(i, i)].norm() > floor)) {
        return Err(Error::Singular("Kronecker-sum matrix has a vanishing pivot".into()));
    }
    let v = lu
        .solve(&vec_columns(c))
        .ok_or_else(|| Error::Singular("Kronecker-sum matrix is singular".into()))?;
    let mut x = unvec_columns(&v, n, m);
    if is_real(a) && is_real(b) && is_real(c) {
        crate::cscs::drop_rounding_imaginary(&mut x);
    }
    Ok(x)
}

/// [`kron_oracle_solve`] wrapped as a one-step report.
pub fn kron_oracle_report(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix) -> Result<SolveReport> {
    let start = Instant::now();
    let x = kron_oracle_solve(a, b, c)?;
    Ok(direct_report(a, b, c, x, start))
}

pub(crate) fn direct_report(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix, x: DenseMatrix, start: Instant) -> SolveReport {
    let elapsed = start.elapsed().as_secs_f64();
    let r = relative_residual(a, b, c, &x);
    SolveReport {
        x,
        iterations: 1,
        residual_history: vec![1.0, r],
        half_residual_history: Vec::new(),
        elapsed_seconds: elapsed,
        status: SolveStatus::Converged,
        shifts: None,
    }
}

pub(crate) fn relative_residual(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix, x: &DenseMatrix) -> f64 {
    let r = crate::dense::sylvester_residual(a, b, x, c).norm();
    let cn = c.norm();
    if cn == 0.0 {
        r
    } else {
        r / cn
    }
}

/// Shared driver state for the dense two-half-step iterations.
pub(crate) struct Iteration<'a> {
    a: &'a DenseMatrix,
    b: &'a DenseMatrix,
    c: &'a DenseMatrix,
    c_norm: f64,
    start: Instant,
    pub x: DenseMatrix,
    pub r: DenseMatrix,
    pub history: Vec<f64>,
}

impl<'a> Iteration<'a> {
    pub fn new(a: &'a DenseMatrix, b: &'a DenseMatrix, c: &'a DenseMatrix, x0: Option<&DenseMatrix>) -> Result<Self> {
        let x = match x0 {
            Some(x0) if x0.shape() != c.shape() => {
                return Err(Error::dims(
                    format!("X0 of shape {}x{}", c.nrows(), c.ncols()),
                    format!("{}x{}", x0.nrows(), x0.ncols()),
                ));
            }
            Some(x0) => x0.clone(),
            None => DenseMatrix::zeros(c.nrows(), c.ncols()),
        };
        let start = Instant::now();
        let c_norm = c.norm();
        let r = crate::dense::sylvester_residual(a, b, &x, c);
        let mut it = Self { a, b, c, c_norm, start, x, r, history: Vec::new() };
        let first = it.relative();
        it.history.push(first);
        Ok(it)
    }

    pub fn relative(&self) -> f64 {
        if self.c_norm == 0.0 {
            self.r.norm()
        } else {
            self.r.norm() / self.c_norm
        }
    }

    pub fn update(&mut self, z: &DenseMatrix) {
        self.x += z;
        self.r = crate::dense::sylvester_residual(self.a, self.b, &self.x, self.c);
    }

    pub fn last(&self) -> f64 {
        *self.history.last().expect("history starts nonempty")
    }

    pub fn finish(mut self, status: SolveStatus, shifts: Option<(f64, f64)>) -> SolveReport {
        if is_real(self.a) && is_real(self.b) && is_real(self.c) {
            crate::cscs::drop_rounding_imaginary(&mut self.x);
        }
        SolveReport {
            iterations: self.history.len() - 1,
            x: self.x,
            residual_history: self.history,
            half_residual_history: Vec::new(),
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
            status,
            shifts,
        }
    }
}
