//! Block symmetric SOR: a forward block-SOR sweep over the columns of the
//! correction followed by a backward sweep over its rows.

use num_complex::Complex64;

use super::{check_system, Iteration};
use crate::error::{Error, Result};
use crate::report::{SolveReport, SolveStatus};
use crate::toeplitz::DenseMatrix;

/// Relative residual above which the iteration is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e8;

/// `K = diag(d) + L + U` with `L` strictly lower and `U` strictly upper.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularSplit {
    pub diagonal: Vec<Complex64>,
    pub lower: DenseMatrix,
    pub upper: DenseMatrix,
}

impl TriangularSplit {
    pub fn new(k: &DenseMatrix) -> Self {
        let n = k.nrows();
        let zero = Complex64::new(0.0, 0.0);
        Self {
            diagonal: (0..n).map(|i| k[(i, i)]).collect(),
            lower: DenseMatrix::from_fn(n, n, |i, j| if i > j { k[(i, j)] } else { zero }),
            upper: DenseMatrix::from_fn(n, n, |i, j| if i < j { k[(i, j)] } else { zero }),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = &self.lower + &self.upper;
        for (i, &d) in self.diagonal.iter().enumerate() {
            out[(i, i)] = d;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct BssorOptions {
    pub omega: f64,
    pub tol: f64,
    pub maxit: usize,
    pub x0: Option<DenseMatrix>,
}

impl BssorOptions {
    pub fn new(omega: f64) -> Self {
        Self { omega, tol: crate::cscs::DEFAULT_TOL, maxit: crate::cscs::DEFAULT_MAXIT, x0: None }
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn maxit(mut self, maxit: usize) -> Self {
        self.maxit = maxit;
        self
    }
}

pub(crate) struct Sweeps {
    a: TriangularSplit,
    b: TriangularSplit,
    inv_omega: f64,
}

impl Sweeps {
    pub(crate) fn new(a: &DenseMatrix, b: &DenseMatrix, omega: f64) -> Self {
        Self { a: TriangularSplit::new(a), b: TriangularSplit::new(b), inv_omega: 1.0 / omega }
    }

    /// Solves `(D₁/ω + L₁)Z + Z(D₂/ω + U₂) = R` one column at a time:
    /// `(D₁/ω + L₁ + (d₂)_k/ω·I) z_k = r_k − Σ_{j<k} z_j (U₂)_{jk}`.
    pub(crate) fn forward(&self, r: &DenseMatrix) -> DenseMatrix {
        let (n, m) = r.shape();
        let w = self.inv_omega;
        let mut z = DenseMatrix::zeros(n, m);
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..m {
            for i in 0..n {
                rhs[i] = r[(i, k)];
            }
            for j in 0..k {
                let u = self.b.upper[(j, k)];
                if u != Complex64::new(0.0, 0.0) {
                    for i in 0..n {
                        rhs[i] -= z[(i, j)] * u;
                    }
                }
            }
            let shift = self.b.diagonal[k] * w;
            // forward substitution with the lower-triangular D₁/ω + L₁ + shift
            for i in 0..n {
                let mut acc = rhs[i];
                for j in 0..i {
                    acc -= self.a.lower[(i, j)] * z[(j, k)];
                }
                z[(i, k)] = acc / (self.a.diagonal[i] * w + shift);
            }
        }
        z
    }

    /// Solves `(D₁/ω + U₁)Z + Z(D₂/ω + L₂) = R` one row at a time, bottom up:
    /// `z_k (D₂/ω + L₂ + (d₁)_k/ω·I) = r_k − Σ_{j>k} (U₁)_{kj} z_j`.
    pub(crate) fn backward(&self, r: &DenseMatrix) -> DenseMatrix {
        let (n, m) = r.shape();
        let w = self.inv_omega;
        let mut z = DenseMatrix::zeros(n, m);
        let mut rhs = vec![Complex64::new(0.0, 0.0); m];
        for k in (0..n).rev() {
            for l in 0..m {
                rhs[l] = r[(k, l)];
            }
            for j in (k + 1)..n {
                let u = self.a.upper[(k, j)];
                if u != Complex64::new(0.0, 0.0) {
                    for l in 0..m {
                        rhs[l] -= u * z[(j, l)];
                    }
                }
            }
            let shift = self.a.diagonal[k] * w;
            // row vector times lower-triangular matrix: back substitution on columns
            for l in (0..m).rev() {
                let mut acc = rhs[l];
                for p in (l + 1)..m {
                    acc -= z[(k, p)] * self.b.lower[(p, l)];
                }
                z[(k, l)] = acc / (self.b.diagonal[l] * w + shift);
            }
        }
        z
    }
}

pub fn bssor_solve(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix, opts: &BssorOptions) -> Result<SolveReport> {
    check_system(a, b, c)?;
    if !(opts.omega > 0.0 && opts.omega < 2.0) {
        return Err(Error::input(format!("omega must lie in (0, 2), got {}", opts.omega)));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::input(format!("tol must be positive, got {}", opts.tol)));
    }
    let sweeps = Sweeps::new(a, b, opts.omega);
    for (name, d) in [("A", &sweeps.a.diagonal), ("B", &sweeps.b.diagonal)] {
        if let Some(i) = d.iter().position(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(Error::input(format!("{name} has a zero diagonal entry at {i}")));
        }
    }
    let w = sweeps.inv_omega;
    let singular = sweeps.a.diagonal.iter().any(|&da| {
        sweeps.b.diagonal.iter().any(|&db| (da * w + db * w).norm() <= 1e3 * f64::EPSILON * (da.norm() + db.norm()) * w)
    });
    if singular {
        return Err(Error::Breakdown("a triangular sweep system has a vanishing diagonal".into()));
    }

    let mut it = Iteration::new(a, b, c, opts.x0.as_ref())?;
    let mut status = if it.last() <= opts.tol { SolveStatus::Converged } else { SolveStatus::MaxIterations };
    while status != SolveStatus::Converged && it.history.len() - 1 < opts.maxit {
        let z = sweeps.forward(&it.r);
        it.update(&z);
        let z = sweeps.backward(&it.r);
        it.update(&z);
        let res = it.relative();
        it.history.push(res);
        if !(res <= DIVERGENCE_LIMIT) {
            status = SolveStatus::Breakdown;
            break;
        }
        if res <= opts.tol {
            status = SolveStatus::Converged;
        }
    }
    Ok(it.finish(status, None))
}
