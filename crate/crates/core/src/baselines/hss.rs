//! Hermitian/skew-Hermitian splitting iteration.

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use super::{check_system, Iteration};
use crate::error::{Error, Result};
use crate::report::{SolveReport, SolveStatus};
use crate::toeplitz::DenseMatrix;

/// `K = H + S` with `H = (K + K*)/2 = Q_h diag(d_h) Q_h*` and
/// `S = (K − K*)/2 = Q_s diag(d_s) Q_s*` (`d_s` purely imaginary).
#[derive(Debug, Clone)]
pub struct HermitianSplit {
    pub hermitian: DenseMatrix,
    pub skew: DenseMatrix,
    pub q_hermitian: DenseMatrix,
    pub d_hermitian: Vec<Complex64>,
    pub q_skew: DenseMatrix,
    pub d_skew: Vec<Complex64>,
}

impl HermitianSplit {
    pub fn new(k: &DenseMatrix) -> Self {
        let adj = k.adjoint();
        let half = Complex64::new(0.5, 0.0);
        let mut hermitian = (k + &adj) * half;
        let skew = (k - &adj) * half;
        make_hermitian(&mut hermitian);

        let eh = SymmetricEigen::new(hermitian.clone());
        // i·S is Hermitian with real spectrum e, so S = Q diag(−i·e) Q*
        let mut is = &skew * Complex64::i();
        make_hermitian(&mut is);
        let es = SymmetricEigen::new(is);

        Self {
            d_hermitian: eh.eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            q_hermitian: eh.eigenvectors,
            d_skew: es.eigenvalues.iter().map(|&v| Complex64::new(0.0, -v)).collect(),
            q_skew: es.eigenvectors,
            hermitian,
            skew,
        }
    }
}

/// Makes `m` exactly Hermitian by mirroring its upper triangle.
fn make_hermitian(m: &mut DenseMatrix) {
    let n = m.nrows();
    for j in 0..n {
        m[(j, j)] = Complex64::new(m[(j, j)].re, 0.0);
        for i in (j + 1)..n {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
}

#[derive(Debug, Clone)]
pub struct HssOptions {
    pub alpha: f64,
    pub beta: f64,
    pub tol: f64,
    pub maxit: usize,
    pub x0: Option<DenseMatrix>,
}

impl HssOptions {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta, tol: crate::cscs::DEFAULT_TOL, maxit: crate::cscs::DEFAULT_MAXIT, x0: None }
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

/// Diagonal Sylvester solve in a pair of unitary bases.
struct DiagonalStep {
    q_left: DenseMatrix,
    q_right: DenseMatrix,
    denom: DenseMatrix,
}

impl DiagonalStep {
    fn new(q_left: DenseMatrix, dl: &[Complex64], alpha: f64, q_right: DenseMatrix, dr: &[Complex64], beta: f64, what: &str) -> Result<Self> {
        let mut denom = DenseMatrix::zeros(dl.len(), dr.len());
        for (j, &mu) in dr.iter().enumerate() {
            for (i, &lam) in dl.iter().enumerate() {
                let (l, r) = (alpha + lam, beta + mu);
                let d = l + r;
                if !(d.norm() >= 1e3 * f64::EPSILON * (1.0 + l.norm() + r.norm())) {
                    return Err(Error::Breakdown(format!("{what} shifted equation is singular at ({i},{j})")));
                }
                denom[(i, j)] = d;
            }
        }
        Ok(Self { q_left, q_right, denom })
    }

    fn solve(&self, r: &DenseMatrix) -> DenseMatrix {
        let mut t = self.q_left.adjoint() * r * &self.q_right;
        t.component_div_assign(&self.denom);
        &self.q_left * t * self.q_right.adjoint()
    }
}

pub fn hss_solve(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix, opts: &HssOptions) -> Result<SolveReport> {
    check_system(a, b, c)?;
    if !(opts.alpha > 0.0 && opts.beta > 0.0) {
        return Err(Error::input(format!("HSS shifts must be positive, got alpha={}, beta={}", opts.alpha, opts.beta)));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::input(format!("tol must be positive, got {}", opts.tol)));
    }
    let sa = HermitianSplit::new(a);
    let sb = HermitianSplit::new(b);
    let herm = DiagonalStep::new(sa.q_hermitian, &sa.d_hermitian, opts.alpha, sb.q_hermitian, &sb.d_hermitian, opts.beta, "Hermitian")?;
    let skew = DiagonalStep::new(sa.q_skew, &sa.d_skew, opts.alpha, sb.q_skew, &sb.d_skew, opts.beta, "skew-Hermitian")?;

    let mut it = Iteration::new(a, b, c, opts.x0.as_ref())?;
    let mut status = if it.last() <= opts.tol { SolveStatus::Converged } else { SolveStatus::MaxIterations };
    while status != SolveStatus::Converged && it.history.len() - 1 < opts.maxit {
        let z = herm.solve(&it.r);
        it.update(&z);
        let z = skew.solve(&it.r);
        it.update(&z);
        let res = it.relative();
        it.history.push(res);
        if !res.is_finite() {
            status = SolveStatus::Breakdown;
            break;
        }
        if res <= opts.tol {
            status = SolveStatus::Converged;
        }
    }
    Ok(it.finish(status, Some((opts.alpha, opts.beta))))
}
