//! Precomputed spectral data for one `(A, B, α, β)` and the operations built
//! on it: residual and the two diagonal half-steps.

use num_complex::Complex64;

use crate::cscs::shifts::{kron_spectra, KronSpectra};
use crate::dense::{kron_sum, max_abs};
use crate::error::{Error, Result};
use crate::fft::{Conjugation, Side};
use crate::toeplitz::{DenseMatrix, SpectralSplit, ToeplitzSpec};

const FLOOR_FACTOR: f64 = 1e3 * f64::EPSILON;

#[derive(Debug, Clone)]
pub struct CscsContext {
    pub split_a: SpectralSplit,
    pub split_b: SpectralSplit,
    pub alpha: f64,
    pub beta: f64,
    /// `(α + λ_A[i]) + (β + λ_B[j])`, n×m.
    pub denom_circ: DenseMatrix,
    /// `(α + σ_A[i]) + (β + σ_B[j])`, n×m.
    pub denom_skew: DenseMatrix,
}

impl CscsContext {
    pub fn new(a: &ToeplitzSpec, b: &ToeplitzSpec, alpha: f64, beta: f64) -> Result<Self> {
        Self::from_splits(SpectralSplit::new(a), SpectralSplit::new(b), alpha, beta)
    }

    pub fn from_splits(split_a: SpectralSplit, split_b: SpectralSplit, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::input(format!("shifts must be finite, got alpha={alpha}, beta={beta}")));
        }
        let denom_circ = denominators(&split_a.circ_eigs, &split_b.circ_eigs, alpha, beta, "circulant")?;
        let denom_skew = denominators(&split_a.skew_eigs, &split_b.skew_eigs, alpha, beta, "skew-circulant")?;
        Ok(Self { split_a, split_b, alpha, beta, denom_circ, denom_skew })
    }

    pub fn rows(&self) -> usize {
        self.split_a.order()
    }

    pub fn cols(&self) -> usize {
        self.split_b.order()
    }

    pub fn is_real(&self) -> bool {
        self.split_a.is_real() && self.split_b.is_real()
    }

    pub fn spectra(&self) -> KronSpectra {
        kron_spectra(
            &self.split_a.circ_eigs,
            &self.split_b.circ_eigs,
            &self.split_a.skew_eigs,
            &self.split_b.skew_eigs,
        )
    }

    fn check(&self, m: &DenseMatrix, what: &str) -> Result<()> {
        if m.shape() != (self.rows(), self.cols()) {
            return Err(Error::dims(
                format!("{what} of shape {}x{}", self.rows(), self.cols()),
                format!("{}x{}", m.nrows(), m.ncols()),
            ));
        }
        Ok(())
    }

    /// `R = C − AX − XB`, with `A` and `B` applied through their split factors.
    pub fn residual(&self, x: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix> {
        self.check(x, "X")?;
        self.check(c, "C")?;
        Ok(self.residual_unchecked(x, c))
    }

    pub(crate) fn residual_unchecked(&self, x: &DenseMatrix, c: &DenseMatrix) -> DenseMatrix {
        let mut r = c - self.split_a.apply_left(x);
        r -= self.split_b.apply_right(x);
        r
    }

    /// Solves `(αI + C_A)Z + Z(βI + C_B) = R`.
    pub fn half_step_circulant(&self, r: &DenseMatrix) -> Result<DenseMatrix> {
        self.check(r, "R")?;
        Ok(self.half_step_circulant_unchecked(r))
    }

    /// Solves `(αI + S_A)Z + Z(βI + S_B) = R`.
    pub fn half_step_skew(&self, r: &DenseMatrix) -> Result<DenseMatrix> {
        self.check(r, "R")?;
        Ok(self.half_step_skew_unchecked(r))
    }

    pub(crate) fn half_step_circulant_unchecked(&self, r: &DenseMatrix) -> DenseMatrix {
        let (fa, fb) = (self.split_a.basis(), self.split_b.basis());
        let mut z = r.clone();
        fa.circulant_in_place(&mut z, Side::Left, Conjugation::Forward);
        fb.circulant_in_place(&mut z, Side::Right, Conjugation::Forward);
        z.component_div_assign(&self.denom_circ);
        fa.circulant_in_place(&mut z, Side::Left, Conjugation::Adjoint);
        fb.circulant_in_place(&mut z, Side::Right, Conjugation::Adjoint);
        z
    }

    pub(crate) fn half_step_skew_unchecked(&self, r: &DenseMatrix) -> DenseMatrix {
        let (fa, fb) = (self.split_a.basis(), self.split_b.basis());
        let mut z = r.clone();
        fa.skew_in_place(&mut z, Side::Left, Conjugation::Forward);
        fb.skew_in_place(&mut z, Side::Right, Conjugation::Forward);
        z.component_div_assign(&self.denom_skew);
        fa.skew_in_place(&mut z, Side::Left, Conjugation::Adjoint);
        fb.skew_in_place(&mut z, Side::Right, Conjugation::Adjoint);
        z
    }
}

fn denominators(
    a: &[Complex64],
    b: &[Complex64],
    alpha: f64,
    beta: f64,
    which: &str,
) -> Result<DenseMatrix> {
    let mut out = DenseMatrix::zeros(a.len(), b.len());
    for (j, &mu) in b.iter().enumerate() {
        for (i, &lam) in a.iter().enumerate() {
            let left = alpha + lam;
            let right = beta + mu;
            let d = left + right;
            let floor = FLOOR_FACTOR * (1.0 + left.norm() + right.norm());
            if !(d.norm() >= floor) {
                return Err(Error::Breakdown(format!(
                    "{which} shifted equation is singular at ({i},{j}): |denominator| = {:.3e} below floor {floor:.3e}",
                    d.norm()
                )));
            }
            out[(i, j)] = d;
        }
    }
    Ok(out)
}

/// Largest `mn` accepted by [`iteration_matrix_dense`].
pub const DENSE_ITERATION_LIMIT: usize = 400;

/// `M_γ = (γI + S̃)⁻¹(γI − C̃)(γI + C̃)⁻¹(γI − S̃)`, formed densely from the
/// Kronecker sums `C̃ = I⊗C_A + C_Bᵀ⊗I`, `S̃ = I⊗S_A + S_Bᵀ⊗I`.
pub fn iteration_matrix_dense(a: &ToeplitzSpec, b: &ToeplitzSpec, gamma: f64) -> Result<DenseMatrix> {
    let size = a.order() * b.order();
    if size > DENSE_ITERATION_LIMIT {
        return Err(Error::input(format!(
            "dense iteration matrix limited to mn <= {DENSE_ITERATION_LIMIT}, got {size}"
        )));
    }
    let (ca, sa) = a.split();
    let (cb, sb) = b.split();
    let ct = kron_sum(&ca.to_dense(), &cb.to_dense());
    let st = kron_sum(&sa.to_dense(), &sb.to_dense());
    iteration_matrix_from_parts(&ct, &st, gamma)
}

pub(crate) fn iteration_matrix_from_parts(ct: &DenseMatrix, st: &DenseMatrix, gamma: f64) -> Result<DenseMatrix> {
    let size = ct.nrows();
    let g = DenseMatrix::identity(size, size) * Complex64::new(gamma, 0.0);
    let inv = |m: DenseMatrix, what: &str| -> Result<DenseMatrix> {
        let scale = max_abs(&m);
        let lu = m.lu();
        let singular = (0..size).any(|i| lu.u()[(i, i)].norm() <= FLOOR_FACTOR * scale);
        if singular {
            return Err(Error::Breakdown(format!("gamma*I + {what} is singular")));
        }
        lu.try_inverse().ok_or_else(|| Error::Breakdown(format!("gamma*I + {what} is singular")))
    };
    let plus_s = inv(&g + st, "S~")?;
    let plus_c = inv(&g + ct, "C~")?;
    Ok(plus_s * (&g - ct) * plus_c * (&g - st))
}
