//! Small dense-matrix helpers shared by the baselines and the verification code.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::toeplitz::DenseMatrix;

const SCHUR_EPS: f64 = f64::EPSILON;

/// Largest entry modulus.
pub fn max_abs(m: &DenseMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &DenseMatrix) -> f64 {
    m.norm()
}

/// `‖a − b‖_F / ‖b‖_F`, falling back to the absolute difference when `b` is zero.
pub fn relative_error(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let diff = (a - b).norm();
    let scale = b.norm();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn to_complex(m: &DMatrix<f64>) -> DenseMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

pub fn is_real(m: &DenseMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// `C − AX − XB` computed with dense products.
pub fn sylvester_residual(
    a: &DenseMatrix,
    b: &DenseMatrix,
    x: &DenseMatrix,
    c: &DenseMatrix,
) -> DenseMatrix {
    c - a * x - x * b
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DenseMatrix::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let s = a[(i, j)];
            if s == Complex64::new(0.0, 0.0) {
                continue;
            }
            out.view_mut((i * br, j * bc), (br, bc))
                .zip_apply(b, |o, v| *o = s * v);
        }
    }
    out
}

/// Kronecker sum `I_m ⊗ a + bᵀ ⊗ I_n`, the matrix of `X ↦ aX + Xb` acting on
/// column-stacked `vec(X)`.
pub fn kron_sum(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = a.nrows();
    let m = b.nrows();
    kron(&DenseMatrix::identity(m, m), a) + kron(&b.transpose(), &DenseMatrix::identity(n, n))
}

/// Column-stacking `vec(X)`.
pub fn vec_columns(x: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_column_slice(x.len(), 1, x.as_slice())
}

pub fn unvec_columns(v: &DenseMatrix, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// Complex Schur form `M = Q T Q*` with `T` upper triangular.
///
/// Subdiagonal remnants below `1e-13·‖M‖_max` are flushed to zero; anything
/// larger is reported as non-convergence.
pub fn complex_schur(m: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::dims("square matrix", format!("{}x{}", n, m.ncols())));
    }
    let scale = max_abs(m);
    let schur = Schur::try_new(m.clone(), SCHUR_EPS, 1000 * n.max(10))
        .ok_or_else(|| Error::NoConvergence(format!("complex Schur of order {n}")))?;
    let (q, mut t) = schur.unpack();
    let floor = 1e-13 * scale.max(f64::MIN_POSITIVE);
    for j in 0..n {
        for i in (j + 1)..n {
            if t[(i, j)].norm() > floor {
                return Err(Error::NoConvergence(format!(
                    "Schur form has subdiagonal entry {:.3e} at ({i},{j})",
                    t[(i, j)].norm()
                )));
            }
            t[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok((q, t))
}

/// All eigenvalues of a square complex matrix.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    let (_, t) = complex_schur(m)?;
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

pub fn spectral_radius(m: &DenseMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.into_iter().fold(0.0, |acc, z| acc.max(z.norm())))
}
