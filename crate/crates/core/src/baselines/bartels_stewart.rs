//! Bartels–Stewart with complex Schur forms.

use std::time::Instant;

use num_complex::Complex64;

use super::{check_system, direct_report};
use crate::dense::{complex_schur, is_real, max_abs};
use crate::error::{Error, Result};
use crate::report::SolveReport;
use crate::toeplitz::DenseMatrix;

/// Solves `AX + XB = C` directly.
///
/// `A = Q₁T₁Q₁*` with `T₁` lower triangular (from the Schur form of `A*`) and
/// `B = Q₂T₂Q₂*` with `T₂` upper triangular. The transformed equation
/// `T₁Y + YT₂ = Q₁*CQ₂` is solved column by column:
/// `(T₁ + (T₂)_kk·I) y_k = c_k − Σ_{j<k} y_j (T₂)_{jk}`.
pub fn bartels_stewart_solve(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix> {
    check_system(a, b, c)?;
    let (n, m) = c.shape();
    let (q1, t1_adj) = complex_schur(&a.adjoint())?;
    let t1 = t1_adj.adjoint();
    let (q2, t2) = complex_schur(b)?;

    let scale = max_abs(&t1).max(max_abs(&t2)).max(f64::MIN_POSITIVE);
    let floor = 1e3 * f64::EPSILON * scale;
    let f = q1.adjoint() * c * &q2;
    let mut y = DenseMatrix::zeros(n, m);
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..m {
        for i in 0..n {
            rhs[i] = f[(i, k)];
        }
        for j in 0..k {
            let t = t2[(j, k)];
            for i in 0..n {
                rhs[i] -= y[(i, j)] * t;
            }
        }
        let shift = t2[(k, k)];
        for i in 0..n {
            let d = t1[(i, i)] + shift;
            if d.norm() <= floor {
                return Err(Error::Singular(format!(
                    "A and -B share the eigenvalue {} (within {floor:.3e})",
                    t1[(i, i)]
                )));
            }
            let mut acc = rhs[i];
            for j in 0..i {
                acc -= t1[(i, j)] * y[(j, k)];
            }
            y[(i, k)] = acc / d;
        }
    }

    let mut x = q1 * y * q2.adjoint();
    if is_real(a) && is_real(b) && is_real(c) {
        crate::cscs::drop_rounding_imaginary(&mut x);
    }
    Ok(x)
}

/// [`bartels_stewart_solve`] wrapped as a one-step report.
pub fn bartels_stewart_report(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix) -> Result<SolveReport> {
    let start = Instant::now();
    let x = bartels_stewart_solve(a, b, c)?;
    Ok(direct_report(a, b, c, x, start))
}
