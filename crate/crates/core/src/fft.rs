//! Discrete Fourier transforms and the Fourier-basis conjugations used by the
//! CSCS half-steps.
//!
//! Conventions, fixed crate-wide:
//!
//! - `dft` is the unnormalized forward transform `y_j = Σ_k x_k e^{-2πi jk/n}`,
//!   `idft` its exact inverse (scaled by `1/n`).
//! - The unitary Fourier matrix is `F_{jk} = ω^{jk}/√n` with `ω = e^{2πi/n}`,
//!   so `F·x = √n·idft(x)` and `F*·x = dft(x)/√n`. A circulant matrix is
//!   `C = F* diag(λ) F` and a skew-circulant one is `S = F̂* diag(σ) F̂` with
//!   `F̂ = F·D`, `D = diag(e^{iπk/n})`.
//! - Basis conjugations are exactly unitary; no extra scale factors appear
//!   in the solver.
//!
//! Arbitrary lengths are supported (rustfft picks mixed-radix or Bluestein).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::toeplitz::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Which side of the matrix a basis conjugation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `Forward` maps into the spectral basis (`F·M` on the left, `M·F*` on the
/// right); `Adjoint` maps back (`F*·M`, `M·F`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjugation {
    Forward,
    Adjoint,
}

/// `D = diag(1, e^{iπ/n}, …, e^{i(n−1)π/n})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationVector {
    values: Vec<Complex64>,
}

impl ModulationVector {
    pub fn new(n: usize) -> Self {
        let values = (0..n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Entrywise `x_k ← d_k·x_k`, or `conj(d_k)·x_k` when `conjugate`.
    pub fn modulate(&self, x: &mut [Complex64], conjugate: bool) {
        for (v, d) in x.iter_mut().zip(&self.values) {
            *v *= if conjugate { d.conj() } else { *d };
        }
    }
}

/// A planned transform of fixed length and direction. Unnormalized in both
/// directions; callers apply scaling.
#[derive(Clone)]
pub struct TransformPlan {
    len: usize,
    direction: Direction,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TransformPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformPlan")
            .field("len", &self.len)
            .field("direction", &self.direction)
            .finish()
    }
}

impl TransformPlan {
    pub fn new(len: usize, direction: Direction) -> Self {
        let mut planner = FftPlanner::new();
        let dir = match direction {
            Direction::Forward => FftDirection::Forward,
            Direction::Inverse => FftDirection::Inverse,
        };
        Self {
            len,
            direction,
            fft: planner.plan_fft(len, dir),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()]
    }

    /// Raw (unnormalized) in-place transform of one vector.
    pub fn process(&self, x: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.len);
        let mut scratch = self.scratch();
        self.fft.process_with_scratch(x, &mut scratch);
    }

    /// Raw transform of every column; columns are contiguous, so this is a
    /// single batched call.
    fn columns_in_place(&self, m: &mut DenseMatrix) {
        if m.ncols() == 0 {
            return;
        }
        let mut scratch = self.scratch();
        self.fft.process_with_scratch(m.as_mut_slice(), &mut scratch);
    }

    /// Raw transform of every row.
    fn rows_in_place(&self, m: &mut DenseMatrix) {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return;
        }
        // Gather a band of rows into contiguous buffers, transform, scatter
        // back. Each column contributes one contiguous run per band.
        let mut scratch = self.scratch();
        let mut band = vec![Complex64::new(0.0, 0.0); ROW_BAND * cols];
        let data = m.as_mut_slice();
        for i0 in (0..rows).step_by(ROW_BAND) {
            let h = ROW_BAND.min(rows - i0);
            let buf = &mut band[..h * cols];
            for j in 0..cols {
                for (k, v) in data[j * rows + i0..j * rows + i0 + h].iter().enumerate() {
                    buf[k * cols + j] = *v;
                }
            }
            self.fft.process_with_scratch(buf, &mut scratch);
            for j in 0..cols {
                for (k, v) in data[j * rows + i0..j * rows + i0 + h].iter_mut().enumerate() {
                    *v = buf[k * cols + j];
                }
            }
        }
    }
}

const ROW_BAND: usize = 16;

/// Forward and inverse plans for one length, plus its modulation vector.
#[derive(Debug, Clone)]
pub struct FourierBasis {
    forward: TransformPlan,
    inverse: TransformPlan,
    modulation: ModulationVector,
}

impl FourierBasis {
    pub fn new(len: usize) -> Self {
        Self {
            forward: TransformPlan::new(len, Direction::Forward),
            inverse: TransformPlan::new(len, Direction::Inverse),
            modulation: ModulationVector::new(len),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn modulation(&self) -> &ModulationVector {
        &self.modulation
    }

    pub fn plan(&self, direction: Direction) -> &TransformPlan {
        match direction {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        }
    }

    /// `Σ_k x_k ω^{jk}` with `ω = e^{2πi/n}`: the unnormalized inverse DFT.
    /// This is exactly the eigenvalue formula for a circulant first column.
    pub fn synthesize(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = x.to_vec();
        self.inverse.process(&mut out);
        out
    }

    fn check(&self, found: usize, what: &str) -> Result<()> {
        if found != self.len() {
            return Err(Error::dims(
                format!("{what} of length {}", self.len()),
                format!("length {found}"),
            ));
        }
        Ok(())
    }

    pub(crate) fn circulant_in_place(&self, m: &mut DenseMatrix, side: Side, conj: Conjugation) {
        let scale = 1.0 / (self.len() as f64).sqrt();
        match (side, conj) {
            // F·M = idft_raw(M)/√n
            (Side::Left, Conjugation::Forward) => self.inverse.columns_in_place(m),
            // F*·M = dft_raw(M)/√n
            (Side::Left, Conjugation::Adjoint) => self.forward.columns_in_place(m),
            // M·F* : row-wise dft_raw/√n
            (Side::Right, Conjugation::Forward) => self.forward.rows_in_place(m),
            // M·F : row-wise idft_raw/√n
            (Side::Right, Conjugation::Adjoint) => self.inverse.rows_in_place(m),
        }
        m.scale_mut(scale);
    }

    pub(crate) fn skew_in_place(&self, m: &mut DenseMatrix, side: Side, conj: Conjugation) {
        let d = self.modulation.values();
        match (side, conj) {
            // F̂·M = F·(D·M)
            (Side::Left, Conjugation::Forward) => {
                scale_rows(m, d, false);
                self.circulant_in_place(m, side, conj);
            }
            // F̂*·M = D*·(F*·M)
            (Side::Left, Conjugation::Adjoint) => {
                self.circulant_in_place(m, side, conj);
                scale_rows(m, d, true);
            }
            // M·F̂* = (M·D*)·F*
            (Side::Right, Conjugation::Forward) => {
                scale_cols(m, d, true);
                self.circulant_in_place(m, side, conj);
            }
            // M·F̂ = (M·F)·D
            (Side::Right, Conjugation::Adjoint) => {
                self.circulant_in_place(m, side, conj);
                scale_cols(m, d, false);
            }
        }
    }
}

pub(crate) fn scale_rows(m: &mut DenseMatrix, d: &[Complex64], conjugate: bool) {
    for mut col in m.column_iter_mut() {
        for (v, s) in col.iter_mut().zip(d) {
            *v *= if conjugate { s.conj() } else { *s };
        }
    }
}

pub(crate) fn scale_cols(m: &mut DenseMatrix, d: &[Complex64], conjugate: bool) {
    for (mut col, s) in m.column_iter_mut().zip(d) {
        let s = if conjugate { s.conj() } else { *s };
        col.iter_mut().for_each(|v| *v *= s);
    }
}

/// Unnormalized forward DFT of each column.
pub fn dft_columns(m: &DenseMatrix, basis: &FourierBasis) -> Result<DenseMatrix> {
    basis.check(m.nrows(), "columns")?;
    let mut out = m.clone();
    basis.forward.columns_in_place(&mut out);
    Ok(out)
}

/// Inverse of [`dft_columns`].
pub fn idft_columns(m: &DenseMatrix, basis: &FourierBasis) -> Result<DenseMatrix> {
    basis.check(m.nrows(), "columns")?;
    let mut out = m.clone();
    basis.inverse.columns_in_place(&mut out);
    out.scale_mut(1.0 / basis.len() as f64);
    Ok(out)
}

/// Unnormalized forward DFT of each row.
pub fn dft_rows(m: &DenseMatrix, basis: &FourierBasis) -> Result<DenseMatrix> {
    basis.check(m.ncols(), "rows")?;
    let mut out = m.clone();
    basis.forward.rows_in_place(&mut out);
    Ok(out)
}

/// Inverse of [`dft_rows`].
pub fn idft_rows(m: &DenseMatrix, basis: &FourierBasis) -> Result<DenseMatrix> {
    basis.check(m.ncols(), "rows")?;
    let mut out = m.clone();
    basis.inverse.rows_in_place(&mut out);
    out.scale_mut(1.0 / basis.len() as f64);
    Ok(out)
}

/// `F·M`, `F*·M`, `M·F*` or `M·F` without forming `F`.
pub fn conj_circulant_basis(
    m: &DenseMatrix,
    basis: &FourierBasis,
    side: Side,
    conj: Conjugation,
) -> Result<DenseMatrix> {
    match side {
        Side::Left => basis.check(m.nrows(), "row dimension")?,
        Side::Right => basis.check(m.ncols(), "column dimension")?,
    }
    let mut out = m.clone();
    basis.circulant_in_place(&mut out, side, conj);
    Ok(out)
}

/// Same as [`conj_circulant_basis`] with `F̂ = F·D` in place of `F`.
pub fn conj_skew_basis(
    m: &DenseMatrix,
    basis: &FourierBasis,
    side: Side,
    conj: Conjugation,
) -> Result<DenseMatrix> {
    match side {
        Side::Left => basis.check(m.nrows(), "row dimension")?,
        Side::Right => basis.check(m.ncols(), "column dimension")?,
    }
    let mut out = m.clone();
    basis.skew_in_place(&mut out, side, conj);
    Ok(out)
}

/// Dense unitary Fourier matrix `F_{jk} = ω^{jk}/√n`. Test and oracle use only.
pub fn dense_fourier(n: usize) -> DenseMatrix {
    let s = 1.0 / (n as f64).sqrt();
    DenseMatrix::from_fn(n, n, |j, k| {
        let phase = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
        Complex64::from_polar(s, phase)
    })
}

/// Dense `F̂ = F·D`. Test and oracle use only.
pub fn dense_skew_fourier(n: usize) -> DenseMatrix {
    let d = ModulationVector::new(n);
    let mut f = dense_fourier(n);
    scale_cols(&mut f, d.values(), false);
    f
}
