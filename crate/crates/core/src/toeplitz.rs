//! Toeplitz, circulant and skew-circulant matrices stored by their defining
//! vectors, the circulant/skew-circulant splitting and closed-form spectra.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{Conjugation, FourierBasis, Side};

pub type DenseMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `T[j][k] = t_{j−k}`, stored as the first column `(t_0, …, t_{n−1})` and
/// the first row `(t_0, t_{−1}, …, t_{1−n})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec {
    first_col: Vec<Complex64>,
    first_row: Vec<Complex64>,
}

impl ToeplitzSpec {
    pub fn new(first_col: Vec<Complex64>, first_row: Vec<Complex64>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(Error::input("Toeplitz order must be positive"));
        }
        if first_col.len() != first_row.len() {
            return Err(Error::dims(
                format!("first_row of length {}", first_col.len()),
                format!("length {}", first_row.len()),
            ));
        }
        if first_col[0] != first_row[0] {
            return Err(Error::input(format!(
                "first_col[0] = {} differs from first_row[0] = {}",
                first_col[0], first_row[0]
            )));
        }
        Ok(Self { first_col, first_row })
    }

    pub fn from_real(first_col: &[f64], first_row: &[f64]) -> Result<Self> {
        let lift = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(lift(first_col), lift(first_row))
    }

    /// Banded Toeplitz matrix from `(offset, value)` pairs, where offset `k`
    /// places `value` on `t_k` (negative offsets lie above the diagonal in the
    /// `T[j][k] = t_{j−k}` convention, i.e. `k > 0` is a subdiagonal).
    pub fn from_diagonals(n: usize, diagonals: &[(isize, Complex64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("Toeplitz order must be positive"));
        }
        let mut col = vec![ZERO; n];
        let mut row = vec![ZERO; n];
        for &(k, v) in diagonals {
            if k.unsigned_abs() >= n {
                continue;
            }
            if k >= 0 {
                col[k as usize] = v;
            }
            if k <= 0 {
                row[k.unsigned_abs()] = v;
            }
        }
        Self::new(col, row)
    }

    /// `tridiag(sub, diag, sup)`.
    pub fn tridiagonal(n: usize, sub: f64, diag: f64, sup: f64) -> Result<Self> {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self::from_diagonals(n, &[(1, c(sub)), (0, c(diag)), (-1, c(sup))])
    }

    pub fn order(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_col(&self) -> &[Complex64] {
        &self.first_col
    }

    pub fn first_row(&self) -> &[Complex64] {
        &self.first_row
    }

    /// `t_k` for `1 − n ≤ k ≤ n − 1`.
    pub fn diagonal(&self, k: isize) -> Complex64 {
        if k >= 0 {
            self.first_col[k as usize]
        } else {
            self.first_row[k.unsigned_abs()]
        }
    }

    pub fn is_real(&self) -> bool {
        self.first_col.iter().chain(&self.first_row).all(|z| z.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.first_col
            .iter()
            .chain(&self.first_row)
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.order();
        DenseMatrix::from_fn(n, n, |j, k| self.diagonal(j as isize - k as isize))
    }

    /// Circulant/skew-circulant splitting `T = C + S`.
    pub fn split(&self) -> (CirculantSpec, SkewCirculantSpec) {
        cscs_split(self)
    }
}

/// Circulant matrix `C[j][k] = c_{(j−k) mod n}` given by its first column.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    first_col: Vec<Complex64>,
}

impl CirculantSpec {
    pub fn new(first_col: Vec<Complex64>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(Error::input("circulant order must be positive"));
        }
        Ok(Self { first_col })
    }

    pub fn order(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_col(&self) -> &[Complex64] {
        &self.first_col
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        let n = self.order();
        self.first_col[(j + n - k) % n]
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.order();
        DenseMatrix::from_fn(n, n, |j, k| self.entry(j, k))
    }

    pub fn as_toeplitz(&self) -> ToeplitzSpec {
        let n = self.order();
        let row = (0..n).map(|k| self.entry(0, k)).collect();
        ToeplitzSpec { first_col: self.first_col.clone(), first_row: row }
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        circulant_eigenvalues(self)
    }
}

/// Skew-circulant matrix: `S[j][k] = s_{j−k}` with `s_{−l} = −s_{n−l}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewCirculantSpec {
    first_col: Vec<Complex64>,
}

impl SkewCirculantSpec {
    pub fn new(first_col: Vec<Complex64>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(Error::input("skew-circulant order must be positive"));
        }
        Ok(Self { first_col })
    }

    pub fn order(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_col(&self) -> &[Complex64] {
        &self.first_col
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        let n = self.order();
        if j >= k {
            self.first_col[j - k]
        } else {
            -self.first_col[n + j - k]
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.order();
        DenseMatrix::from_fn(n, n, |j, k| self.entry(j, k))
    }

    pub fn as_toeplitz(&self) -> ToeplitzSpec {
        let n = self.order();
        let row = (0..n).map(|k| self.entry(0, k)).collect();
        ToeplitzSpec { first_col: self.first_col.clone(), first_row: row }
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        skew_circulant_eigenvalues(self)
    }
}

/// Splits a Toeplitz matrix into its circulant and skew-circulant parts.
///
/// Both parts carry `t_0/2` on the diagonal; for `l ≥ 1`
/// `c_l = (t_l + t_{l−n})/2` and `s_l = (t_l − t_{l−n})/2`.
pub fn cscs_split(t: &ToeplitzSpec) -> (CirculantSpec, SkewCirculantSpec) {
    let n = t.order();
    let mut c = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    c.push(t.first_col[0] * 0.5);
    s.push(t.first_col[0] * 0.5);
    for l in 1..n {
        // t_{l−n} lives at first_row[n − l]
        let low = t.first_col[l];
        let wrap = t.first_row[n - l];
        c.push((low + wrap) * 0.5);
        s.push((low - wrap) * 0.5);
    }
    (CirculantSpec { first_col: c }, SkewCirculantSpec { first_col: s })
}

/// `λ_j = Σ_k c_k ω^{jk}`, `ω = e^{2πi/n}`, so that `C = F*·diag(λ)·F`.
pub fn circulant_eigenvalues(c: &CirculantSpec) -> Vec<Complex64> {
    FourierBasis::new(c.order()).synthesize(&c.first_col)
}

/// `σ_j = Σ_k s_k ω^{jk} e^{iπk/n}`, so that `S = F̂*·diag(σ)·F̂`.
pub fn skew_circulant_eigenvalues(s: &SkewCirculantSpec) -> Vec<Complex64> {
    let basis = FourierBasis::new(s.order());
    spectrum_with_basis(s, &basis)
}

fn spectrum_with_basis(s: &SkewCirculantSpec, basis: &FourierBasis) -> Vec<Complex64> {
    let mut v = s.first_col.clone();
    basis.modulation().modulate(&mut v, false);
    basis.synthesize(&v)
}

/// The splitting of one Toeplitz coefficient together with both spectra and
/// the Fourier basis that diagonalizes them.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub circulant: CirculantSpec,
    pub skew: SkewCirculantSpec,
    /// Eigenvalues of the circulant part (`Λ`).
    pub circ_eigs: Vec<Complex64>,
    /// Eigenvalues of the skew-circulant part (`Σ`).
    pub skew_eigs: Vec<Complex64>,
    basis: FourierBasis,
    real: bool,
}

impl SpectralSplit {
    pub fn new(t: &ToeplitzSpec) -> Self {
        let (circulant, skew) = cscs_split(t);
        let basis = FourierBasis::new(t.order());
        let circ_eigs = basis.synthesize(circulant.first_col());
        let skew_eigs = spectrum_with_basis(&skew, &basis);
        Self {
            circulant,
            skew,
            circ_eigs,
            skew_eigs,
            basis,
            real: t.is_real(),
        }
    }

    pub fn order(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &FourierBasis {
        &self.basis
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// `(C + S)·X` through the two spectral factorizations.
    pub fn apply_left(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut circ = x.clone();
        self.basis.circulant_in_place(&mut circ, Side::Left, Conjugation::Forward);
        crate::fft::scale_rows(&mut circ, &self.circ_eigs, false);
        self.basis.circulant_in_place(&mut circ, Side::Left, Conjugation::Adjoint);

        let mut skew = x.clone();
        self.basis.skew_in_place(&mut skew, Side::Left, Conjugation::Forward);
        crate::fft::scale_rows(&mut skew, &self.skew_eigs, false);
        self.basis.skew_in_place(&mut skew, Side::Left, Conjugation::Adjoint);

        circ + skew
    }

    /// `X·(C + S)` through the two spectral factorizations.
    pub fn apply_right(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut circ = x.clone();
        self.basis.circulant_in_place(&mut circ, Side::Right, Conjugation::Forward);
        crate::fft::scale_cols(&mut circ, &self.circ_eigs, false);
        self.basis.circulant_in_place(&mut circ, Side::Right, Conjugation::Adjoint);

        let mut skew = x.clone();
        self.basis.skew_in_place(&mut skew, Side::Right, Conjugation::Forward);
        crate::fft::scale_cols(&mut skew, &self.skew_eigs, false);
        self.basis.skew_in_place(&mut skew, Side::Right, Conjugation::Adjoint);

        circ + skew
    }
}
