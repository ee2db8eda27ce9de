//! Solvers for continuous Sylvester equations `AX + XB = C` whose coefficient
//! matrices `A` and `B` are Toeplitz.
//!
//! The centerpiece is the circulant/skew-circulant splitting (CSCS) iteration:
//! each Toeplitz coefficient is split as `T = C_T + S_T`, both parts are
//! diagonalized by (modulated) Fourier transforms, and the iteration alternates
//! between two shifted Sylvester equations that become entrywise divisions in
//! the transformed basis. Shift parameters are chosen from the closed-form
//! spectra of the splitting factors.
//!
//! Alongside the iteration the crate provides:
//!
//! - [`toeplitz`]: Toeplitz, circulant and skew-circulant specs and the splitting.
//! - [`fft`]: unitary Fourier-basis conjugations used by the half-steps.
//! - [`cscs`]: shift selection, contraction bound, FFT residual and the driver.
//! - [`baselines`]: HSS, block SSOR, Bartels–Stewart and a dense Kronecker oracle.
//! - [`problems`]: generators for the convection–diffusion and dense-Toeplitz test families.

pub mod baselines;
pub mod cscs;
pub mod dense;
pub mod error;
pub mod fft;
pub mod problems;
pub mod report;
pub mod toeplitz;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use report::{SolveReport, SolveStatus};
pub use toeplitz::{CirculantSpec, DenseMatrix, SkewCirculantSpec, SpectralSplit, ToeplitzSpec};
