use std::fmt;

use crate::toeplitz::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Breakdown,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "max_iterations",
            SolveStatus::Breakdown => "breakdown",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of an iterative solve.
///
/// `residual_history[k]` is `‖C − AX⁽ᵏ⁾ − X⁽ᵏ⁾B‖_F / ‖C‖_F`; entry 0 is the
/// initial guess, so the history has `iterations + 1` entries.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: DenseMatrix,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    /// Relative residuals after each first half-step (only when requested).
    pub half_residual_history: Vec<f64>,
    pub elapsed_seconds: f64,
    pub status: SolveStatus,
    /// Shift pair `(α, β)` used by the splitting iterations.
    pub shifts: Option<(f64, f64)>,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::NAN)
    }

    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}
