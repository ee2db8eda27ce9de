//! The CSCS iteration.
//!
//! Each sweep solves a shifted circulant Sylvester equation for a correction,
//! recomputes the residual, then solves a shifted skew-circulant one:
//!
//! ```text
//! (αI + C_A) Z + Z (βI + C_B) = R^(k),        X^(k+½) = X^(k) + Z
//! (αI + S_A) Z + Z (βI + S_B) = R^(k+½),      X^(k+1) = X^(k+½) + Z
//! ```
//!
//! Both equations are diagonal in the (modulated) Fourier basis.

mod context;
mod shifts;

use std::time::Instant;

use num_complex::Complex64;

pub use context::{iteration_matrix_dense, CscsContext, DENSE_ITERATION_LIMIT};
pub use shifts::{
    box_bound, contraction_bound, kron_spectra, optimal_gamma, select_shifts, Definiteness, KronSpectra,
    ShiftSelection,
};

use crate::dense::max_abs;
use crate::error::{Error, Result};
use crate::report::{SolveReport, SolveStatus};
use crate::toeplitz::{DenseMatrix, SpectralSplit, ToeplitzSpec};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAXIT: usize = 5000;

/// How `α` and `β` are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftPolicy {
    /// `α = β = γ*/2` from [`select_shifts`].
    Auto,
    Explicit { alpha: f64, beta: f64 },
    /// `α = β = k·γ*`.
    Multiplier(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HalfStepOrder {
    #[default]
    CirculantFirst,
    SkewFirst,
}

#[derive(Debug, Clone)]
pub struct CscsOptions {
    pub shifts: ShiftPolicy,
    pub tol: f64,
    pub maxit: usize,
    pub x0: Option<DenseMatrix>,
    pub order: HalfStepOrder,
    pub record_half_residuals: bool,
}

impl Default for CscsOptions {
    fn default() -> Self {
        Self {
            shifts: ShiftPolicy::Auto,
            tol: DEFAULT_TOL,
            maxit: DEFAULT_MAXIT,
            x0: None,
            order: HalfStepOrder::default(),
            record_half_residuals: false,
        }
    }
}

impl CscsOptions {
    pub fn with_shifts(alpha: f64, beta: f64) -> Self {
        Self { shifts: ShiftPolicy::Explicit { alpha, beta }, ..Self::default() }
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

/// Shift selection for a pair of Toeplitz coefficients.
pub fn shifts_for(a: &ToeplitzSpec, b: &ToeplitzSpec) -> ShiftSelection {
    let (sa, sb) = (SpectralSplit::new(a), SpectralSplit::new(b));
    select_shifts(&kron_spectra(&sa.circ_eigs, &sb.circ_eigs, &sa.skew_eigs, &sb.skew_eigs))
}

/// Builds the context for `opts.shifts`, resolving automatic shifts.
pub fn build_context(a: &ToeplitzSpec, b: &ToeplitzSpec, policy: ShiftPolicy) -> Result<CscsContext> {
    let (sa, sb) = (SpectralSplit::new(a), SpectralSplit::new(b));
    let (alpha, beta) = match policy {
        ShiftPolicy::Explicit { alpha, beta } => (alpha, beta),
        ShiftPolicy::Auto | ShiftPolicy::Multiplier(_) => {
            let sel = select_shifts(&kron_spectra(&sa.circ_eigs, &sb.circ_eigs, &sa.skew_eigs, &sb.skew_eigs));
            match policy {
                ShiftPolicy::Multiplier(k) => sel.scaled(k),
                _ => (sel.alpha, sel.beta),
            }
        }
    };
    CscsContext::from_splits(sa, sb, alpha, beta)
}

/// Solves `AX + XB = C` by the CSCS iteration.
pub fn cscs_solve(a: &ToeplitzSpec, b: &ToeplitzSpec, c: &DenseMatrix, opts: &CscsOptions) -> Result<SolveReport> {
    if !(opts.tol > 0.0) {
        return Err(Error::input(format!("tol must be positive, got {}", opts.tol)));
    }
    let ctx = build_context(a, b, opts.shifts)?;
    cscs_solve_with(&ctx, c, opts)
}

/// [`cscs_solve`] with a prebuilt context; `opts.shifts` is ignored.
pub fn cscs_solve_with(ctx: &CscsContext, c: &DenseMatrix, opts: &CscsOptions) -> Result<SolveReport> {
    let (n, m) = (ctx.rows(), ctx.cols());
    if c.shape() != (n, m) {
        return Err(Error::dims(format!("C of shape {n}x{m}"), format!("{}x{}", c.nrows(), c.ncols())));
    }
    let mut x = match &opts.x0 {
        Some(x0) if x0.shape() != (n, m) => {
            return Err(Error::dims(format!("X0 of shape {n}x{m}"), format!("{}x{}", x0.nrows(), x0.ncols())));
        }
        Some(x0) => x0.clone(),
        None => DenseMatrix::zeros(n, m),
    };
    let real_inputs = ctx.is_real() && crate::dense::is_real(c) && crate::dense::is_real(&x);

    let start = Instant::now();
    let c_norm = c.norm();
    let rel = |r: &DenseMatrix| if c_norm == 0.0 { r.norm() } else { r.norm() / c_norm };

    let mut r = ctx.residual_unchecked(&x, c);
    let mut history = vec![rel(&r)];
    let mut half_history = Vec::new();
    let mut iterations = 0;
    let mut status = if history[0] <= opts.tol { SolveStatus::Converged } else { SolveStatus::MaxIterations };

    let steps: [fn(&CscsContext, &DenseMatrix) -> DenseMatrix; 2] = match opts.order {
        HalfStepOrder::CirculantFirst => [CscsContext::half_step_circulant_unchecked, CscsContext::half_step_skew_unchecked],
        HalfStepOrder::SkewFirst => [CscsContext::half_step_skew_unchecked, CscsContext::half_step_circulant_unchecked],
    };

    while status != SolveStatus::Converged && iterations < opts.maxit {
        x += steps[0](ctx, &r);
        r = ctx.residual_unchecked(&x, c);
        if opts.record_half_residuals {
            half_history.push(rel(&r));
        }
        x += steps[1](ctx, &r);
        r = ctx.residual_unchecked(&x, c);
        iterations += 1;

        let res = rel(&r);
        history.push(res);
        if !res.is_finite() {
            status = SolveStatus::Breakdown;
            break;
        }
        if res <= opts.tol {
            status = SolveStatus::Converged;
        }
    }

    if real_inputs {
        drop_rounding_imaginary(&mut x);
    }

    Ok(SolveReport {
        x,
        iterations,
        residual_history: history,
        half_residual_history: half_history,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        status,
        shifts: Some((ctx.alpha, ctx.beta)),
    })
}

/// Zeroes imaginary parts below `1e-12·‖X‖_max`; used only when every input
/// was real, so the exact solution is real too.
pub(crate) fn drop_rounding_imaginary(x: &mut DenseMatrix) {
    let cutoff = 1e-12 * max_abs(x);
    for z in x.iter_mut() {
        if z.im.abs() <= cutoff {
            *z = Complex64::new(z.re, 0.0);
        }
    }
}
