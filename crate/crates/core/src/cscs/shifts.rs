//! Shift selection from the closed-form spectra and the contraction bound.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative slack under which a slightly negative `θ_min` (rounding noise on
/// a semi-definite factor) is treated as zero.
const DEFINITENESS_SLACK: f64 = 1e-12;

/// Spectra of `C̃ = I⊗C_A + C_Bᵀ⊗I` and `S̃ = I⊗S_A + S_Bᵀ⊗I`.
/// Entry `i + j·n` is `λ_A[i] + λ_B[j]` (resp. `σ_A[i] + σ_B[j]`), matching
/// column-stacked `vec`.
#[derive(Debug, Clone, PartialEq)]
pub struct KronSpectra {
    pub circulant: Vec<Complex64>,
    pub skew: Vec<Complex64>,
}

impl KronSpectra {
    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.circulant.iter().chain(&self.skew)
    }
}

pub fn kron_spectra(
    lambda_a: &[Complex64],
    lambda_b: &[Complex64],
    sigma_a: &[Complex64],
    sigma_b: &[Complex64],
) -> KronSpectra {
    let sums = |a: &[Complex64], b: &[Complex64]| {
        b.iter()
            .flat_map(|&y| a.iter().map(move |&x| x + y))
            .collect::<Vec<_>>()
    };
    KronSpectra {
        circulant: sums(lambda_a, lambda_b),
        skew: sums(sigma_a, sigma_b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    /// `θ_min ≥ 0`: both Kronecker sums have spectra in the closed right
    /// half-plane and the two-branch `γ*` applies.
    Qualified,
    /// `θ_min < 0`: `γ* = 1` is used instead.
    Fallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSelection {
    pub theta_min: f64,
    pub theta_max: f64,
    pub eta_min: f64,
    pub eta_max: f64,
    pub eta_tilde: f64,
    pub gamma_star: f64,
    pub sigma_star: f64,
    pub alpha: f64,
    pub beta: f64,
    pub definiteness: Definiteness,
}

impl ShiftSelection {
    pub fn is_fallback(&self) -> bool {
        self.definiteness == Definiteness::Fallback
    }

    /// `α = β = k·γ*`.
    pub fn scaled(&self, k: f64) -> (f64, f64) {
        (k * self.gamma_star, k * self.gamma_star)
    }
}

/// `max ((γ−θ)² + η²)/((γ+θ)² + η²)` over `θ ∈ [θ_min, θ_max]`, `|η| ≤ η_max`.
///
/// For `θ ≥ 0` the ratio grows with `|η|` and, in `θ`, peaks at an endpoint,
/// so only the two corners at `η_max` need evaluating.
pub fn box_bound(gamma: f64, theta_min: f64, theta_max: f64, eta_max: f64) -> f64 {
    let f = |theta: f64| {
        let e2 = eta_max * eta_max;
        ((gamma - theta).powi(2) + e2) / ((gamma + theta).powi(2) + e2)
    };
    f(theta_min).max(f(theta_max))
}

/// The two-branch minimizer of [`box_bound`] and the value it attains.
pub fn optimal_gamma(theta_min: f64, theta_max: f64, eta_max: f64) -> (f64, f64, f64) {
    let eta_tilde = (theta_min * (theta_max - theta_min) / 2.0).max(0.0).sqrt();
    if eta_max < eta_tilde {
        let root = (theta_min * theta_max - eta_max * eta_max).sqrt();
        let s = theta_min + theta_max;
        let sigma = (s - 2.0 * root) / (s + 2.0 * root);
        (root, sigma, eta_tilde)
    } else {
        let root = (theta_min * theta_min + eta_max * eta_max).sqrt();
        let sigma = if root == 0.0 { 1.0 } else { (root - theta_min) / (root + theta_min) };
        (root, sigma, eta_tilde)
    }
}

/// Bounds the spectra of `C̃` and `S̃` by a box and picks `α = β = γ*/2`.
pub fn select_shifts(spectra: &KronSpectra) -> ShiftSelection {
    let mut theta_min = f64::INFINITY;
    let mut theta_max = f64::NEG_INFINITY;
    let mut eta_min = f64::INFINITY;
    let mut eta_max = 0.0_f64;
    let mut scale = 0.0_f64;
    for z in spectra.iter() {
        theta_min = theta_min.min(z.re);
        theta_max = theta_max.max(z.re);
        eta_min = eta_min.min(z.im.abs());
        eta_max = eta_max.max(z.im.abs());
        scale = scale.max(z.norm());
    }
    if !eta_min.is_finite() {
        eta_min = 0.0;
    }
    if theta_min < 0.0 && theta_min >= -DEFINITENESS_SLACK * scale {
        theta_min = 0.0;
    }

    if theta_min < 0.0 {
        let gamma = 1.0;
        return ShiftSelection {
            theta_min,
            theta_max,
            eta_min,
            eta_max,
            eta_tilde: f64::NAN,
            gamma_star: gamma,
            sigma_star: box_bound(gamma, theta_min, theta_max, eta_max),
            alpha: gamma / 2.0,
            beta: gamma / 2.0,
            definiteness: Definiteness::Fallback,
        };
    }

    let (gamma_star, sigma_star, eta_tilde) = optimal_gamma(theta_min, theta_max, eta_max);
    ShiftSelection {
        theta_min,
        theta_max,
        eta_min,
        eta_max,
        eta_tilde,
        gamma_star,
        sigma_star,
        alpha: gamma_star / 2.0,
        beta: gamma_star / 2.0,
        definiteness: Definiteness::Qualified,
    }
}

/// `σ_γ = max_λ |(γ−λ)/(γ+λ)| · max_μ |(γ−μ)/(γ+μ)|` over the spectra of
/// `C̃` and `S̃`.
pub fn contraction_bound(spectra: &KronSpectra, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::input(format!("gamma must be positive, got {gamma}")));
    }
    let worst = |values: &[Complex64]| -> Result<f64> {
        let mut best = 0.0_f64;
        for &v in values {
            let den = (gamma + v).norm();
            if den < 1e3 * f64::EPSILON * (1.0 + gamma + v.norm()) {
                return Err(Error::Breakdown(format!(
                    "gamma + eigenvalue vanishes at eigenvalue {v}"
                )));
            }
            best = best.max((gamma - v).norm() / den);
        }
        Ok(best)
    };
    Ok(worst(&spectra.circulant)? * worst(&spectra.skew)?)
}
