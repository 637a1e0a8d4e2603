//! Closed-form decay quantities for the Bijl-Jastrow ground state.
//!
//! With `w = (b + 1/b - i b_dot) / 2` the survival amplitude is
//! `A = w^{-beta/2} exp(-i beta tau / 2)` and `S = |A|^2 = (alpha b)^{-beta}`,
//! where `alpha b = |w|`. `Re w > 0`, so the principal logarithm of `w` is
//! continuous along a trajectory; the dynamical phase `beta tau / 2` is kept
//! unreduced.

use num_complex::Complex64;

use crate::ermakov::ScalingState;
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// `N [1 + lambda (N - 1)]`.
pub fn exponent_beta(params: &SystemParams) -> f64 {
    params.beta()
}

fn check_state(state: &ScalingState) -> Result<()> {
    if !(state.b > 0.0) || !state.b.is_finite() {
        return Err(Error::Integrity {
            t: state.t,
            b: state.b,
        });
    }
    Ok(())
}

/// `alpha = 1/2 [(1 + 1/b^2)^2 + (b_dot / b)^2]^{1/2}`; equals 1 at `t = 0`
/// and is bounded below by 1/2.
pub fn alpha(state: &ScalingState) -> Result<f64> {
    check_state(state)?;
    let b = state.b;
    Ok(0.5 * (1.0 + 1.0 / (b * b)).hypot(state.b_dot / b))
}

/// `ln(alpha b) = ln |w|`, evaluated without forming `alpha` first.
fn log_alpha_b(state: &ScalingState) -> f64 {
    let b = state.b;
    (0.5 * (b + 1.0 / b).hypot(state.b_dot)).ln()
}

/// `ln S = -beta ln(alpha b)`; finite even when `S` underflows.
pub fn log_survival_probability(params: &SystemParams, state: &ScalingState) -> Result<f64> {
    check_state(state)?;
    Ok(-params.beta() * log_alpha_b(state))
}

/// `S = (alpha b)^{-beta}`. Returns 0 when the value underflows; use
/// [`log_survival_probability`] or [`decay_quantities`] in that regime.
pub fn survival_probability(params: &SystemParams, state: &ScalingState) -> Result<f64> {
    Ok(log_survival_probability(params, state)?.exp())
}

/// Complex log of the survival amplitude. With `gauge_away_phase` the
/// dynamical phase `E_0 tau = beta tau / 2` is removed.
pub fn log_survival_amplitude(
    params: &SystemParams,
    state: &ScalingState,
    gauge_away_phase: bool,
) -> Result<Complex64> {
    check_state(state)?;
    let b = state.b;
    let w = Complex64::new(0.5 * (b + 1.0 / b), -0.5 * state.b_dot);
    let half_beta = 0.5 * params.beta();
    let mut log_a = -half_beta * w.ln();
    if !gauge_away_phase {
        log_a.im -= half_beta * state.tau;
    }
    Ok(log_a)
}

pub fn survival_amplitude(
    params: &SystemParams,
    state: &ScalingState,
    gauge_away_phase: bool,
) -> Result<Complex64> {
    Ok(log_survival_amplitude(params, state, gauge_away_phase)?.exp())
}

/// `1 - beta t^2 / 8`, the short-time expansion; the error is `O(t^4)`.
pub fn short_time_series(params: &SystemParams, t: f64) -> f64 {
    1.0 - params.beta() * t * t / 8.0
}

/// Energy spread of the initial state, `sqrt(beta) / (2 sqrt 2)`.
pub fn energy_variance(params: &SystemParams) -> f64 {
    params.beta().sqrt() / (2.0 * std::f64::consts::SQRT_2)
}

/// `(2/t)^beta`, the long-time power law after a sudden release.
pub fn long_time_asymptote(params: &SystemParams, t: f64) -> Result<f64> {
    Ok(log_long_time_asymptote(params, t)?.exp())
}

pub fn log_long_time_asymptote(params: &SystemParams, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(crate::error::domain(format!(
            "long-time asymptote needs t > 0, got {t}"
        )));
    }
    Ok(params.beta() * (2.0 / t).ln())
}

/// Onset scale `sqrt(2 N (1 + lambda (N - 1)))` of the power law; the law
/// holds for `t` well beyond it.
pub fn crossover_time(params: &SystemParams) -> f64 {
    (2.0 * params.beta()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayQuantities {
    pub survival: f64,
    pub log_survival: f64,
    /// Set when `survival` underflowed to zero (or a subnormal).
    pub underflow: bool,
    /// Ungauged survival amplitude.
    pub amplitude: Complex64,
    pub alpha: f64,
    /// `(2/t)^beta`; infinite at `t = 0`.
    pub asymptote: f64,
    pub crossover_time: f64,
}

pub fn decay_quantities(params: &SystemParams, state: &ScalingState) -> Result<DecayQuantities> {
    let log_survival = log_survival_probability(params, state)?;
    let survival = log_survival.exp();
    let underflow = survival < f64::MIN_POSITIVE;
    Ok(DecayQuantities {
        survival: if underflow { 0.0 } else { survival },
        log_survival,
        underflow,
        amplitude: survival_amplitude(params, state, false)?,
        alpha: alpha(state)?,
        asymptote: if state.t > 0.0 {
            long_time_asymptote(params, state.t)?
        } else {
            f64::INFINITY
        },
        crossover_time: crossover_time(params),
    })
}
