//! Observables of the expanding cloud measured on a fixed window
//! `[-a/2, a/2]`.
//!
//! The many-body non-escape probability decays with the same exponent as
//! the survival probability, while the one-body count `p(t)` only falls off
//! as `1/t`. The density uses the Wigner semicircle, which is exact for the
//! bulk only as `N` grows; it is applied here to every `N`.

use crate::ensembles::{mehta_constant, selberg};
use crate::ermakov::ScalingState;
use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::oracle::{self, MAX_QUADRATURE_DIM};
use crate::params::SystemParams;
use std::f64::consts::PI;

/// The observation window `[-a/2, a/2]`. `a` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    a: f64,
}

impl RegionSpec {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(domain(format!("region width must be positive, got {a}")));
        }
        Ok(Self { a })
    }

    pub fn whole_line() -> Self {
        Self { a: f64::INFINITY }
    }

    pub fn width(&self) -> f64 {
        self.a
    }
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

/// Nodes per axis used by [`nonescape_probability`].
pub fn nonescape_nodes(params: &SystemParams) -> usize {
    if params.smooth_jastrow() {
        64
    } else {
        96
    }
}

/// Probability that all `N` particles lie inside the window:
/// `P = C^-1 b^-beta I`, with `I` the Gaussian-Jastrow integral over the
/// window at width `b`.
pub fn nonescape_probability(
    params: &SystemParams,
    state: &ScalingState,
    region: RegionSpec,
) -> Result<f64> {
    nonescape_probability_with(
        params,
        state,
        region,
        nonescape_nodes(params),
        Execution::default(),
    )
}

pub fn nonescape_probability_with(
    params: &SystemParams,
    state: &ScalingState,
    region: RegionSpec,
    nodes: usize,
    exec: Execution,
) -> Result<f64> {
    if params.n() > MAX_QUADRATURE_DIM {
        return Err(Error::Capability(format!(
            "non-escape probability is available for at most {MAX_QUADRATURE_DIM} particles, got {}",
            params.n()
        )));
    }
    check_state(state)?;
    let integral = oracle::nonescape_quadrature_with(params, state.b, region.a, nodes, exec)?.value;
    let log_prefactor = -mehta_constant(params) - params.beta() * state.b.ln();
    Ok((log_prefactor.exp() * integral).min(1.0))
}

/// Large-`b` form `C^-1 b^-beta a^beta S_N(1, 1, lambda)`.
pub fn nonescape_asymptote(
    params: &SystemParams,
    state: &ScalingState,
    region: RegionSpec,
) -> Result<f64> {
    check_state(state)?;
    if !region.a.is_finite() {
        return Err(domain("the small-window asymptote needs a finite window"));
    }
    let beta = params.beta();
    let log_s = selberg(params.n(), 1.0, 1.0, params.lambda())?;
    Ok((-mehta_constant(params) + beta * (region.a / state.b).ln() + log_s).exp())
}

/// Whether `b` is far enough past `max(a, |lambda a^2 - 1|^{1/2})` for
/// [`nonescape_asymptote`] to be accurate to about a percent.
pub fn nonescape_asymptote_valid(
    params: &SystemParams,
    state: &ScalingState,
    region: RegionSpec,
) -> bool {
    let scale = region
        .a
        .max((params.lambda() * region.a * region.a - 1.0).abs().sqrt());
    state.b >= 10.0 * scale
}

/// Semicircle density `n(q, t) = (2N / pi b) sqrt(1 - (q/b)^2)`, zero outside
/// `|q| <= b`.
pub fn density_profile(q: f64, state: &ScalingState, n_particles: usize) -> f64 {
    let x = q / state.b;
    if x.abs() > 1.0 {
        return 0.0;
    }
    2.0 * n_particles as f64 / (PI * state.b) * (1.0 - x * x).sqrt()
}

/// Expected number of particles in the window,
/// `p = (2N / pi) [x sqrt(1 - x^2) + arcsin x]` with `x = min(a / 2b, 1)`.
pub fn integrated_density(state: &ScalingState, region: RegionSpec, n_particles: usize) -> f64 {
    let x = (0.5 * region.a / state.b).min(1.0);
    2.0 * n_particles as f64 / PI * (x * (1.0 - x * x).sqrt() + x.asin())
}

/// `p(t) ~ 2 a N / (pi t)`.
pub fn integrated_density_asymptote(
    state: &ScalingState,
    region: RegionSpec,
    n_particles: usize,
) -> f64 {
    2.0 * region.a * n_particles as f64 / (PI * state.t)
}
