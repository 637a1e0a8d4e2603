//! Brute-force integration of the defining integrals, used to certify the
//! closed forms.
//!
//! * Smooth Jastrow factors (integer `lambda`) use tensor-product
//!   Gauss-Hermite or Gauss-Legendre rules.
//! * Kinked Jastrow factors (`|q_i - q_j|^{2 lambda}` with non-integer
//!   `lambda`) use the ordered-sector parametrisation of
//!   [`crate::quadrature::ordered_sector`], which keeps the kinks on cell
//!   boundaries.
//! * Monte Carlo samples the initial density through the tridiagonal
//!   beta-ensemble model and reports a jackknife error over fixed batches. Every batch owns a ChaCha8 stream
//!   derived from the run seed, so estimates are reproducible bit for bit
//!   regardless of the worker count.
//!
//! The oscillating phase `exp(i b_dot q^2 / 2b)` grows with `t`; quadrature is
//! intended for `t <= 5` and Monte Carlo for `t <= 10`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, StandardNormal};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::ensembles::mehta_constant;
use crate::ermakov::ScalingState;
use crate::error::{domain, Error, Result};
use crate::exec::{map_range, Execution};
use crate::params::SystemParams;
use crate::quadrature::{ordered_sector, tensor_product, Rule};
use crate::summation::ComplexSum;

pub const MAX_QUADRATURE_DIM: usize = 4;
pub const MAX_MEHTA_DIM: usize = 3;
pub const MIN_NODES: usize = 20;
pub const MIN_MC_SAMPLES: usize = 10_000;
pub const MC_BATCHES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    GaussHermite,
    /// Tensor-product Gauss-Legendre on a box.
    UniformQuadrature,
    /// Gauss-Legendre on the ordered sector of a box.
    OrderedSector,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    /// Zero for deterministic quadrature.
    pub std_error: f64,
    pub method: OracleMethod,
    pub evaluations: u64,
    /// Complex survival amplitude behind `value`, where one exists.
    pub amplitude: Option<Complex64>,
    pub seed: Option<u64>,
    /// Fewer nodes than [`MIN_NODES`] were requested.
    pub accuracy_warning: bool,
    /// Error of a deterministic rule is not estimated.
    pub truncation_limited: bool,
}

impl OracleEstimate {
    fn quadrature(value: f64, method: OracleMethod, evaluations: u64, nodes: usize) -> Self {
        Self {
            value,
            std_error: 0.0,
            method,
            evaluations,
            amplitude: None,
            seed: None,
            accuracy_warning: nodes < MIN_NODES,
            truncation_limited: true,
        }
    }
}

/// Node count per axis used when the caller has no preference.
pub fn default_nodes(params: &SystemParams) -> usize {
    if params.smooth_jastrow() {
        80
    } else {
        120
    }
}

fn check_dim(n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::Capability(format!(
            "tensor-product quadrature supports at most {max} particles, got {n}; use Monte Carlo"
        )));
    }
    Ok(())
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes == 0 {
        return Err(domain("quadrature needs at least one node"));
    }
    Ok(())
}

/// `prod_{i<j} |q_i - q_j|^{2 lambda}`.
#[inline]
pub(crate) fn jastrow(q: &[f64], lambda: f64, smooth: bool) -> f64 {
    if lambda == 0.0 {
        return 1.0;
    }
    let mut prod = 1.0;
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            prod *= q[i] - q[j];
        }
    }
    if smooth {
        prod.powi(2 * lambda as i32)
    } else {
        prod.abs().powf(2.0 * lambda)
    }
}

/// `int_{R^N} exp(-re_c q^2 / 2 + i k q^2) prod |q_i - q_j|^{2 lambda} dq`.
fn gaussian_jastrow_integral(
    params: &SystemParams,
    re_c: f64,
    k: f64,
    nodes: usize,
    exec: Execution,
) -> Result<(Complex64, u64, OracleMethod)> {
    check_nodes(nodes)?;
    let n = params.n();
    let lambda = params.lambda();
    let smooth = params.smooth_jastrow();
    let evaluations = (nodes as u64).pow(n as u32);
    if smooth {
        let rule = Rule::gauss_hermite(nodes)?.scaled((2.0 / re_c).sqrt());
        let value = tensor_product(&rule, n, exec, |q| {
            let r2: f64 = q.iter().map(|x| x * x).sum();
            Complex64::from_polar(jastrow(q, lambda, true), k * r2)
        });
        Ok((value, evaluations, OracleMethod::GaussHermite))
    } else {
        let half_width = (2.0 * (40.0 + 2.0 * params.beta()) / re_c).sqrt();
        let rule = Rule::gauss_legendre(nodes)?;
        let value = ordered_sector(&rule, n, -half_width, half_width, exec, |q| {
            let r2: f64 = q.iter().map(|x| x * x).sum();
            Complex64::from_polar((-0.5 * re_c * r2).exp() * jastrow(q, lambda, false), k * r2)
        });
        Ok((value, evaluations, OracleMethod::OrderedSector))
    }
}

/// Pieces of the overlap integral at one scaling state:
/// `A = exp(log_prefactor - i beta tau / 2) * int exp(-re_c q^2/2 + i k q^2) J(q) dq`.
struct OverlapSetup {
    re_c: f64,
    k: f64,
    log_prefactor: f64,
    phase: f64,
}

fn overlap_setup(params: &SystemParams, state: &ScalingState) -> Result<OverlapSetup> {
    if !(state.b > 0.0) || !state.b.is_finite() {
        return Err(Error::Integrity {
            t: state.t,
            b: state.b,
        });
    }
    let b = state.b;
    let beta = params.beta();
    Ok(OverlapSetup {
        re_c: 1.0 + 1.0 / (b * b),
        k: state.b_dot / (2.0 * b),
        log_prefactor: -mehta_constant(params) - 0.5 * beta * b.ln(),
        phase: -0.5 * beta * state.tau,
    })
}

/// Survival probability by direct quadrature of the overlap integral.
pub fn survival_quadrature(
    params: &SystemParams,
    state: &ScalingState,
    nodes: usize,
) -> Result<OracleEstimate> {
    survival_quadrature_with(params, state, nodes, Execution::default())
}

pub fn survival_quadrature_with(
    params: &SystemParams,
    state: &ScalingState,
    nodes: usize,
    exec: Execution,
) -> Result<OracleEstimate> {
    check_dim(params.n(), MAX_QUADRATURE_DIM)?;
    let setup = overlap_setup(params, state)?;
    let (integral, evaluations, method) =
        gaussian_jastrow_integral(params, setup.re_c, setup.k, nodes, exec)?;
    let amplitude = Complex64::from_polar(setup.log_prefactor.exp(), setup.phase) * integral;
    let mut est = OracleEstimate::quadrature(amplitude.norm_sqr(), method, evaluations, nodes);
    est.amplitude = Some(amplitude);
    Ok(est)
}

/// Draws one configuration from the ground-state density
/// `|Psi_0|^2 ~ exp(-q^2) |Delta(q)|^{2 lambda}`: the eigenvalues of the
/// tridiagonal Hermite beta-ensemble with Dyson index `2 lambda`, scaled by
/// `1/2`.
fn sample_ground_state(
    rng: &mut ChaCha8Rng,
    n: usize,
    chi: &[Option<ChiSquared<f64>>],
    q: &mut [f64],
) {
    let mut diag = DVector::<f64>::zeros(n);
    let mut off = DVector::<f64>::zeros(n.saturating_sub(1));
    for d in diag.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *d = z;
    }
    for (o, dist) in off.iter_mut().zip(chi) {
        *o = dist.map_or(0.0, |c| (0.5 * rng.sample(c)).sqrt());
    }
    if n == 1 {
        q[0] = FRAC_1_SQRT_2 * diag[0];
        return;
    }
    let mut h = DMatrix::<f64>::from_diagonal(&diag);
    for i in 0..n - 1 {
        h[(i, i + 1)] = off[i];
        h[(i + 1, i)] = off[i];
    }
    let eig = h.symmetric_eigenvalues();
    for (x, e) in q.iter_mut().zip(eig.iter()) {
        *x = FRAC_1_SQRT_2 * e;
    }
}

/// `ln |Delta(x)|`.
fn log_vandermonde(x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc += (x[i] - x[j]).abs().ln();
        }
    }
    acc
}

/// Survival probability by Monte Carlo. Configurations are sampled from the
/// initial density `|Psi_0|^2` and the estimator is the wavefunction ratio
/// `Psi(q, t) / Psi_0(q)`, whose mean is the survival amplitude.
///
/// The relative variance of the estimator is `1/S - 1`, so the method is
/// practical only while `S` is not tiny.
pub fn survival_monte_carlo(
    params: &SystemParams,
    state: &ScalingState,
    samples: usize,
    seed: u64,
) -> Result<OracleEstimate> {
    survival_monte_carlo_with(params, state, samples, seed, Execution::default())
}

pub fn survival_monte_carlo_with(
    params: &SystemParams,
    state: &ScalingState,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<OracleEstimate> {
    if samples < MIN_MC_SAMPLES {
        return Err(domain(format!(
            "Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    if !(state.b > 0.0) || !state.b.is_finite() {
        return Err(Error::Integrity {
            t: state.t,
            b: state.b,
        });
    }
    let n = params.n();
    let lambda = params.lambda();
    let b = state.b;
    let dyson = 2.0 * lambda;
    let chi: Vec<Option<ChiSquared<f64>>> = (1..n)
        .map(|k| {
            let dof = dyson * (n - k) as f64;
            (dof > 0.0).then(|| ChiSquared::new(dof).expect("positive degrees of freedom"))
        })
        .collect();
    let growth = 0.5 * (1.0 - 1.0 / (b * b));
    let chirp = 0.5 * state.b_dot / b;
    let log_norm = -0.5 * n as f64 * b.ln();

    let per_batch = samples / MC_BATCHES;
    let extra = samples % MC_BATCHES;
    let batches: Vec<(Complex64, usize)> = map_range(exec, MC_BATCHES, |batch| {
        let count = per_batch + usize::from(batch < extra);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch as u64);
        let mut q = vec![0.0; n];
        let mut scaled = vec![0.0; n];
        let mut acc = ComplexSum::new();
        for _ in 0..count {
            sample_ground_state(&mut rng, n, &chi, &mut q);
            let r2: f64 = q.iter().map(|x| x * x).sum();
            let mut log_ratio = log_norm + growth * r2;
            if lambda > 0.0 {
                for (s, x) in scaled.iter_mut().zip(&q) {
                    *s = x / b;
                }
                log_ratio += lambda * (log_vandermonde(&scaled) - log_vandermonde(&q));
            }
            acc.add(Complex64::from_polar(log_ratio.exp(), chirp * r2));
        }
        (acc.value(), count)
    });

    let total: Complex64 = batches
        .iter()
        .map(|(s, _)| *s)
        .collect::<ComplexSum>()
        .value();
    let mean = total / samples as f64;
    let value = mean.norm_sqr();

    let loo: Vec<f64> = batches
        .iter()
        .map(|(s, c)| ((total - s) / (samples - c) as f64).norm_sqr())
        .collect();
    let nb = MC_BATCHES as f64;
    let loo_mean = loo.iter().sum::<f64>() / nb;
    let var = (nb - 1.0) / nb * loo.iter().map(|v| (v - loo_mean).powi(2)).sum::<f64>();

    let amplitude = mean * Complex64::from_polar(1.0, -0.5 * params.beta() * state.tau);
    Ok(OracleEstimate {
        value,
        std_error: var.sqrt(),
        method: OracleMethod::MonteCarlo,
        evaluations: samples as u64,
        amplitude: Some(amplitude),
        seed: Some(seed),
        accuracy_warning: false,
        truncation_limited: false,
    })
}

/// `I = int_{[-a/2, a/2]^N} exp(-q^2 / b^2) prod |q_i - q_j|^{2 lambda} dq`.
/// `b` and `a` may be infinite, but not both.
pub fn nonescape_quadrature(
    params: &SystemParams,
    b: f64,
    a: f64,
    nodes: usize,
) -> Result<OracleEstimate> {
    nonescape_quadrature_with(params, b, a, nodes, Execution::default())
}

pub fn nonescape_quadrature_with(
    params: &SystemParams,
    b: f64,
    a: f64,
    nodes: usize,
    exec: Execution,
) -> Result<OracleEstimate> {
    check_dim(params.n(), MAX_QUADRATURE_DIM)?;
    check_nodes(nodes)?;
    if !(b > 0.0) || !(a > 0.0) {
        return Err(domain(format!(
            "non-escape integral needs b > 0 and a > 0, got b={b}, a={a}"
        )));
    }
    // the integrand is below e^-36 of its peak beyond this half-width
    let half = (0.5 * a).min(b * (36.0 + 2.0 * params.beta()).sqrt());
    if !half.is_finite() {
        return Err(domain("region and scaling factor cannot both be infinite"));
    }
    let inv_b2 = 1.0 / (b * b);
    let lambda = params.lambda();
    let smooth = params.smooth_jastrow();
    let n = params.n();
    let f = |q: &[f64]| {
        let r2: f64 = q.iter().map(|x| x * x).sum();
        Complex64::new((-r2 * inv_b2).exp() * jastrow(q, lambda, smooth), 0.0)
    };
    let rule = Rule::gauss_legendre(nodes)?;
    let (value, method) = if smooth {
        (
            tensor_product(&rule.mapped(-half, half), n, exec, f),
            OracleMethod::UniformQuadrature,
        )
    } else {
        (
            ordered_sector(&rule, n, -half, half, exec, f),
            OracleMethod::OrderedSector,
        )
    };
    Ok(OracleEstimate::quadrature(
        value.re,
        method,
        (nodes as u64).pow(n as u32),
        nodes,
    ))
}

/// `C = int prod e^{-q_i^2} prod |q_i - q_j|^{2 lambda} dq` by quadrature.
pub fn mehta_constant_numeric(params: &SystemParams, nodes: usize) -> Result<OracleEstimate> {
    check_dim(params.n(), MAX_MEHTA_DIM)?;
    let (value, evaluations, method) =
        gaussian_jastrow_integral(params, 2.0, 0.0, nodes, Execution::default())?;
    Ok(OracleEstimate::quadrature(
        value.re,
        method,
        evaluations,
        nodes,
    ))
}

/// Selberg integral by quadrature over `[0, 1]^n`.
pub fn selberg_quadrature(
    n: usize,
    a: f64,
    b: f64,
    g: f64,
    nodes: usize,
) -> Result<OracleEstimate> {
    check_dim(n, MAX_QUADRATURE_DIM)?;
    check_nodes(nodes)?;
    if n == 0 || !(a > 0.0 && b > 0.0 && g >= 0.0) {
        return Err(domain(format!(
            "Selberg quadrature needs n >= 1, a, b > 0, g >= 0; got n={n}, a={a}, b={b}, g={g}"
        )));
    }
    let smooth = g.fract() == 0.0;
    let f = |x: &[f64]| {
        let w: f64 = x
            .iter()
            .map(|&v| v.powf(a - 1.0) * (1.0 - v).powf(b - 1.0))
            .product();
        Complex64::new(w * jastrow(x, g, smooth), 0.0)
    };
    let rule = Rule::gauss_legendre(nodes)?;
    let (value, method) = if smooth {
        (
            tensor_product(&rule.mapped(0.0, 1.0), n, Execution::default(), f),
            OracleMethod::UniformQuadrature,
        )
    } else {
        (
            ordered_sector(&rule, n, 0.0, 1.0, Execution::default(), f),
            OracleMethod::OrderedSector,
        )
    };
    Ok(OracleEstimate::quadrature(
        value.re,
        method,
        (nodes as u64).pow(n as u32),
        nodes,
    ))
}
