//! Random-matrix ensemble constants.
//!
//! Everything is returned as a natural logarithm: the Mehta normalisation
//! overflows `f64` near `N = 30, lambda = 2`, and consumers only exponentiate
//! at the very end.

use crate::error::{domain, Result};
use crate::params::SystemParams;

/// Lanczos coefficients for `g = 607/128`, 15 terms.
const LANCZOS_G_HALF: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];
// sqrt(2 pi)
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Natural log of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("log_gamma needs a finite x > 0, got {x}")));
    }
    let tmp = x + LANCZOS_G_HALF;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut y = x;
    let mut ser = LANCZOS_C0;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    Ok(tmp + (SQRT_TWO_PI * ser / x).ln())
}

fn lgamma(x: f64) -> f64 {
    log_gamma(x).expect("argument checked positive by caller")
}

/// Log of the Mehta normalisation
/// `C = int prod_i e^{-q_i^2} prod_{i<j} |q_i - q_j|^{2 lambda} dq`.
pub fn mehta_constant(params: &SystemParams) -> f64 {
    let n = params.n() as f64;
    let lambda = params.lambda();
    let beta = params.beta();
    let gamma_ratio: f64 = (0..params.n())
        .map(|j| lgamma(1.0 + (j as f64 + 1.0) * lambda) - lgamma(1.0 + lambda))
        .sum();
    -0.5 * beta * std::f64::consts::LN_2 + 0.5 * n * (2.0 * std::f64::consts::PI).ln() + gamma_ratio
}

/// Mehta normalisation stored in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConstants {
    pub log_c: f64,
    pub params: SystemParams,
}

impl EnsembleConstants {
    pub fn new(params: SystemParams) -> Self {
        Self {
            log_c: mehta_constant(&params),
            params,
        }
    }
}

/// Log of the Selberg integral
/// `S_n(a, b, g) = int_{[0,1]^n} prod_i x_i^{a-1} (1-x_i)^{b-1} prod_{i<j} |x_i - x_j|^{2g} dx`.
pub fn selberg(n: usize, a: f64, b: f64, g: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("Selberg integral needs n >= 1"));
    }
    if !(a > 0.0 && b > 0.0 && g >= 0.0) || !(a + b + g).is_finite() {
        return Err(domain(format!(
            "Selberg integral needs a > 0, b > 0, g >= 0; got a={a}, b={b}, g={g}"
        )));
    }
    let nf = n as f64;
    Ok((0..n)
        .map(|j| {
            let j = j as f64;
            lgamma(a + j * g) + lgamma(b + j * g) + lgamma(1.0 + (j + 1.0) * g)
                - lgamma(a + b + (nf + j - 1.0) * g)
                - lgamma(1.0 + g)
        })
        .sum())
}
