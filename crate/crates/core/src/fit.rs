//! Least-squares power-law fits.

use crate::error::{domain, Result};

/// Slope of the least-squares line through `(x, y)`.
pub fn linear_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(domain(
            "slope fit needs at least two (x, y) pairs of equal length",
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(domain("slope fit needs distinct x values"));
    }
    Ok(sxy / sxx)
}

/// Exponent `p` of `y ~ t^p`, given `ln y` (so underflowed values can be fit).
pub fn loglog_slope(t: &[f64], log_y: &[f64]) -> Result<f64> {
    if t.iter().any(|&v| !(v > 0.0)) {
        return Err(domain("log-log fit needs positive times"));
    }
    let lt: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    linear_slope(&lt, log_y)
}
