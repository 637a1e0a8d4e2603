use crate::error::{domain, Result};

/// Particle number and coupling of the Calogero-Sutherland gas.
///
/// `lambda` doubles as the exclusion parameter `g` of generalized exclusion
/// statistics: 0 is free bosons, 1 is hard-core bosons, anything else a
/// Haldane anyon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    n: usize,
    lambda: f64,
}

impl SystemParams {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("particle number must be at least 1"));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(domain(format!(
                "coupling lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self { n, lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Long-time decay exponent `N [1 + lambda (N - 1)]`.
    pub fn beta(&self) -> f64 {
        let n = self.n as f64;
        n * (1.0 + self.lambda * (n - 1.0))
    }

    /// Number of pairs entering the Jastrow product.
    pub fn pairs(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// True when `|q_i - q_j|^{2 lambda}` is a polynomial, i.e. lambda is an
    /// integer and the Jastrow factor has no kinks.
    pub fn smooth_jastrow(&self) -> bool {
        self.lambda.fract() == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid() {
        assert!(SystemParams::new(0, 1.0).is_err());
        assert!(SystemParams::new(2, -0.1).is_err());
        assert!(SystemParams::new(2, f64::NAN).is_err());
        assert!(SystemParams::new(2, 0.0).is_ok());
    }

    #[test]
    fn beta_and_smoothness() {
        assert_eq!(SystemParams::new(3, 2.0).unwrap().beta(), 15.0);
        assert!(SystemParams::new(3, 2.0).unwrap().smooth_jastrow());
        assert!(!SystemParams::new(3, 0.5).unwrap().smooth_jastrow());
        assert_eq!(SystemParams::new(4, 1.0).unwrap().pairs(), 6);
    }
}
