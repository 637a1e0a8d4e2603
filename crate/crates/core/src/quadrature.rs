//! Gaussian quadrature rules and deterministic multi-dimensional drivers.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::exec::{map_range, Execution};
use crate::summation::ComplexSum;

const NEWTON_EPS: f64 = 3.0e-15;
const NEWTON_MAXIT: usize = 100;

/// A one-dimensional quadrature rule with ascending nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Gauss-Hermite rule for the weight `exp(-x^2)` on the real line.
    pub fn gauss_hermite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("quadrature rule needs at least one node"));
        }
        // pi^{-1/4}
        const PIM4: f64 = 0.751_125_544_464_942_5;
        let nf = n as f64;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let m = n.div_ceil(2);
        let mut z = 0.0_f64;
        for i in 0..m {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..NEWTON_MAXIT {
                // orthonormal Hermite recurrence
                let mut p1 = PIM4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= NEWTON_EPS * z.abs().max(1.0) {
                    break;
                }
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        if n % 2 == 1 {
            x[m - 1] = 0.0;
        }
        x.reverse();
        w.reverse();
        Ok(Self {
            nodes: x,
            weights: w,
        })
    }

    /// Gauss-Legendre rule on `[-1, 1]`.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("quadrature rule needs at least one node"));
        }
        let nf = n as f64;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..NEWTON_MAXIT {
                let mut p1 = 1.0;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
                }
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= NEWTON_EPS {
                    break;
                }
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            w[n - 1 - i] = w[i];
        }
        if n % 2 == 1 {
            x[m - 1] = 0.0;
        }
        Ok(Self {
            nodes: x,
            weights: w,
        })
    }

    /// Affine map of a `[-1, 1]` rule onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> Self {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Self {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }

    /// Substitutes `x -> s x`: a Gauss-Hermite rule becomes one for the weight
    /// `exp(-x^2 / s^2)`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|x| s * x).collect(),
            weights: self.weights.iter().map(|w| s * w).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Tensor-product sum `sum_{i_1..i_d} w_{i_1}..w_{i_d} f(x_{i_1},..,x_{i_d})`.
///
/// Blocks are the outermost-axis nodes; each block is summed sequentially
/// with compensation and block totals are folded in index order.
pub fn tensor_product<F>(rule: &Rule, dim: usize, exec: Execution, f: F) -> Complex64
where
    F: Fn(&[f64]) -> Complex64 + Sync + Send,
{
    assert!(dim >= 1, "tensor product needs dim >= 1");
    let n = rule.len();
    let blocks = map_range(exec, n, |i| {
        let mut point = vec![0.0; dim];
        point[0] = rule.nodes[i];
        let mut acc = ComplexSum::new();
        if dim == 1 {
            acc.add(f(&point));
        } else {
            let mut idx = vec![0usize; dim - 1];
            loop {
                let mut w = 1.0;
                for (k, &j) in idx.iter().enumerate() {
                    point[k + 1] = rule.nodes[j];
                    w *= rule.weights[j];
                }
                acc.add(w * f(&point));
                // odometer
                let mut k = dim - 2;
                loop {
                    idx[k] += 1;
                    if idx[k] < n {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                }
                if idx.iter().all(|&j| j == 0) {
                    break;
                }
            }
        }
        rule.weights[i] * acc.value()
    });
    blocks.into_iter().collect::<ComplexSum>().value()
}

/// Integral of a permutation-symmetric `f` over `[lo, hi]^dim` by restricting
/// to the ordered sector `x_1 < x_2 < .. < x_dim` and multiplying by `dim!`.
///
/// The sector is parametrised by the unit cube through
/// `x_1 = lo + (hi - lo) u_1`, `x_{k+1} = x_k + (hi - x_k) u_{k+1}`, so the
/// coalescence planes `x_i = x_j` only appear on the boundary and kinks of
/// `|x_i - x_j|^p` never fall inside a quadrature cell. `unit_rule` is a
/// Gauss-Legendre rule on `[-1, 1]`.
pub fn ordered_sector<F>(
    unit_rule: &Rule,
    dim: usize,
    lo: f64,
    hi: f64,
    exec: Execution,
    f: F,
) -> Complex64
where
    F: Fn(&[f64]) -> Complex64 + Sync + Send,
{
    assert!(dim >= 1, "ordered sector needs dim >= 1");
    let rule = unit_rule.mapped(0.0, 1.0);
    let factorial: f64 = (1..=dim).map(|k| k as f64).product();

    fn nest<F: Fn(&[f64]) -> Complex64>(
        rule: &Rule,
        level: usize,
        hi: f64,
        x: &mut [f64],
        weight: f64,
        acc: &mut ComplexSum,
        f: &F,
    ) {
        if level == x.len() {
            acc.add(weight * f(x));
            return;
        }
        let prev = x[level - 1];
        let span = hi - prev;
        for (u, w) in rule.nodes.iter().zip(&rule.weights) {
            x[level] = prev + span * u;
            nest(rule, level + 1, hi, x, weight * w * span, acc, f);
        }
    }

    let blocks = map_range(exec, rule.len(), |i| {
        let mut x = vec![0.0; dim];
        x[0] = lo + (hi - lo) * rule.nodes[i];
        let mut acc = ComplexSum::new();
        nest(
            &rule,
            1,
            hi,
            &mut x,
            rule.weights[i] * (hi - lo),
            &mut acc,
            &f,
        );
        acc.value()
    });
    factorial * blocks.into_iter().collect::<ComplexSum>().value()
}
