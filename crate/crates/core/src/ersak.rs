//! Ersak decomposition of the survival probability.
//!
//! `A(t) = A(t - tau) A(tau) + M(t, tau)` splits into
//! `S(t) = S(t - tau) S(tau) + |M|^2 + 2 Re[M^* A(t - tau) A(tau)]`.
//! The composition `A(t - tau) A(tau)` needs a time-invariant Hamiltonian,
//! so `K` must be constant on `(0, t]`.

use num_complex::Complex64;

use crate::ermakov::ScalingTrajectory;
use crate::error::{domain, Result};
use crate::exec::{try_map_slice, Execution};
use crate::params::SystemParams;
use crate::survival::log_survival_amplitude;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionTerms {
    /// `S(t - tau) S(tau)`
    pub classical: f64,
    /// `|M(t, tau)|^2`
    pub memory: f64,
    /// `2 Re[M^* A(t - tau) A(tau)]`, signed.
    pub interference: f64,
    /// `S(t)`
    pub total: f64,
}

impl DecompositionTerms {
    pub fn sum(&self) -> f64 {
        self.classical + self.memory + self.interference
    }
}

fn check_split(traj: &ScalingTrajectory, t: f64, tau_split: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("t must be finite and >= 0, got {t}")));
    }
    if !(0.0..=t).contains(&tau_split) {
        return Err(domain(format!("tau = {tau_split} outside [0, {t}]")));
    }
    if !traj.protocol().is_constant_on(0.0, t) {
        return Err(domain(format!(
            "K(t) varies on (0, {t}]; the Ersak composition needs a time-invariant Hamiltonian"
        )));
    }
    Ok(())
}

/// Log-amplitudes at `t`, `t - tau`, `tau`.
fn log_amplitudes(
    params: &SystemParams,
    traj: &ScalingTrajectory,
    t: f64,
    tau_split: f64,
    gauge: bool,
) -> Result<[Complex64; 3]> {
    check_split(traj, t, tau_split)?;
    let la = |x: f64| log_survival_amplitude(params, &traj.state_at(x)?, gauge);
    Ok([la(t)?, la(t - tau_split)?, la(tau_split)?])
}

/// `M(t, tau) = A(t) - A(t - tau) A(tau)` with ungauged amplitudes.
pub fn memory_amplitude(
    params: &SystemParams,
    traj: &ScalingTrajectory,
    t: f64,
    tau_split: f64,
) -> Result<Complex64> {
    if tau_split == 0.0 || tau_split == t {
        check_split(traj, t, tau_split)?;
        return Ok(Complex64::new(0.0, 0.0));
    }
    let [at, a1, a2] = log_amplitudes(params, traj, t, tau_split, false)?;
    Ok(at.exp() - (a1 + a2).exp())
}

/// Terms divided by `S(t)`, computed relative to `|A(t)|` so that they stay
/// representable when `S(t)` itself underflows.
fn normalized_terms(
    params: &SystemParams,
    traj: &ScalingTrajectory,
    t: f64,
    tau_split: f64,
    gauge: bool,
) -> Result<(DecompositionTerms, f64)> {
    let [at, a1, a2] = log_amplitudes(params, traj, t, tau_split, gauge)?;
    let log_norm = at.re;
    let unit_t = Complex64::new(0.0, at.im).exp();
    let product = (a1 + a2 - log_norm).exp();
    let boundary = tau_split == 0.0 || tau_split == t;
    let m = if boundary {
        Complex64::new(0.0, 0.0)
    } else {
        unit_t - product
    };
    let terms = DecompositionTerms {
        classical: product.norm_sqr(),
        memory: m.norm_sqr(),
        interference: 2.0 * (m.conj() * product).re,
        total: 1.0,
    };
    Ok((terms, 2.0 * log_norm))
}

/// Decomposition at one split time. `gauge` removes the dynamical phase from
/// every amplitude before `M` is formed.
pub fn decompose(
    params: &SystemParams,
    traj: &ScalingTrajectory,
    t: f64,
    tau_split: f64,
    gauge: bool,
) -> Result<DecompositionTerms> {
    let (n, log_s) = normalized_terms(params, traj, t, tau_split, gauge)?;
    let s = log_s.exp();
    Ok(DecompositionTerms {
        classical: n.classical * s,
        memory: n.memory * s,
        interference: n.interference * s,
        total: s,
    })
}

/// Terms normalised by `S(t)` over a grid of split times.
pub fn decomposition_scan(
    params: &SystemParams,
    traj: &ScalingTrajectory,
    t: f64,
    tau_grid: &[f64],
    gauge: bool,
    exec: Execution,
) -> Result<Vec<(f64, DecompositionTerms)>> {
    if tau_grid.is_empty() {
        return Err(domain("tau grid is empty"));
    }
    try_map_slice(exec, tau_grid, |&tau| {
        Ok((tau, normalized_terms(params, traj, t, tau, gauge)?.0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ermakov::{FrequencyProtocol, KTable};
    use crate::survival::survival_probability;
    use proptest::prelude::*;

    fn sudden() -> ScalingTrajectory {
        ScalingTrajectory::analytic(FrequencyProtocol::SuddenQuench, &[0.0, 1.0]).unwrap()
    }

    fn p(n: usize, lambda: f64) -> SystemParams {
        SystemParams::new(n, lambda).unwrap()
    }

    fn grid(t: f64, count: usize) -> Vec<f64> {
        (0..count)
            .map(|i| t * i as f64 / (count - 1) as f64)
            .collect()
    }

    #[test]
    fn memory_vanishes_at_endpoints() {
        let traj = sudden();
        let params = p(3, 1.0);
        assert_eq!(
            memory_amplitude(&params, &traj, 15.0, 0.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            memory_amplitude(&params, &traj, 15.0, 15.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(memory_amplitude(&params, &traj, 15.0, 15.1).is_err());
        assert!(memory_amplitude(&params, &traj, 15.0, -0.1).is_err());
    }

    #[test]
    fn split_at_zero_is_all_classical() {
        let traj = sudden();
        let params = p(2, 0.5);
        let d = decompose(&params, &traj, 7.0, 0.0, false).unwrap();
        let s = survival_probability(&params, &traj.state_at(7.0).unwrap()).unwrap();
        assert!((d.classical - s).abs() < 1e-15);
        assert_eq!(d.memory, 0.0);
        assert_eq!(d.interference, 0.0);
    }

    #[test]
    fn memory_dominates_for_three_hard_core_bosons() {
        let traj = sudden();
        let d = decompose(&p(3, 1.0), &traj, 15.0, 7.5, false).unwrap();
        assert!(d.memory / d.total > 0.9);
    }

    #[test]
    fn single_particle_has_no_dominant_term() {
        let traj = sudden();
        let t = 15.0;
        for gauge in [false, true] {
            for i in 0..=60 {
                let tau = t * (0.2 + 0.6 * i as f64 / 60.0);
                let d = decompose(&p(1, 0.0), &traj, t, tau, gauge).unwrap();
                for term in [d.classical, d.memory, d.interference] {
                    assert!(
                        term <= 0.95 * d.total,
                        "tau={tau} term={term} S={}",
                        d.total
                    );
                }
            }
        }
    }

    #[test]
    fn classical_term_is_gauge_independent() {
        let traj = sudden();
        let params = p(3, 2.0);
        for tau in [1.0, 4.0, 7.5, 12.0] {
            let a = decompose(&params, &traj, 15.0, tau, false).unwrap();
            let b = decompose(&params, &traj, 15.0, tau, true).unwrap();
            assert!((a.classical - b.classical).abs() <= 1e-15 * a.classical);
            assert!((a.total - b.total).abs() <= 1e-15 * a.total);
            assert!((a.sum() - a.total).abs() < 1e-10 && (b.sum() - b.total).abs() < 1e-10);
        }
    }

    #[test]
    fn memory_term_depends_on_gauge() {
        // tau(t) is not additive, so the dynamical phase does not cancel in M
        let traj = sudden();
        let a = decompose(&p(1, 0.0), &traj, 15.0, 7.5, false).unwrap();
        let b = decompose(&p(1, 0.0), &traj, 15.0, 7.5, true).unwrap();
        assert!((a.memory - b.memory).abs() > 0.1 * a.total);
    }

    #[test]
    fn regime_trend_with_gauged_amplitudes() {
        let traj = sudden();
        let t = 15.0;
        let memory: Vec<f64> = [(1, 0.0), (3, 1.0), (3, 2.0), (6, 2.0)]
            .iter()
            .map(|&(n, l)| {
                let d = decompose(&p(n, l), &traj, t, t / 2.0, true).unwrap();
                d.memory / d.total
            })
            .collect();
        assert!(memory.windows(2).all(|w| w[1] >= w[0]), "{memory:?}");
    }

    #[test]
    fn scan_rows_and_endpoints() {
        let traj = sudden();
        let taus = grid(15.0, 31);
        let rows =
            decomposition_scan(&p(3, 2.0), &traj, 15.0, &taus, true, Execution::Parallel).unwrap();
        assert_eq!(rows.len(), 31);
        assert!((rows[0].1.classical - 1.0).abs() < 1e-14);
        assert_eq!(rows[0].1.memory, 0.0);
        assert_eq!(rows[30].1.memory, 0.0);
        for (_, r) in &rows {
            assert!((r.sum() - 1.0).abs() < 1e-9);
        }
        assert!(
            decomposition_scan(&p(3, 2.0), &traj, 15.0, &[], true, Execution::Sequential).is_err()
        );
    }

    #[test]
    fn state_reconstruction_interval_grows_with_particle_number() {
        let traj = sudden();
        let taus = grid(15.0, 301);
        let frac = |n, l| {
            let rows =
                decomposition_scan(&p(n, l), &traj, 15.0, &taus, false, Execution::Sequential)
                    .unwrap();
            rows.iter().filter(|(_, r)| r.memory > 0.99).count() as f64 / rows.len() as f64
        };
        assert!(frac(6, 2.0) > frac(3, 2.0));
    }

    #[test]
    fn sequential_and_parallel_scans_agree() {
        let traj = sudden();
        let taus = grid(15.0, 101);
        let a = decomposition_scan(&p(6, 2.0), &traj, 15.0, &taus, true, Execution::Sequential)
            .unwrap();
        let b =
            decomposition_scan(&p(6, 2.0), &traj, 15.0, &taus, true, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn requires_time_invariant_hamiltonian() {
        let delayed = ScalingTrajectory::analytic(
            FrequencyProtocol::delayed_release(3.0).unwrap(),
            &[0.0, 20.0],
        )
        .unwrap();
        assert!(decompose(&p(2, 1.0), &delayed, 10.0, 4.0, false).is_err());
        // inside the trapped window the state is stationary: no memory
        let d = decompose(&p(2, 1.0), &delayed, 2.5, 1.0, false).unwrap();
        assert!(d.memory < 1e-28 && (d.classical - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tabulated_free_expansion_uses_interpolated_states() {
        let flat = FrequencyProtocol::Tabulated(KTable::new(vec![0.0], vec![0.0]).unwrap());
        let grid: Vec<f64> = (0..=150).map(|i| i as f64 * 0.1).collect();
        let traj = crate::ermakov::solve_scaling(&flat, &grid, &Default::default()).unwrap();
        let params = p(3, 1.0);
        let a = decompose(&params, &traj, 15.0, 6.25, true).unwrap();
        let b = decompose(&params, &sudden(), 15.0, 6.25, true).unwrap();
        assert!((a.memory - b.memory).abs() < 1e-6 * b.total);
    }

    proptest! {
        #[test]
        fn closure(n in 1usize..=6, lambda in 0.0f64..2.0, t in 0.0f64..30.0, frac in 0.0f64..=1.0, gauge: bool) {
            let tau = t * frac;
            let d = decompose(&p(n, lambda), &sudden(), t, tau, gauge).unwrap();
            prop_assert!((d.sum() - d.total).abs() <= 1e-10);
            prop_assert!(d.classical >= 0.0 && d.memory >= 0.0);
        }
    }
}
