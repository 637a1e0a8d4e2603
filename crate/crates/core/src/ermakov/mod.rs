//! Scaling dynamics `b(t)` of the self-similar evolution.
//!
//! The scaling factor obeys the Ermakov equation `b'' + K(t) b = b^-3` with
//! `b(0) = 1`, `b'(0) = 0`, and the conformal time is
//! `tau(t) = int_0^t ds / b(s)^2`.

mod dopri;
mod protocol;

pub use dopri::SolverOptions;
pub use protocol::{FrequencyProtocol, KTable};

use dopri::{hermite, integrate, step_from, Knot};
use protocol::Segment;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingState {
    pub t: f64,
    pub b: f64,
    pub b_dot: f64,
    pub tau: f64,
}

impl ScalingState {
    /// The stationary state at `t = 0`.
    pub const INITIAL: ScalingState = ScalingState {
        t: 0.0,
        b: 1.0,
        b_dot: 0.0,
        tau: 0.0,
    };

    pub fn new(t: f64, b: f64, b_dot: f64, tau: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Integrity { t, b });
        }
        if !(t.is_finite() && b_dot.is_finite() && tau.is_finite()) {
            return Err(domain("scaling state components must be finite"));
        }
        Ok(Self { t, b, b_dot, tau })
    }
}

/// Closed form after a sudden release at `t = 0`: `b = sqrt(1 + t^2)`,
/// `tau = arctan t`.
pub fn sudden_quench_scaling(t: f64) -> Result<ScalingState> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be finite and >= 0, got {t}")));
    }
    let b = t.hypot(1.0);
    Ok(ScalingState {
        t,
        b,
        b_dot: t / b,
        tau: t.atan(),
    })
}

/// Free expansion from `(b0, v0)` at `t0` with `K = 0` afterwards:
/// `b(t)^2 = (b0 + v0 dt)^2 + dt^2 / b0^2`. `tau0` is the conformal time
/// already accumulated at `t0`.
pub fn delayed_release_scaling(
    b0: f64,
    v0: f64,
    t0: f64,
    t: f64,
    tau0: f64,
) -> Result<ScalingState> {
    if !(b0 > 0.0) || !b0.is_finite() {
        return Err(domain(format!("b0 must be positive, got {b0}")));
    }
    if !(t >= t0) || !t.is_finite() {
        return Err(domain(format!("t = {t} precedes release time t0 = {t0}")));
    }
    let dt = t - t0;
    let u = b0 + v0 * dt;
    let inv_b0_sq = 1.0 / (b0 * b0);
    let b = u.hypot(dt / b0);
    let b_dot = (u * v0 + dt * inv_b0_sq) / b;
    // b^2 = A dt^2 + 2 B dt + C with A C - B^2 = 1
    let a = v0 * v0 + inv_b0_sq;
    let bb = b0 * v0;
    let tau = tau0 + (a * dt + bb).atan() - bb.atan();
    Ok(ScalingState { t, b, b_dot, tau })
}

/// Closed-form state for analytic protocols; `None` for tabulated ones.
pub fn analytic_state(protocol: &FrequencyProtocol, t: f64) -> Option<Result<ScalingState>> {
    match protocol {
        FrequencyProtocol::SuddenQuench => Some(sudden_quench_scaling(t)),
        FrequencyProtocol::DelayedRelease { t0 } => Some(if !(t >= 0.0) {
            Err(domain(format!("time must be >= 0, got {t}")))
        } else if t < *t0 {
            Ok(ScalingState {
                t,
                b: 1.0,
                b_dot: 0.0,
                tau: t,
            })
        } else {
            delayed_release_scaling(1.0, 0.0, *t0, t, *t0)
        }),
        FrequencyProtocol::Tabulated(_) => None,
    }
}

/// Diagnostics recorded with a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverMeta {
    pub method: String,
    pub step_policy: String,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Largest `|b'' + K b - b^-3|` seen on the refinement grid.
    pub max_residual: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingTrajectory {
    protocol: FrequencyProtocol,
    grid: Vec<f64>,
    states: Vec<ScalingState>,
    meta: SolverMeta,
    segments: Vec<Segment>,
    knots: Vec<Knot>,
}

fn check_grid(grid: &[f64], must_start_at_zero: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(domain("time grid is empty"));
    }
    if must_start_at_zero && grid[0] != 0.0 {
        return Err(domain(format!(
            "time grid must start at 0, starts at {}",
            grid[0]
        )));
    }
    if !(grid[0] >= 0.0) || grid.iter().any(|t| !t.is_finite()) {
        return Err(domain("time grid must be finite and non-negative"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("time grid must be strictly increasing"));
    }
    Ok(())
}

impl ScalingTrajectory {
    /// Trajectory built from closed forms (sudden quench, delayed release).
    pub fn analytic(protocol: FrequencyProtocol, grid: &[f64]) -> Result<Self> {
        check_grid(grid, false)?;
        if !protocol.is_analytic() {
            return Err(domain(
                "tabulated protocols have no closed-form scaling solution",
            ));
        }
        let states = grid
            .iter()
            .map(|&t| analytic_state(&protocol, t).expect("analytic protocol"))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            protocol,
            grid: grid.to_vec(),
            states,
            meta: SolverMeta {
                method: "closed-form".into(),
                step_policy: "exact".into(),
                accepted_steps: 0,
                rejected_steps: 0,
                max_residual: 0.0,
            },
            segments: Vec::new(),
            knots: Vec::new(),
        })
    }

    /// Build a trajectory from explicit states, e.g. perturbed data for tests.
    pub fn from_states(protocol: FrequencyProtocol, states: Vec<ScalingState>) -> Result<Self> {
        let grid: Vec<f64> = states.iter().map(|s| s.t).collect();
        check_grid(&grid, false)?;
        Ok(Self {
            protocol,
            grid,
            states,
            meta: SolverMeta {
                method: "external".into(),
                step_policy: "none".into(),
                accepted_steps: 0,
                rejected_steps: 0,
                max_residual: f64::NAN,
            },
            segments: Vec::new(),
            knots: Vec::new(),
        })
    }

    pub fn protocol(&self) -> &FrequencyProtocol {
        &self.protocol
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn states(&self) -> &[ScalingState] {
        &self.states
    }

    pub fn meta(&self) -> &SolverMeta {
        &self.meta
    }

    /// State at an arbitrary time: closed form for analytic protocols,
    /// otherwise a single integrator step from the preceding knot. States
    /// supplied through [`ScalingTrajectory::from_states`] are interpolated by
    /// cubic Hermite on the grid.
    pub fn state_at(&self, t: f64) -> Result<ScalingState> {
        if let Some(state) = analytic_state(&self.protocol, t) {
            return state;
        }
        let first = self.grid[0];
        let last = *self.grid.last().expect("non-empty grid");
        if !(t >= first && t <= last) {
            return Err(domain(format!(
                "t = {t} outside trajectory range [{first}, {last}]"
            )));
        }
        if self.knots.is_empty() {
            // externally supplied states: interpolate on the grid
            let i = self
                .grid
                .partition_point(|&x| x <= t)
                .saturating_sub(1)
                .min(self.grid.len() - 1);
            if self.grid[i] == t || i + 1 == self.grid.len() {
                return Ok(self.states[i]);
            }
            let knot = |s: &ScalingState| {
                let law = protocol::KLaw::Constant(self.protocol.k(s.t));
                Knot {
                    t: s.t,
                    y: [s.b, s.b_dot, s.tau],
                    f: dopri::rhs(&law, s.t, &[s.b, s.b_dot, s.tau]),
                    segment: 0,
                }
            };
            let y = hermite(&knot(&self.states[i]), &knot(&self.states[i + 1]), t);
            return ScalingState::new(t, y[0], y[1], y[2]);
        }
        let seg = self
            .segments
            .iter()
            .position(|s| t <= s.end)
            .unwrap_or(self.segments.len() - 1);
        let knots: Vec<&Knot> = self.knots.iter().filter(|k| k.segment == seg).collect();
        let j = knots.partition_point(|k| k.t < t);
        let y = if j == 0 {
            knots[0].y
        } else if j == knots.len() {
            knots[j - 1].y
        } else if knots[j].t == t {
            knots[j].y
        } else {
            step_from(&self.segments[seg].law, knots[j - 1], t)
        };
        ScalingState::new(t, y[0], y[1], y[2])
    }
}

/// Integrates the Ermakov equation numerically for any protocol.
///
/// The grid must start at `0`. Discontinuities of `K` and all grid points are
/// step endpoints, so grid states are never interpolated.
pub fn solve_scaling(
    protocol: &FrequencyProtocol,
    grid: &[f64],
    opts: &SolverOptions,
) -> Result<ScalingTrajectory> {
    check_grid(grid, true)?;
    let t_end = *grid.last().expect("non-empty grid");
    let segments = if t_end > 0.0 {
        protocol.segments(0.0, t_end)
    } else {
        Vec::new()
    };
    let (knots, stats) = if segments.is_empty() {
        (Vec::new(), dopri::Stats::default())
    } else {
        integrate(&segments, grid, [1.0, 0.0, 0.0], opts)?
    };

    let mut states = Vec::with_capacity(grid.len());
    let mut cursor = 0usize;
    for &t in grid {
        if t == 0.0 {
            states.push(ScalingState::INITIAL);
            continue;
        }
        while cursor + 1 < knots.len() && knots[cursor + 1].t < t {
            cursor += 1;
        }
        let y = knots[cursor + 1].y;
        states.push(ScalingState::new(t, y[0], y[1], y[2])?);
    }

    let max_residual = refinement_residual(&segments, &knots);
    Ok(ScalingTrajectory {
        protocol: protocol.clone(),
        grid: grid.to_vec(),
        states,
        meta: SolverMeta {
            method: "Dormand-Prince 5(4), steps end on grid points".into(),
            step_policy: format!("adaptive, atol {:e}, rtol {:e}", opts.atol, opts.rtol),
            accepted_steps: stats.accepted,
            rejected_steps: stats.rejected,
            max_residual,
        },
        segments,
        knots,
    })
}

/// Residual `|b'' + K b - b^-3|` at step midpoints, with `b''` from a centred
/// difference of `b_dot` stepped from the preceding knot.
fn refinement_residual(segments: &[Segment], knots: &[Knot]) -> f64 {
    const DELTA: f64 = 1e-4;
    let mut worst: f64 = 0.0;
    for (si, seg) in segments.iter().enumerate() {
        let ks: Vec<&Knot> = knots.iter().filter(|k| k.segment == si).collect();
        for pair in ks.windows(2) {
            let mid = 0.5 * (pair[0].t + pair[1].t);
            if mid - DELTA <= seg.start || mid + DELTA >= seg.end {
                continue;
            }
            let at = |t: f64| {
                let j = ks.partition_point(|k| k.t < t).clamp(1, ks.len() - 1);
                step_from(&seg.law, ks[j - 1], t)
            };
            let lo = at(mid - DELTA);
            let hi = at(mid + DELTA);
            let y = at(mid);
            let b_ddot = (hi[1] - lo[1]) / (2.0 * DELTA);
            let r = (b_ddot + seg.law.eval(mid) * y[0] - y[0].powi(-3)).abs();
            worst = worst.max(r);
        }
    }
    worst
}

/// `|b'' + K(t) b - b^-3|` at each interior grid point, `b''` by the
/// three-point (non-uniform) centred difference of the stored `b` values.
pub fn ermakov_residual(traj: &ScalingTrajectory) -> Result<Vec<f64>> {
    let s = traj.states();
    if s.len() < 5 {
        return Err(domain(format!(
            "residual needs at least 5 points, got {}",
            s.len()
        )));
    }
    Ok(s.windows(3)
        .map(|w| {
            let (a, m, c) = (&w[0], &w[1], &w[2]);
            let h0 = m.t - a.t;
            let h1 = c.t - m.t;
            let b_ddot = 2.0 * (h0 * c.b - (h0 + h1) * m.b + h1 * a.b) / (h0 * h1 * (h0 + h1));
            (b_ddot + traj.protocol().k(m.t) * m.b - m.b.powi(-3)).abs()
        })
        .collect())
}
