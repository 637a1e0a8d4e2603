//! Dormand-Prince 5(4) integrator specialised to the Ermakov system
//! `y = (b, b_dot, tau)`, `y' = (b_dot, -K(t) b + b^-3, b^-2)`.

use super::protocol::{KLaw, Segment};
use crate::error::{Error, Result};

pub(crate) type State = [f64; 3];

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Tolerances and step policy for [`super::solve_scaling`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub atol: f64,
    pub rtol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-9,
            initial_step: 1e-3,
            max_step: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }
}

/// Accepted step endpoint: time, state and right-hand side there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Knot {
    pub t: f64,
    pub y: State,
    pub f: State,
    /// Index of the segment the step leading to (or starting from) this knot
    /// belongs to.
    pub segment: usize,
}

#[inline]
pub(crate) fn rhs(law: &KLaw, t: f64, y: &State) -> State {
    let b = y[0];
    let inv2 = 1.0 / (b * b);
    [y[1], -law.eval(t) * b + inv2 / b, inv2]
}

/// Cubic Hermite interpolation between two knots.
pub(crate) fn hermite(k0: &Knot, k1: &Knot, t: f64) -> State {
    let h = k1.t - k0.t;
    let s = (t - k0.t) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    std::array::from_fn(|i| h00 * k0.y[i] + h10 * h * k0.f[i] + h01 * k1.y[i] + h11 * h * k1.f[i])
}

/// One Dormand-Prince step of size `h` from `(t, y)` with `f = rhs(t, y)`.
/// Returns the fifth-order solution, its right-hand side and the embedded
/// error estimate.
fn dp_step(law: &KLaw, t: f64, y: &State, f: &State, h: f64) -> (State, State, State) {
    let mut k = [[0.0; 3]; 7];
    k[0] = *f;
    for s in 1..7 {
        let mut ys = *y;
        for (i, yi) in ys.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..s {
                acc += A[s][j] * k[j][i];
            }
            *yi += h * acc;
        }
        k[s] = rhs(law, t + C[s] * h, &ys);
    }
    let mut y_new = *y;
    let mut err = [0.0; 3];
    for i in 0..3 {
        let mut acc = 0.0;
        let mut e = 0.0;
        for j in 0..7 {
            if j < 6 {
                acc += A[6][j] * k[j][i];
            }
            e += E[j] * k[j][i];
        }
        y_new[i] += h * acc;
        err[i] = h * e;
    }
    (y_new, k[6], err)
}

/// State at `t` reached by a single step from `knot`. Accurate to the solver
/// tolerance when `t` lies inside an accepted step that starts at `knot`.
pub(crate) fn step_from(law: &KLaw, knot: &Knot, t: f64) -> State {
    if t == knot.t {
        return knot.y;
    }
    dp_step(law, knot.t, &knot.y, &knot.f, t - knot.t).0
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates across `segments` (contiguous, ascending) from `y0`, stopping
/// exactly at every segment boundary and at every time in `stops`
/// (ascending). Returns all accepted knots, the first being the initial
/// state.
pub(crate) fn integrate(
    segments: &[Segment],
    stops: &[f64],
    y0: State,
    opts: &SolverOptions,
) -> Result<(Vec<Knot>, Stats)> {
    let mut stats = Stats::default();
    let mut knots = Vec::new();
    let mut y = y0;
    let mut h = opts.initial_step;
    let mut next_stop = 0usize;
    for (si, seg) in segments.iter().enumerate() {
        let mut t = seg.start;
        let mut f = rhs(&seg.law, t, &y);
        knots.push(Knot {
            t,
            y,
            f,
            segment: si,
        });
        let mut last_was_rejected = false;
        while t < seg.end {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::Solver {
                    message: format!("exceeded {} steps", opts.max_steps),
                    last_good_time: t,
                });
            }
            let min_step = 16.0 * f64::EPSILON * t.abs().max(1.0);
            if h < min_step {
                return Err(Error::Solver {
                    message: format!("step size underflow (h = {h:e})"),
                    last_good_time: t,
                });
            }
            h = h.min(opts.max_step);
            while next_stop < stops.len() && stops[next_stop] <= t {
                next_stop += 1;
            }
            let target = match stops.get(next_stop) {
                Some(&s) if s < seg.end => s,
                _ => seg.end,
            };
            let last = t + h >= target;
            let step = if last { target - t } else { h };

            let (y_new, f_new, err_vec) = dp_step(&seg.law, t, &y, &f, step);
            let mut err: f64 = 0.0;
            for i in 0..3 {
                let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max(err_vec[i].abs() / scale);
            }
            if !err.is_finite() || !y_new.iter().all(|v| v.is_finite()) {
                stats.rejected += 1;
                h = step * 0.2;
                last_was_rejected = true;
                continue;
            }
            if err <= 1.0 {
                if y_new[0] <= 0.0 {
                    return Err(Error::Integrity {
                        t: t + step,
                        b: y_new[0],
                    });
                }
                stats.accepted += 1;
                t = if last { target } else { t + step };
                y = y_new;
                f = f_new;
                knots.push(Knot {
                    t,
                    y,
                    f,
                    segment: si,
                });
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                let grow = if last_was_rejected {
                    grow.min(1.0)
                } else {
                    grow
                };
                // keep the proposal from the unclipped step size
                h = if last {
                    h.max(step * grow)
                } else {
                    step * grow
                };
                last_was_rejected = false;
            } else {
                stats.rejected += 1;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                last_was_rejected = true;
            }
        }
    }
    Ok((knots, stats))
}
