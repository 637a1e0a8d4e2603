use csdecay::ermakov::{
    analytic_state, solve_scaling, FrequencyProtocol, ScalingState, SolverOptions,
};

use crate::error::CliError;

/// Scaling states on `times` (ascending, non-negative), from closed forms
/// where available and from the ODE solver otherwise.
pub fn states_on(
    protocol: &FrequencyProtocol,
    times: &[f64],
) -> Result<Vec<ScalingState>, CliError> {
    if protocol.is_analytic() {
        return times
            .iter()
            .map(|&t| {
                analytic_state(protocol, t)
                    .expect("analytic protocol")
                    .map_err(CliError::from)
            })
            .collect();
    }
    let prepend = times.first().is_some_and(|&t| t > 0.0);
    let mut grid = Vec::with_capacity(times.len() + 1);
    if prepend {
        grid.push(0.0);
    }
    grid.extend_from_slice(times);
    let traj = solve_scaling(protocol, &grid, &SolverOptions::default())?;
    Ok(traj.states()[usize::from(prepend)..].to_vec())
}
