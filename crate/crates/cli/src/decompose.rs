use csdecay::ermakov::{solve_scaling, ScalingTrajectory, SolverOptions};
use csdecay::ersak::decomposition_scan;
use csdecay::{Execution, SystemParams};

use crate::args::DecomposeArgs;
use crate::error::CliError;
use crate::output::Table;

pub const COLUMNS: [&str; 4] = ["tau", "classical", "memory", "interference"];

/// Terms normalised by `S(t_final)`, one row per split time.
pub fn run_decompose(args: &DecomposeArgs, exec: Execution) -> Result<Table, CliError> {
    let params = SystemParams::new(args.n, args.lambda)?;
    if !(args.t_final > 0.0) || !args.t_final.is_finite() {
        return Err(CliError::Usage(format!(
            "--t-final must be positive, got {}",
            args.t_final
        )));
    }
    if args.tau_count < 2 {
        return Err(CliError::Usage("--tau-count must be at least 2".into()));
    }
    let protocol = args.protocol.build()?;
    let span = [0.0, args.t_final];
    let traj = if protocol.is_analytic() {
        ScalingTrajectory::analytic(protocol, &span)?
    } else {
        solve_scaling(&protocol, &span, &SolverOptions::default())?
    };
    let last = (args.tau_count - 1) as f64;
    let taus: Vec<f64> = (0..args.tau_count)
        .map(|i| {
            if i + 1 == args.tau_count {
                args.t_final
            } else {
                args.t_final * i as f64 / last
            }
        })
        .collect();
    let rows = decomposition_scan(&params, &traj, args.t_final, &taus, !args.no_gauge, exec)?;

    let mut table = Table::new(COLUMNS.iter().map(|s| s.to_string()).collect());
    table.rows = rows
        .into_iter()
        .map(|(tau, d)| vec![tau, d.classical, d.memory, d.interference])
        .collect();
    Ok(table)
}
