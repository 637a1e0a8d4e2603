use csdecay::exec::map_slice;
use csdecay::survival::{
    alpha, log_long_time_asymptote, log_survival_probability, short_time_series,
};
use csdecay::{Execution, SystemParams};

use crate::args::ScanArgs;
use crate::error::CliError;
use crate::output::Table;
use crate::trajectory::states_on;

pub const STATE_COLUMNS: [&str; 5] = ["t", "b", "b_dot", "tau", "alpha"];
pub const PER_LAMBDA_COLUMNS: [&str; 4] = ["survival", "log_survival", "short_time", "asymptote"];

/// Column name for quantity `name` at interaction strength `lambda`, e.g.
/// `survival_0.5`.
pub fn lambda_column(name: &str, lambda: f64) -> String {
    format!("{name}_{lambda}")
}

/// Columns `t, b, b_dot, tau, alpha`, then for every lambda
/// `survival_L, log_survival_L, short_time_L, asymptote_L`. The asymptote
/// `(2/t)^beta` is infinite at `t = 0`.
pub fn run_scan(args: &ScanArgs, exec: Execution) -> Result<Table, CliError> {
    let params = args
        .lambda
        .iter()
        .map(|&l| SystemParams::new(args.n, l))
        .collect::<csdecay::Result<Vec<_>>>()?;
    let protocol = args.protocol.build()?;
    let times = args.grid.points();
    let states = states_on(&protocol, &times)?;

    let mut columns: Vec<String> = STATE_COLUMNS.iter().map(|s| s.to_string()).collect();
    for &l in &args.lambda {
        columns.extend(PER_LAMBDA_COLUMNS.iter().map(|c| lambda_column(c, l)));
    }
    let mut table = Table::new(columns);

    let rows = map_slice(exec, &states, |s| -> csdecay::Result<Vec<f64>> {
        let mut row = vec![s.t, s.b, s.b_dot, s.tau, alpha(s)?];
        for p in &params {
            let log_s = log_survival_probability(p, s)?;
            let asym = if s.t > 0.0 {
                log_long_time_asymptote(p, s.t)?.exp()
            } else {
                f64::INFINITY
            };
            row.extend([log_s.exp(), log_s, short_time_series(p, s.t), asym]);
        }
        Ok(row)
    });
    table.rows = rows.into_iter().collect::<csdecay::Result<_>>()?;
    Ok(table)
}
