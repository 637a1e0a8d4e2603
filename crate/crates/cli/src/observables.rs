use csdecay::exec::map_slice;
use csdecay::fit::loglog_slope;
use csdecay::observables::{
    integrated_density, integrated_density_asymptote, nonescape_asymptote, nonescape_nodes,
    nonescape_probability_with, RegionSpec,
};
use csdecay::{Execution, SystemParams};

use crate::args::ObservablesArgs;
use crate::error::CliError;
use crate::output::Table;
use crate::trajectory::states_on;

pub const COLUMNS: [&str; 5] = ["t", "nonescape", "nonescape_asymptote", "p", "p_asymptote"];

/// One row per time, followed by log-log slopes of the non-escape
/// probability and of `p(t)` fitted over `[fit_from, last time]`.
pub fn run_observables(args: &ObservablesArgs, exec: Execution) -> Result<Table, CliError> {
    let params = SystemParams::new(args.n, args.lambda)?;
    let region = RegionSpec::new(args.a)?;
    if !args.a.is_finite() {
        return Err(CliError::Usage("--a must be finite".into()));
    }
    let protocol = args.protocol.build()?;
    let times = args.grid.points();
    let states = states_on(&protocol, &times)?;
    let nodes = nonescape_nodes(&params);

    let rows = map_slice(exec, &states, |s| -> csdecay::Result<Vec<f64>> {
        Ok(vec![
            s.t,
            nonescape_probability_with(&params, s, region, nodes, Execution::Sequential)?,
            nonescape_asymptote(&params, s, region)?,
            integrated_density(s, region, args.n),
            integrated_density_asymptote(s, region, args.n),
        ])
    });
    let mut table = Table::new(COLUMNS.iter().map(|s| s.to_string()).collect());
    table.rows = rows.into_iter().collect::<csdecay::Result<_>>()?;

    let stop = args.grid.stop;
    let from = args.fit_from.unwrap_or(stop / 10.0);
    let window: Vec<&Vec<f64>> = table
        .rows
        .iter()
        .filter(|r| r[0] >= from && r[0] > 0.0)
        .collect();
    if window.len() < 2 {
        return Err(CliError::Usage(format!(
            "fewer than two grid points in the fit window [{from}, {stop}]"
        )));
    }
    let t: Vec<f64> = window.iter().map(|r| r[0]).collect();
    let slope = |col: usize| {
        let ly: Vec<f64> = window.iter().map(|r| r[col].ln()).collect();
        loglog_slope(&t, &ly).unwrap_or(f64::NAN)
    };
    let (slope_p, slope_n) = (slope(3), slope(1));
    table.summary = vec![
        ("fit_start".into(), t[0]),
        ("fit_stop".into(), *t.last().expect("non-empty window")),
        ("slope_nonescape".into(), slope_n),
        ("slope_p".into(), slope_p),
        ("beta".into(), params.beta()),
    ];
    Ok(table)
}
