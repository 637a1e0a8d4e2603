//! Command-line front end for `csdecay`.
//!
//! Every subcommand is a plain function from parsed arguments to a
//! [`output::Table`] or [`verify::Report`], so the binary only handles
//! thread setup and file output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod decompose;
pub mod error;
pub mod grid;
pub mod observables;
pub mod output;
pub mod plot;
pub mod protocol;
pub mod scan;
pub mod trajectory;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use csdecay::Execution;

use args::{Cli, Command, Format, OutputArgs};
use error::CliError;
use output::{write_csv, write_json, Table};
use plot::{gnuplot_script, script_path, PlotSpec};

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Io(io::Error::new(
                e.kind(),
                format!("cannot write {}: {e}", p.display()),
            ))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(
    table: &Table,
    out: &OutputArgs,
    plot: impl FnOnce() -> PlotSpec<'static>,
) -> Result<(), CliError> {
    if out.plot && (out.out.is_none() || out.format != Format::Csv) {
        return Err(CliError::Usage(
            "--plot needs --out FILE and CSV output".into(),
        ));
    }
    let sink = open_output(out.out.as_deref())?;
    match out.format {
        Format::Csv => write_csv(table, sink)?,
        Format::Json => write_json(table, sink)?,
    }
    if out.plot {
        let data = out.out.as_deref().expect("checked above");
        std::fs::write(script_path(data), gnuplot_script(table, &plot(), data))?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, exec: Execution) -> Result<(), CliError> {
    match &cli.command {
        Command::Scan(a) => {
            let table = scan::run_scan(a, exec)?;
            let y = a
                .lambda
                .iter()
                .map(|&l| scan::lambda_column("survival", l))
                .collect();
            emit(&table, &a.output, || PlotSpec {
                title: "survival probability",
                x: "t",
                y,
                log_x: true,
                log_y: true,
            })
        }
        Command::Decompose(a) => {
            let table = decompose::run_decompose(a, exec)?;
            let y = decompose::COLUMNS[1..]
                .iter()
                .map(|s| s.to_string())
                .collect();
            emit(&table, &a.output, || PlotSpec {
                title: "normalised decomposition",
                x: "tau",
                y,
                log_x: false,
                log_y: false,
            })
        }
        Command::Observables(a) => {
            let table = observables::run_observables(a, exec)?;
            let y = observables::COLUMNS[1..]
                .iter()
                .map(|s| s.to_string())
                .collect();
            emit(&table, &a.output, || PlotSpec {
                title: "window observables",
                x: "t",
                y,
                log_x: true,
                log_y: true,
            })
        }
        Command::Verify(a) => {
            let report = verify::run_verify(a, exec)?;
            write_json(&report, open_output(a.out.as_deref())?)?;
            if report.passed {
                Ok(())
            } else {
                let names: Vec<&str> = report.failures().map(|c| c.check.as_str()).collect();
                Err(CliError::Failure(format!(
                    "{} check(s) failed: {}",
                    names.len(),
                    names.join("; ")
                )))
            }
        }
    }
}

/// Runs a parsed command line on a worker pool sized by `--threads`.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    if cli.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Failure(format!("cannot start worker pool: {e}")))?;
        pool.install(|| dispatch(cli, Execution::Parallel))
    }
    #[cfg(not(feature = "parallel"))]
    {
        dispatch(cli, Execution::Sequential)
    }
}
