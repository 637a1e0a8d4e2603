use serde::Serialize;

use csdecay::ensembles::{mehta_constant, selberg};
use csdecay::ermakov::{sudden_quench_scaling, ScalingState};
use csdecay::observables::{nonescape_asymptote, nonescape_probability, RegionSpec};
use csdecay::oracle::{
    default_nodes, mehta_constant_numeric, selberg_quadrature, survival_monte_carlo_with,
    survival_quadrature_with,
};
use csdecay::survival::{survival_amplitude, survival_probability};
use csdecay::{Execution, SystemParams};

use crate::args::VerifyArgs;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub target: f64,
    pub value: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn relative(check: String, target: f64, value: f64, tolerance: f64) -> Check {
    let error = ((value - target) / target).abs();
    Check {
        check,
        target,
        value,
        error,
        tolerance,
        pass: error <= tolerance,
    }
}

fn absolute(check: String, target: f64, value: f64, tolerance: f64) -> Check {
    let error = (value - target).abs();
    Check {
        check,
        target,
        value,
        error,
        tolerance,
        pass: error <= tolerance,
    }
}

const LAMBDAS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
const ERF_1: f64 = 0.842_700_792_949_714_9;

/// Runs the oracle suite. Quadrature checks use relative errors, Monte Carlo
/// checks compare against quadrature with a tolerance of three standard
/// errors unless `--tolerance` is given.
pub fn run_verify(args: &VerifyArgs, exec: Execution) -> Result<Report, CliError> {
    if let Some(tol) = args.tolerance {
        if !(tol >= 0.0) {
            return Err(CliError::Usage(format!(
                "--tolerance must be non-negative, got {tol}"
            )));
        }
    }
    let p = |n: usize, l: f64| SystemParams::new(n, l).map_err(CliError::from);
    let sq = |t: f64| sudden_quench_scaling(t).map_err(CliError::from);
    let mut checks = Vec::new();

    // survival probability and amplitude against quadrature
    let mut cases = vec![(1usize, 0.0)];
    for n in 2..=3 {
        cases.extend(LAMBDAS.iter().map(|&l| (n, l)));
    }
    for &(n, l) in &cases {
        let params = p(n, l)?;
        for t in [0.5, 2.0] {
            let state = sq(t)?;
            let q = survival_quadrature_with(&params, &state, default_nodes(&params), exec)?;
            let exact = survival_probability(&params, &state)?;
            checks.push(relative(
                format!("survival N={n} lambda={l} t={t}"),
                exact,
                q.value,
                1e-6,
            ));
        }
    }
    for (n, l, t) in [(2, 1.0, 1.0), (3, 0.5, 2.0), (3, 2.0, 1.0)] {
        let params = p(n, l)?;
        let state = sq(t)?;
        let q = survival_quadrature_with(&params, &state, default_nodes(&params), exec)?;
        let exact = survival_amplitude(&params, &state, false)?;
        let amp = q.amplitude.expect("quadrature returns an amplitude");
        let error = (amp - exact).norm() / exact.norm();
        checks.push(Check {
            check: format!("amplitude phase N={n} lambda={l} t={t}"),
            target: exact.arg(),
            value: amp.arg(),
            error,
            tolerance: 1e-6,
            pass: error <= 1e-6,
        });
    }
    let spot = survival_quadrature_with(&p(2, 1.0)?, &sq(1.0)?, 120, exec)?;
    checks.push(absolute(
        "survival spot value N=2 lambda=1 t=1".into(),
        0.64,
        spot.value,
        1e-8,
    ));

    // normalisation constants
    checks.push(relative(
        "mehta N=1".into(),
        mehta_constant(&p(1, 0.0)?).exp(),
        mehta_constant_numeric(&p(1, 0.0)?, 40)?.value,
        1e-6,
    ));
    for n in 2..=3 {
        for l in [0.5, 1.0, 2.0] {
            let params = p(n, l)?;
            let numeric = mehta_constant_numeric(&params, default_nodes(&params))?;
            checks.push(relative(
                format!("mehta N={n} lambda={l}"),
                mehta_constant(&params).exp(),
                numeric.value,
                1e-6,
            ));
        }
    }
    checks.push(relative(
        "selberg S_2(1,1,1)".into(),
        1.0 / 6.0,
        selberg_quadrature(2, 1.0, 1.0, 1.0, 40)?.value,
        1e-6,
    ));
    checks.push(relative(
        "selberg S_2(1,1,1/2)".into(),
        1.0 / 3.0,
        selberg_quadrature(2, 1.0, 1.0, 0.5, 40)?.value,
        1e-6,
    ));
    for g in [0.5, 1.0, 2.0] {
        let exact = selberg(3, 1.0, 1.0, g)?.exp();
        checks.push(relative(
            format!("selberg S_3(1,1,{g})"),
            exact,
            selberg_quadrature(3, 1.0, 1.0, g, 40)?.value,
            1e-6,
        ));
    }

    // non-escape probability
    let v = nonescape_probability(&p(1, 0.0)?, &ScalingState::INITIAL, RegionSpec::new(2.0)?)?;
    checks.push(absolute("nonescape N=1 a=2 t=0".into(), ERF_1, v, 1e-10));
    let v = nonescape_probability(&p(3, 0.5)?, &sq(2.0)?, RegionSpec::whole_line())?;
    checks.push(absolute(
        "nonescape whole line N=3 lambda=0.5".into(),
        1.0,
        v,
        1e-6,
    ));
    let far = ScalingState::new(0.0, 1e3, 0.0, 0.0)?;
    for l in [0.5, 1.0] {
        let params = p(2, l)?;
        let region = RegionSpec::new(1.0)?;
        let exact = nonescape_probability(&params, &far, region)?;
        let asym = nonescape_asymptote(&params, &far, region)?;
        checks.push(relative(
            format!("nonescape saturation N=2 lambda={l} b=1000"),
            asym,
            exact,
            1e-4,
        ));
    }

    // Monte Carlo against quadrature
    for (n, l, t) in [(2, 1.0, 1.0), (3, 0.5, 1.0), (3, 2.0, 0.5), (2, 0.5, 2.0)] {
        let params = p(n, l)?;
        let state = sq(t)?;
        let q = survival_quadrature_with(&params, &state, default_nodes(&params), exec)?;
        let mc = survival_monte_carlo_with(&params, &state, args.samples, args.seed, exec)?;
        let tol = args.tolerance.unwrap_or(3.0 * mc.std_error);
        checks.push(absolute(
            format!("monte carlo N={n} lambda={l} t={t}"),
            q.value,
            mc.value,
            tol,
        ));
    }
    let params = p(6, 2.0)?;
    let state = sq(0.3)?;
    let mc = survival_monte_carlo_with(&params, &state, args.samples, args.seed, exec)?;
    let tol = args.tolerance.unwrap_or(3.0 * mc.std_error);
    checks.push(absolute(
        "monte carlo N=6 lambda=2 t=0.3".into(),
        survival_probability(&params, &state)?,
        mc.value,
        tol,
    ));

    let passed = checks.iter().all(|c| c.pass);
    Ok(Report {
        seed: args.seed,
        samples: args.samples,
        passed,
        checks,
    })
}
