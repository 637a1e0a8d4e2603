//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use csdecay::ensembles::{mehta_constant, selberg};
use csdecay::ermakov::{
    solve_scaling, sudden_quench_scaling, FrequencyProtocol, ScalingTrajectory, SolverOptions,
};
use csdecay::ersak::{decompose, decomposition_scan};
use csdecay::fit::loglog_slope;
use csdecay::observables::{nonescape_probability, RegionSpec};
use csdecay::oracle::{
    default_nodes, mehta_constant_numeric, selberg_quadrature, survival_quadrature,
};
use csdecay::survival::{log_survival_probability, survival_probability};
use csdecay::{Execution, SystemParams};
use csdecay_cli::args::{Cli, DecomposeArgs, Format, ObservablesArgs, OutputArgs, ScanArgs};
use csdecay_cli::protocol::ProtocolSpec;
use csdecay_cli::{decompose::run_decompose, observables::run_observables, scan::run_scan};

type Outcome = (bool, String);

fn params(n: usize, lambda: f64) -> SystemParams {
    SystemParams::new(n, lambda).unwrap()
}

fn no_output() -> OutputArgs {
    OutputArgs {
        out: None,
        format: Format::Csv,
        plot: false,
    }
}

fn max_by(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn closed_form_vs_quadrature() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    for n in 1..=3 {
        for lambda in [0.0, 0.5, 1.0, 2.0] {
            let p = params(n, lambda);
            for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
                let state = sudden_quench_scaling(t).unwrap();
                let q = survival_quadrature(&p, &state, default_nodes(&p))
                    .unwrap()
                    .value;
                let exact = survival_probability(&p, &state).unwrap();
                let err = (q / exact - 1.0).abs();
                if err > worst {
                    worst = err;
                    worst_case = format!("N={n} lambda={lambda} t={t}");
                }
            }
        }
    }
    let spot = survival_quadrature(&params(2, 1.0), &sudden_quench_scaling(1.0).unwrap(), 120)
        .unwrap()
        .value;
    let spot_err = (spot - 16.0 / 25.0).abs();
    let secs = start.elapsed().as_secs_f64();
    let ok = worst <= 1e-6 && spot_err <= 1e-8 && secs <= 60.0;
    (ok, format!("max rel err {worst:.2e} at {worst_case} (tol 1e-6); |S_2,1(1) - 0.64| = {spot_err:.2e} (tol 1e-8); {secs:.1} s (limit 60 s)"))
}

fn power_law_slopes() -> Outcome {
    let lambdas = vec![0.0, 0.5, 1.0, 1.5, 2.0];
    let args = ScanArgs {
        n: 2,
        lambda: lambdas.clone(),
        protocol: ProtocolSpec::Sudden,
        grid: "log:100:1000:60".parse().unwrap(),
        output: no_output(),
    };
    let table = run_scan(&args, Execution::Parallel).unwrap();
    let t = table.column("t").unwrap();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for &l in &lambdas {
        let beta = 2.0 * (1.0 + l);
        let slope = loglog_slope(&t, &table.column(&format!("log_survival_{l}")).unwrap()).unwrap();
        let dev = (slope / -beta - 1.0).abs();
        worst = worst.max(dev);
        parts.push(format!("{slope:.4}"));
    }
    (
        worst <= 0.01,
        format!(
            "slopes [{}] vs -2(1+lambda); max rel dev {worst:.2e} (tol 1e-2)",
            parts.join(", ")
        ),
    )
}

fn short_time_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = 1e-3;
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    for _ in 0..10 {
        let n = rng.random_range(1..=8usize);
        let lambda = rng.random_range(0.0..=3.0);
        let p = params(n, lambda);
        let ls = log_survival_probability(&p, &sudden_quench_scaling(t).unwrap()).unwrap();
        let ratio = -ls.exp_m1() / (t * t);
        let err = (ratio / (p.beta() / 8.0) - 1.0).abs();
        if err > worst {
            worst = err;
            worst_case = format!("N={n} lambda={lambda:.3}");
        }
    }
    (
        worst <= 1e-5,
        format!("max rel dev of (1-S)/t^2 from beta/8 is {worst:.2e} at {worst_case} (tol 1e-5)"),
    )
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(1..=8usize);
        let lambda: f64 = rng.random_range(0.0..=1.0);
        let gamma: f64 = rng.random_range(0.0..=2.0);
        let state = sudden_quench_scaling(rng.random_range(0.0..=20.0)).unwrap();
        let s = |l: f64| survival_probability(&params(n, l), &state).unwrap();
        let plain = s(0.0).powf(1.0 - lambda) * s(1.0).powf(lambda);
        let general = s(gamma).powf(1.0 - lambda) * s(gamma + 1.0).powf(lambda);
        worst = worst.max((plain / s(lambda) - 1.0).abs());
        worst = worst.max((general / s(gamma + lambda) - 1.0).abs());
    }
    (
        worst <= 1e-12,
        format!("max rel violation over 100 tuples {worst:.2e} (tol 1e-12)"),
    )
}

fn decomposition_regimes() -> Outcome {
    let t = 15.0;
    let traj = ScalingTrajectory::analytic(FrequencyProtocol::SuddenQuench, &[0.0, t]).unwrap();
    let taus: Vec<f64> = (0..=300).map(|i| t * i as f64 / 300.0).collect();

    let mut closure = 0.0f64;
    for (n, l) in [(1, 0.0), (3, 1.0), (3, 2.0), (6, 2.0)] {
        let p = params(n, l);
        for &tau in taus.iter().step_by(7) {
            for gauge in [false, true] {
                let d = decompose(&p, &traj, t, tau, gauge).unwrap();
                closure = closure.max(((d.sum() - d.total) / d.total).abs());
            }
        }
    }

    let fig_panel = |n: usize, l: f64| {
        let args = DecomposeArgs {
            n,
            lambda: l,
            protocol: ProtocolSpec::Sudden,
            t_final: t,
            tau_count: 301,
            no_gauge: false,
            output: no_output(),
        };
        run_decompose(&args, Execution::Parallel)
            .unwrap()
            .column("memory")
            .unwrap()
    };
    let peak = max_by(fig_panel(3, 1.0));

    let dominance = |n: usize, l: f64, gauge: bool| {
        let rows =
            decomposition_scan(&params(n, l), &traj, t, &taus, gauge, Execution::Parallel).unwrap();
        rows.iter().filter(|(_, d)| d.memory > 0.99).count() as f64 / rows.len() as f64
    };
    let (f3, f6) = (dominance(3, 2.0, false), dominance(6, 2.0, false));
    let (g3, g6) = (dominance(3, 2.0, true), dominance(6, 2.0, true));
    let ok = closure <= 1e-10 && peak > 0.9 && f6 > f3;
    (
        ok,
        format!(
            "closure rel err {closure:.2e} (tol 1e-10); max memory/S (N=3, lambda=1) {peak:.3} (> 0.9); \
             dominance fraction N=6 {f6:.3} vs N=3 {f3:.3} (phase-gauged: {g6:.3} vs {g3:.3})"
        ),
    )
}

fn ensemble_constants() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for l in [0.0, 0.5, 1.0, 1.5, 2.0] {
            let p = params(n, l);
            let numeric = mehta_constant_numeric(&p, default_nodes(&p)).unwrap().value;
            worst = worst.max((numeric / mehta_constant(&p).exp() - 1.0).abs());
        }
    }
    let s1 = selberg_quadrature(2, 1.0, 1.0, 1.0, 40).unwrap().value;
    let s_half = selberg_quadrature(2, 1.0, 1.0, 0.5, 40).unwrap().value;
    let e1 = (s1 * 6.0 - 1.0).abs();
    let e_half = (s_half * 3.0 - 1.0).abs();
    let formula = (selberg(2, 1.0, 1.0, 1.0).unwrap().exp() * 6.0 - 1.0)
        .abs()
        .max((selberg(2, 1.0, 1.0, 0.5).unwrap().exp() * 3.0 - 1.0).abs());
    let ok = worst <= 1e-6 && e1 <= 1e-6 && e_half <= 1e-6 && formula <= 1e-6;
    (ok, format!("Mehta max rel err {worst:.2e}; S_2(1,1,1) {e1:.2e}, S_2(1,1,1/2) {e_half:.2e}, product formula {formula:.2e} (tol 1e-6)"))
}

fn nonescape_scaling() -> Outcome {
    let p = params(2, 1.0);
    let region = RegionSpec::new(1.0).unwrap();
    let times: Vec<f64> = (0..=40)
        .map(|i| 50.0 * 10f64.powf(i as f64 / 40.0))
        .collect();
    let ratios: Vec<f64> = times
        .iter()
        .map(|&t| {
            let s = sudden_quench_scaling(t).unwrap();
            nonescape_probability(&p, &s, region).unwrap() / survival_probability(&p, &s).unwrap()
        })
        .collect();
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let spread = hi / lo - 1.0;

    let args = ObservablesArgs {
        n: 2,
        lambda: 1.0,
        a: 1.0,
        protocol: ProtocolSpec::Sudden,
        grid: "log:50:500:41".parse().unwrap(),
        fit_from: Some(50.0),
        output: no_output(),
    };
    let table = run_observables(&args, Execution::Parallel).unwrap();
    let slope_p = table.summary_value("slope_p").unwrap();
    let ok = spread <= 1e-3 && (slope_p + 1.0).abs() <= 0.02;
    (ok, format!("P/S relative spread over [50, 500] {spread:.2e} (tol 1e-3); p(t) slope {slope_p:.5} (-1 +- 0.02)"))
}

fn ermakov_solver() -> Outcome {
    let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 100.0).collect();
    let traj = solve_scaling(
        &FrequencyProtocol::SuddenQuench,
        &grid,
        &SolverOptions::default(),
    )
    .unwrap();
    let mut worst = max_by(
        traj.states()
            .iter()
            .map(|s| (s.b - (1.0 + s.t * s.t).sqrt()).abs()),
    );
    for i in 0..97 {
        let t = 0.0517 + 0.1031 * i as f64;
        let s = traj.state_at(t).unwrap();
        worst = worst.max((s.b - (1.0 + t * t).sqrt()).abs());
    }

    let times: Vec<f64> = (0..=30)
        .map(|i| 1e3 * 10f64.powf(i as f64 / 30.0))
        .collect();
    let mut grid = vec![0.0];
    grid.extend(&times);
    let sudden = solve_scaling(
        &FrequencyProtocol::SuddenQuench,
        &grid,
        &SolverOptions::default(),
    )
    .unwrap();
    let delayed = solve_scaling(
        &FrequencyProtocol::delayed_release(3.0).unwrap(),
        &grid,
        &SolverOptions::default(),
    )
    .unwrap();
    let mut slope_dev = 0.0f64;
    let mut shown = Vec::new();
    for (n, l) in [(2, 1.0), (3, 0.5), (3, 2.0)] {
        let p = params(n, l);
        let slope = |traj: &ScalingTrajectory| {
            let ls: Vec<f64> = traj.states()[1..]
                .iter()
                .map(|s| log_survival_probability(&p, s).unwrap())
                .collect();
            loglog_slope(&times, &ls).unwrap()
        };
        let (a, b) = (slope(&sudden), slope(&delayed));
        slope_dev = slope_dev
            .max((a / -p.beta() - 1.0).abs())
            .max((b / -p.beta() - 1.0).abs());
        shown.push(format!("beta={}: {a:.4}/{b:.4}", p.beta()));
    }
    let ok = worst <= 1e-8 && slope_dev <= 0.01;
    (
        ok,
        format!(
            "max |b - sqrt(1+t^2)| on [0, 10] {worst:.2e} (tol 1e-8); long-time slopes sudden/delayed {} max rel dev {slope_dev:.2e} (tol 1e-2)",
            shown.join(", ")
        ),
    )
}

fn verify_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| -> (bool, PathBuf) {
        let path = dir.path().join(name);
        let cli = Cli::try_parse_from([
            "csdecay",
            "verify",
            "--seed",
            "42",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ])
        .unwrap();
        (csdecay_cli::run(&cli).is_ok(), path)
    };
    let (ok_a, a) = run("a.json", "1");
    let (ok_b, b) = run("b.json", "3");
    let bytes_a = std::fs::read(&a).unwrap();
    let identical = bytes_a == std::fs::read(&b).unwrap();
    let report: serde_json::Value = serde_json::from_slice(&bytes_a).unwrap();
    let mc: Vec<&serde_json::Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["check"].as_str().unwrap().starts_with("monte carlo"))
        .collect();
    let mc_ok = !mc.is_empty() && mc.iter().all(|c| c["pass"].as_bool().unwrap());
    let worst_sigma = max_by(
        mc.iter()
            .map(|c| 3.0 * c["error"].as_f64().unwrap() / c["tolerance"].as_f64().unwrap()),
    );
    let total = report["checks"].as_array().unwrap().len();
    let ok = ok_a && ok_b && identical && mc_ok;
    (
        ok,
        format!(
            "reports byte-identical: {identical} (1 vs 3 threads); exit status ok: {}; {total} checks; \
             {} Monte Carlo checks, worst deviation {worst_sigma:.2} sigma (limit 3)",
            ok_a && ok_b,
            mc.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("closed form vs quadrature", closed_form_vs_quadrature),
        ("long-time power law", power_law_slopes),
        ("short-time law", short_time_law),
        ("duality", duality),
        ("decomposition closure and regimes", decomposition_regimes),
        ("ensemble constants", ensemble_constants),
        ("non-escape scaling", nonescape_scaling),
        ("scaling solver", ermakov_solver),
        ("determinism", verify_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        println!(
            "criterion {} [{name}]: {} | {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
    } else {
        println!(
            "acceptance: {} of 9 criteria fail: {failed:?}",
            failed.len()
        );
        std::process::exit(1);
    }
}
