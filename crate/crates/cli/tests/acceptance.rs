//! Acceptance criteria 1 to 8. Each test writes one `PASS` / `FAIL` line to
//! stderr (outside the test harness capture) and then asserts.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use heavytail_cs::catoni::bound_point;
use heavytail_cs::harness::{
    default_checkpoints, run_bound_validity, run_coverage, run_lil_floor, run_supermartingale, run_width,
    DistributionSpec, ExperimentSpec, Method,
};
use heavytail_cs::influence::catoni_constant;
use heavytail_cs::{CatoniConfig, InfluenceFunction, InfluenceKind, Sign};

const SEED: u64 = 20_251_015;

// 1: influence invariants
const SANDWICH_TOL: f64 = 1e-12;
const SANDWICH_ORDERS: [f64; 4] = [1.1, 1.5, 1.9, 2.0];
const SANDWICH_BUDGET: Duration = Duration::from_secs(1);
// 2: coverage
const COVERAGE_ALPHA: f64 = 0.05;
const COVERAGE_HORIZON: u64 = 10_000;
const COVERAGE_REPS: u64 = 500;
const COVERAGE_STRIDE: u64 = 1;
const COVERAGE_BUDGET: Duration = Duration::from_secs(600);
// 3: shrinkage
const SLOPE_TOL: f64 = 0.05;
const SLOPE_WINDOW: (u64, u64) = (10_000, 1_000_000);
const SLOPE_REPS_CATONI: u64 = 4;
const SLOPE_BUDGET: Duration = Duration::from_secs(300);
// 4: width bound
const BOUND_REPS: u64 = 200;
const BOUND_HORIZON: u64 = 100_000;
const BOUND_BUDGET: Duration = Duration::from_secs(600);
// 5: alpha dependence
const ALPHA_PAIR: (f64, f64) = (0.001, 0.1);
const ALPHA_N: u64 = 100_000;
const DS_RATIO_TARGET: f64 = 10.0;
const DS_RATIO_REL_TOL: f64 = 0.10;
const CATONI_RATIO_MAX: f64 = 3.0;
const ALPHA_BUDGET: Duration = Duration::from_secs(120);
// 6: LIL floor
const LIL_REPS: u64 = 100;
const LIL_HORIZON: u64 = 100_000;
const LIL_N0_MAX: u64 = 1_000;
const LIL_BUDGET: Duration = Duration::from_secs(300);
// 7: supermartingales
const MART_CHECKPOINTS: [u64; 3] = [10, 100, 1_000];
const MART_REPS: u64 = 10_000;
const MART_SE_MULT: f64 = 3.0;
const MART_BUDGET: Duration = Duration::from_secs(120);

fn report(criterion: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance criterion {criterion}: {verdict} | {detail}");
}

fn gaussian() -> DistributionSpec {
    DistributionSpec::gaussian(0.0, 1.0).unwrap()
}

fn pareto() -> DistributionSpec {
    DistributionSpec::centered_pareto(1.9, 1.0).unwrap()
}

fn student() -> DistributionSpec {
    DistributionSpec::student_t(1.8, 0.0).unwrap()
}

fn spec(method: Method, dist: DistributionSpec, p: f64, alpha: f64) -> ExperimentSpec {
    ExperimentSpec {
        seed: SEED,
        ..ExperimentSpec::new(method, dist, p, alpha)
    }
}

/// Symmetric grid on [-50, 50], log-spaced near zero plus a uniform part.
fn sandwich_grid() -> Vec<f64> {
    let mut pos: Vec<f64> = (0..=4000).map(|k| 10f64.powf(-12.0 + k as f64 * (12.0 + 50f64.log10()) / 4000.0)).collect();
    pos.extend((1..=5000).map(|k| k as f64 * 0.01));
    pos.retain(|&x| x <= 50.0);
    let mut grid: Vec<f64> = pos.iter().map(|x| -x).collect();
    grid.push(0.0);
    grid.extend(pos);
    grid.sort_unstable_by(f64::total_cmp);
    grid.dedup();
    grid
}

#[test]
fn criterion_1_sandwich_and_monotonicity() {
    let start = Instant::now();
    let grid = sandwich_grid();
    let mut failures = Vec::new();
    for p in SANDWICH_ORDERS {
        let f = InfluenceFunction::new(p, InfluenceKind::TightUpper).unwrap();
        let c = f.c_p();
        let values: Vec<f64> = grid.iter().map(|&x| f.eval(x)).collect();
        if f.eval(0.0) != 0.0 {
            failures.push(format!("p={p}: phi(0) != 0"));
        }
        for (&x, &y) in grid.iter().zip(&values) {
            let upper = (1.0 + x + c * x.abs().powf(p)).ln();
            let low_arg = 1.0 - x + c * x.abs().powf(p);
            if y > upper + SANDWICH_TOL || (low_arg > 0.0 && y < -low_arg.ln() - SANDWICH_TOL) || !y.is_finite() {
                failures.push(format!("p={p}: sandwich fails at x={x}"));
            }
        }
        // adjacent pairs suffice: order and the Lipschitz bound are transitive
        for (w, v) in grid.windows(2).zip(values.windows(2)) {
            if v[1] < v[0] {
                failures.push(format!("p={p}: decreasing on [{}, {}]", w[0], w[1]));
            }
        }
    }
    let classic = InfluenceFunction::new(2.0, InfluenceKind::CatoniClassic).unwrap();
    let values: Vec<f64> = grid.iter().map(|&x| classic.eval(x)).collect();
    for (w, v) in grid.windows(2).zip(values.windows(2)) {
        if (v[1] - v[0]).abs() > (w[1] - w[0]) + SANDWICH_TOL {
            failures.push(format!("classic: Lipschitz fails on [{}, {}]", w[0], w[1]));
        }
    }
    if (catoni_constant(2.0 - 1e-8).unwrap() - 0.5).abs() > 1e-6 {
        failures.push("C_p not continuous at 2".into());
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < SANDWICH_BUDGET;
    report(
        1,
        pass,
        &format!("{} grid points x {} orders, tol {SANDWICH_TOL:e}, {} violations, {elapsed:.2?}", grid.len(), SANDWICH_ORDERS.len(), failures.len()),
    );
    assert!(pass, "{:?}", &failures[..failures.len().min(10)]);
}

#[test]
fn criterion_2_uniform_coverage() {
    let start = Instant::now();
    let limit = COVERAGE_ALPHA + 3.0 * (COVERAGE_ALPHA * (1.0 - COVERAGE_ALPHA) / COVERAGE_REPS as f64).sqrt();
    let cells = [(gaussian(), 2.0), (pareto(), 1.5), (student(), 1.5)];
    let mut lines = Vec::new();
    let mut pass = true;
    for method in [Method::Catoni, Method::DubinsSavage] {
        for (dist, p) in &cells {
            let s = ExperimentSpec {
                horizon: COVERAGE_HORIZON,
                replications: COVERAGE_REPS,
                stride: COVERAGE_STRIDE,
                ..spec(method, dist.clone(), *p, COVERAGE_ALPHA)
            };
            let r = run_coverage(&s).unwrap();
            pass &= r.miscoverage_rate <= limit;
            lines.push(format!("{method}/{}/p={p}: {:.3}", r.distribution, r.miscoverage_rate));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < COVERAGE_BUDGET;
    report(
        2,
        pass,
        &format!("limit {limit:.4}, stride {COVERAGE_STRIDE}; {}; {elapsed:.1?}", lines.join(", ")),
    );
    assert!(pass);
}

#[test]
fn criterion_3_shrinkage_rates() {
    let start = Instant::now();
    let (lo, hi) = SLOPE_WINDOW;
    let checkpoints: Vec<u64> = default_checkpoints(hi).into_iter().filter(|&n| n >= lo).collect();
    let mut lines = Vec::new();
    let mut pass = true;
    for (dist, p) in [(gaussian(), 2.0), (pareto(), 1.5)] {
        let target = -(p - 1.0) / p;
        for method in [Method::Catoni, Method::DubinsSavage] {
            let reps = if method == Method::Catoni { SLOPE_REPS_CATONI } else { 1 };
            let s = ExperimentSpec {
                horizon: hi,
                replications: reps,
                ..spec(method, dist.clone(), p, 0.05)
            };
            let slope = run_width(&s, &checkpoints).unwrap().slope.unwrap();
            let ok = (slope - target).abs() <= SLOPE_TOL;
            pass &= ok;
            lines.push(format!(
                "{method}/p={p}: {slope:.4} vs {target:.4} [{}]",
                if ok { "ok" } else { "out" }
            ));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < SLOPE_BUDGET;
    report(3, pass, &format!("tol {SLOPE_TOL}; {}; {elapsed:.1?}", lines.join(", ")));
    assert!(pass, "{lines:?}");
}

#[test]
fn criterion_4_width_bound_validity() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for (dist, p) in [(gaussian(), 2.0), (pareto(), 1.5), (student(), 1.5)] {
        let s = ExperimentSpec {
            horizon: BOUND_HORIZON,
            replications: BOUND_REPS,
            ..spec(Method::Catoni, dist, p, 0.05)
        };
        let r = run_bound_validity(&s).unwrap();
        let budget = r.failure_budget.total.unwrap_or(f64::INFINITY);
        let allowed = s.alpha * budget + 3.0 * r.mc_std_err;
        let ok = r.violation_rate <= allowed && r.condition_onset.is_some();
        pass &= ok;
        lines.push(format!(
            "{}/p={p}: {} of {} violate (allowed rate {allowed:.2e}), n0 = {}",
            r.distribution,
            r.violating_replications,
            r.replications,
            r.condition_onset.map_or("none".into(), |n| n.to_string())
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < BOUND_BUDGET;
    report(4, pass, &format!("{}; {elapsed:.1?}", lines.join(", ")));
    assert!(pass, "{lines:?}");
}

#[test]
fn criterion_5_alpha_dependence() {
    let start = Instant::now();
    let (small, large) = ALPHA_PAIR;
    let ds_width = |alpha: f64| {
        let s = ExperimentSpec {
            horizon: ALPHA_N,
            replications: 1,
            ..spec(Method::DubinsSavage, gaussian(), 2.0, alpha)
        };
        run_width(&s, &[ALPHA_N]).unwrap().checkpoints[0].mean_width
    };
    let ds_ratio = ds_width(small) / ds_width(large);
    let bound = |alpha: f64| {
        let cfg = CatoniConfig::new(2.0, 1.0, alpha).unwrap();
        bound_point(&cfg, ALPHA_N).unwrap().width_bound.expect("condition holds at n = 1e5")
    };
    let catoni_ratio = bound(small) / bound(large);
    let elapsed = start.elapsed();
    let pass = (ds_ratio / DS_RATIO_TARGET - 1.0).abs() <= DS_RATIO_REL_TOL
        && catoni_ratio < CATONI_RATIO_MAX
        && elapsed < ALPHA_BUDGET;
    report(
        5,
        pass,
        &format!("DS ratio {ds_ratio:.4} (target {DS_RATIO_TARGET} ± {DS_RATIO_REL_TOL:.0e} rel), Catoni bound ratio {catoni_ratio:.4} (< {CATONI_RATIO_MAX}); {elapsed:.2?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_6_lil_floor() {
    let start = Instant::now();
    let s = ExperimentSpec {
        horizon: LIL_HORIZON,
        replications: LIL_REPS,
        ..spec(Method::Catoni, gaussian(), 2.0, 0.05)
    };
    let a = std::f64::consts::SQRT_2;
    let r = run_lil_floor(&s, a).unwrap();
    let below = r.last_violation.iter().filter(|v| v.is_some()).count();
    let elapsed = start.elapsed();
    let pass = r.n0.is_some_and(|n0| n0 <= LIL_N0_MAX) && elapsed < LIL_BUDGET;
    report(
        6,
        pass,
        &format!(
            "a = sqrt 2, {} reps to n = {}: n0 = {:?} (floor defined from {:?}), {below} reps ever below; {elapsed:.1?}",
            r.replications, r.horizon, r.n0, r.floor_onset
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_supermartingale_means() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for (dist, p) in [(gaussian(), 2.0), (student(), 1.5)] {
        let s = ExperimentSpec {
            replications: MART_REPS,
            ..spec(Method::Catoni, dist.clone(), p, 0.05)
        };
        for row in run_supermartingale(&s, &MART_CHECKPOINTS).unwrap() {
            let ok = row.mean <= 1.0 + MART_SE_MULT * row.std_err;
            pass &= ok;
            let sign = if row.sign == Sign::Plus { '+' } else { '-' };
            lines.push(format!("{}/n={}/{sign}: {:.3}±{:.3}", dist.label(), row.n, row.mean, row.std_err));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < MART_BUDGET;
    report(7, pass, &format!("{}; {elapsed:.2?}", lines.join(", ")));
    assert!(pass, "{lines:?}");
}

fn run_binary(args: &[&str], out: &std::path::Path, threads: &str) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_heavytail-cs"))
        .args(args)
        .args(["--threads", threads, "--output"])
        .arg(out)
        .env_remove("HEAVYTAIL_CS_SEED")
        .status()
        .unwrap();
    assert!(status.success());
    std::fs::read(out).unwrap()
}

#[test]
fn criterion_8_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["coverage", "--method", "both", "--dist", "student-t", "--p", "1.5", "--n", "3000", "--reps", "40", "--seed", "9", "--format", "json"],
        &["width", "--method", "both", "--dist", "centered-pareto", "--p", "1.5", "--n", "3000", "--reps", "6", "--seed", "9", "--format", "csv"],
        &["lil-check", "--dist", "gaussian", "--n", "2000", "--reps", "6", "--seed", "9", "--format", "csv"],
    ];
    let mut pass = true;
    let mut lines = Vec::new();
    for (k, args) in runs.iter().enumerate() {
        let outputs: Vec<Vec<u8>> = ["1", "2", "3", "1"]
            .iter()
            .enumerate()
            .map(|(j, t)| run_binary(args, &dir.path().join(format!("{k}_{j}.out")), t))
            .collect();
        let same = outputs.windows(2).all(|w| w[0] == w[1]);
        pass &= same && !outputs[0].is_empty();
        lines.push(format!("{}: {} bytes, {}", args[0], outputs[0].len(), if same { "identical" } else { "DIFFER" }));
    }
    report(8, pass, &format!("threads 1/2/3/1; {}", lines.join(", ")));
    assert!(pass);
}
