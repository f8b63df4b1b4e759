//! The three subcommands, each producing a [`Report`].

use heavytail_cs::harness::{default_checkpoints, run_coverage, run_lil_floor, run_width, WidthReport};
use heavytail_cs::lower_bound::{lil_floor, lil_trace, LilConfig};
use heavytail_cs::Method;
use serde_json::{json, Value};

use crate::config::{OutputOptions, RunConfig};
use crate::report::{Cell, Report};
use crate::svg::{log_log_chart, Series};
use crate::CliError;

pub fn coverage(cfg: &RunConfig, opts: &OutputOptions) -> Result<Report, CliError> {
    let columns = [
        "method",
        "distribution",
        "p",
        "alpha",
        "v_p",
        "n",
        "reps",
        "stride",
        "seed",
        "miscoverage_count",
        "miscoverage_rate",
        "mc_std_err",
    ];
    let mut report = Report::new(cfg.clone(), columns.iter().map(|c| c.to_string()).collect());
    let limit = cfg.alpha + 3.0 * (cfg.alpha * (1.0 - cfg.alpha) / cfg.reps as f64).sqrt();
    let mut worst: f64 = 0.0;
    for method in cfg.methods() {
        let r = run_coverage(&cfg.spec(method, opts.threads))?;
        worst = worst.max(r.miscoverage_rate);
        report.push_row(vec![
            Cell::Text(method.to_string()),
            Cell::Text(r.distribution),
            Cell::Float(r.p),
            Cell::Float(r.alpha),
            Cell::Float(r.v_p),
            Cell::Int(r.horizon),
            Cell::Int(r.replications),
            Cell::Int(r.stride),
            Cell::Int(r.seed),
            Cell::Int(r.miscoverage_count),
            Cell::Float(r.miscoverage_rate),
            Cell::Float(r.mc_std_err),
        ]);
    }
    report.summary.insert("rate_limit".into(), json!(limit));
    report.summary.insert("max_miscoverage_rate".into(), json!(worst));
    report.summary.insert("within_limit".into(), json!(worst <= limit));
    Ok(report)
}

fn checkpoints(cfg: &RunConfig) -> Vec<u64> {
    cfg.checkpoints.clone().unwrap_or_else(|| default_checkpoints(cfg.n))
}

fn width_series(r: &WidthReport) -> Vec<(f64, f64)> {
    r.checkpoints.iter().map(|c| (c.n as f64, c.mean_width)).collect()
}

fn bound_series(r: &WidthReport) -> Vec<(f64, f64)> {
    r.checkpoints
        .iter()
        .filter_map(|c| c.bound.map(|b| (c.n as f64, b)))
        .collect()
}

pub fn width(cfg: &RunConfig, opts: &OutputOptions) -> Result<Report, CliError> {
    let cps = checkpoints(cfg);
    let reports: Vec<WidthReport> = cfg
        .methods()
        .into_iter()
        .map(|m| run_width(&cfg.spec(m, opts.threads), &cps))
        .collect::<Result<_, _>>()?;
    let mut columns = vec!["n".to_string()];
    for r in &reports {
        for field in ["mean_width", "q10", "q50", "q90", "bound", "condition_holds"] {
            columns.push(format!("{}_{field}", r.method));
        }
    }
    let mut report = Report::new(cfg.clone(), columns);
    let ns: Vec<u64> = reports.first().map(|r| r.checkpoints.iter().map(|c| c.n).collect()).unwrap_or_default();
    for (j, &n) in ns.iter().enumerate() {
        let mut row = vec![Cell::Int(n)];
        for r in &reports {
            let c = &r.checkpoints[j];
            row.extend([
                Cell::Float(c.mean_width),
                Cell::Float(c.q10),
                Cell::Float(c.q50),
                Cell::Float(c.q90),
                Cell::opt(c.bound),
                Cell::Bool(c.condition_holds),
            ]);
        }
        report.push_row(row);
    }
    for r in &reports {
        report.summary.insert(format!("{}_slope", r.method), r.slope.map_or(Value::Null, Value::from));
        report.summary.insert(format!("{}_v_p", r.method), json!(r.v_p));
    }
    report.summary.insert("slope_from_n".into(), json!(cfg.n as f64 / 100.0));

    if let Some(path) = &opts.svg {
        let mut series = Vec::new();
        for r in &reports {
            series.push(Series::new(format!("{} width", r.method), width_series(r)));
            series.push(Series::new(format!("{} bound", r.method), bound_series(r)).dashed());
        }
        write_file(path, &log_log_chart("Confidence sequence width", "n", "width", &series))?;
    }
    Ok(report)
}

pub fn lil_check(cfg: &RunConfig, opts: &OutputOptions) -> Result<Report, CliError> {
    if cfg.p != 2.0 {
        return Err(CliError::Usage(format!(
            "lil-check needs p = 2: the LIL floor is only defined for finite variance (got p = {})",
            cfg.p
        )));
    }
    if cfg.method != crate::args::MethodChoice::Catoni {
        return Err(CliError::Usage("lil-check compares the Catoni sequence only; use --method catoni".into()));
    }
    let sigma = cfg
        .distribution
        .variance()
        .ok_or_else(|| {
            CliError::Usage(format!(
                "lil-check needs finite variance; {} has none",
                cfg.distribution.label()
            ))
        })?
        .sqrt();
    let a = cfg.a.unwrap_or(sigma * std::f64::consts::SQRT_2);
    let lil = LilConfig::new(sigma, a, cfg.schedule.clone(), 1.0)?;
    let spec = cfg.spec(Method::Catoni, opts.threads);
    let cps = checkpoints(cfg);
    let widths = run_width(&spec, &cps)?;
    let check = run_lil_floor(&spec, a)?;
    let trace = lil_trace(&cfg.distribution, &cfg.schedule, &cps, cfg.seed)?;

    let columns = ["n", "mean_width", "q10_width", "lil_floor", "width_over_floor", "lil_ratio"];
    let mut report = Report::new(cfg.clone(), columns.iter().map(|c| c.to_string()).collect());
    let mut floor_points = Vec::new();
    for (c, t) in widths.checkpoints.iter().zip(&trace) {
        let floor = lil_floor(&lil, c.n)?;
        if let Some(f) = floor {
            floor_points.push((c.n as f64, f));
        }
        report.push_row(vec![
            Cell::Int(c.n),
            Cell::Float(c.mean_width),
            Cell::Float(c.q10),
            Cell::opt(floor),
            Cell::opt(floor.map(|f| c.mean_width / f)),
            Cell::opt(t.ratio),
        ]);
    }
    let violating = check.last_violation.iter().filter(|v| v.is_some()).count();
    report.summary.insert("a".into(), json!(a));
    report.summary.insert("sigma".into(), json!(sigma));
    report.summary.insert("floor_onset".into(), json!(check.floor_onset));
    report.summary.insert("n0".into(), json!(check.n0));
    report.summary.insert("replications_below_floor".into(), json!(violating));
    report.summary.insert("exact_solves".into(), json!(check.exact_solves));

    if let Some(path) = &opts.svg {
        let series = [
            Series::new("Catoni width", width_series(&widths)),
            Series::new("LIL floor", floor_points).dashed(),
        ];
        write_file(path, &log_log_chart("Width against the LIL floor", "n", "width", &series))?;
    }
    Ok(report)
}

pub(crate) fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}
