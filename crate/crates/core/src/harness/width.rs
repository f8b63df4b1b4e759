//! Width profiles at checkpoints and the method-comparison table.

use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use super::{mean_std, replication_rng, run_replications, DistributionSpec, ExperimentSpec, Method};
use crate::catoni::{BoundScan, CatoniState};
use crate::dubins_savage::DsState;
use crate::error::{Error, Result};
use crate::schedules::PrefixSums;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthCheckpoint {
    pub n: u64,
    pub mean_width: f64,
    pub q10: f64,
    pub q50: f64,
    pub q90: f64,
    /// Theoretical width bound; `None` where it does not apply.
    pub bound: Option<f64>,
    pub condition_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthReport {
    pub method: Method,
    pub distribution: String,
    pub p: f64,
    pub alpha: f64,
    pub v_p: f64,
    pub horizon: u64,
    pub replications: u64,
    pub seed: u64,
    pub checkpoints: Vec<WidthCheckpoint>,
    /// OLS slope of log mean width on log n over checkpoints with
    /// `n ≥ horizon / 100`; `None` with fewer than two such points.
    pub slope: Option<f64>,
}

/// Roughly ten log-spaced checkpoints per decade in `[1, horizon]`, always
/// ending at `horizon`.
pub fn default_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if horizon == 0 {
        return out;
    }
    let top = (horizon as f64).log10();
    let steps = (top * 10.0).floor() as u64;
    for k in 0..=steps {
        let n = 10f64.powf(k as f64 / 10.0).round() as u64;
        out.push(n.clamp(1, horizon));
    }
    out.push(horizon);
    out.sort_unstable();
    out.dedup();
    out
}

fn normalize_checkpoints(checkpoints: &[u64], horizon: u64) -> Result<Vec<u64>> {
    if let Some(&bad) = checkpoints.iter().find(|&&n| n == 0 || n > horizon) {
        return Err(Error::Config(format!("checkpoint {bad} is outside [1, {horizon}]")));
    }
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    Ok(cps)
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// OLS slope of `log y` on `log x`.
pub(crate) fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|(x, _)| x.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|(_, y)| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Bound and condition flag at each checkpoint.
fn theoretical_bounds(spec: &ExperimentSpec, cps: &[u64]) -> Result<Vec<(Option<f64>, bool)>> {
    let mut out = Vec::with_capacity(cps.len());
    match spec.method {
        Method::Catoni => {
            let cfg = spec.catoni_config()?;
            let mut scan = BoundScan::new(&cfg);
            let mut next = cps.iter().peekable();
            while let Some(&&target) = next.peek() {
                let point = scan.next_point()?;
                if point.n == target {
                    out.push((point.width_bound, point.condition_holds));
                    next.next();
                }
            }
        }
        Method::DubinsSavage => {
            let cfg = spec.ds_config()?;
            let schedule = cfg.schedule();
            let mut sums = PrefixSums::new(spec.p)?;
            for &n in cps {
                while sums.n() < n {
                    sums.extend(&schedule)?;
                }
                out.push((Some(2.0 * cfg.radius(sums.sum_lambda(), sums.sum_lambda_p())), true));
            }
        }
    }
    Ok(out)
}

/// Empirical widths at `checkpoints` across replications.
pub fn run_width(spec: &ExperimentSpec, checkpoints: &[u64]) -> Result<WidthReport> {
    let v_p = spec.resolved_vp()?;
    let cps = normalize_checkpoints(checkpoints, spec.horizon)?;
    let sampler = spec.distribution.sampler()?;
    let last = cps.last().copied().unwrap_or(0);

    let per_rep: Vec<Vec<f64>> = match spec.method {
        Method::Catoni => {
            let cfg = spec.catoni_config()?;
            run_replications(spec.replications, spec.threads, |rep| {
                let mut rng = replication_rng(spec.seed, rep);
                let mut state = CatoniState::with_capacity(&cfg, last as usize);
                let mut widths = Vec::with_capacity(cps.len());
                let mut next = cps.iter().peekable();
                while let Some(&&target) = next.peek() {
                    state.update(&cfg, sampler.sample(&mut rng))?;
                    if state.n() == target {
                        widths.push(state.interval(&cfg)?.width);
                        next.next();
                    }
                }
                Ok(widths)
            })?
        }
        Method::DubinsSavage => {
            let cfg = spec.ds_config()?;
            run_replications(spec.replications, spec.threads, |rep| {
                let mut rng = replication_rng(spec.seed, rep);
                let mut state = DsState::new(&cfg);
                let mut widths = Vec::with_capacity(cps.len());
                let mut next = cps.iter().peekable();
                while let Some(&&target) = next.peek() {
                    state.update(sampler.sample(&mut rng))?;
                    if state.n() == target {
                        widths.push(state.interval(&cfg)?.width);
                        next.next();
                    }
                }
                Ok(widths)
            })?
        }
    };

    let bounds = theoretical_bounds(spec, &cps)?;
    let mut rows = Vec::with_capacity(cps.len());
    for (j, &n) in cps.iter().enumerate() {
        let mut ws: Vec<f64> = per_rep.iter().map(|w| w[j]).collect();
        let (mean_width, _, _) = mean_std(&ws);
        ws.sort_unstable_by(f64::total_cmp);
        rows.push(WidthCheckpoint {
            n,
            mean_width,
            q10: quantile(&ws, 0.1),
            q50: quantile(&ws, 0.5),
            q90: quantile(&ws, 0.9),
            bound: bounds[j].0,
            condition_holds: bounds[j].1,
        });
    }
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n as f64 >= spec.horizon as f64 / 100.0)
        .map(|r| (r.n as f64, r.mean_width))
        .collect();

    Ok(WidthReport {
        method: spec.method,
        distribution: spec.distribution.label(),
        p: spec.p,
        alpha: spec.alpha,
        v_p,
        horizon: spec.horizon,
        replications: spec.replications,
        seed: spec.seed,
        checkpoints: rows,
        slope: log_log_slope(&fit),
    })
}

/// Cross product of methods, distributions, `p` and `α`, all run on the
/// template's horizon, replications and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonGrid {
    pub template: ExperimentSpec,
    pub methods: Vec<Method>,
    pub distributions: Vec<DistributionSpec>,
    pub ps: Vec<f64>,
    pub alphas: Vec<f64>,
    pub checkpoints: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: Method,
    pub distribution: String,
    pub p: f64,
    pub alpha: f64,
    pub n: u64,
    pub mean_width: f64,
    pub q10: f64,
    pub q50: f64,
    pub q90: f64,
    pub bound: Option<f64>,
    pub condition_holds: bool,
}

/// One row per (method, distribution, p, α, checkpoint). Cells share the
/// template seed, so every method sees the same streams.
pub fn compare_methods(grid: &ComparisonGrid) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    for dist in &grid.distributions {
        for &p in &grid.ps {
            for &alpha in &grid.alphas {
                for &method in &grid.methods {
                    let spec = ExperimentSpec {
                        method,
                        distribution: dist.clone(),
                        p,
                        alpha,
                        ..grid.template.clone()
                    };
                    let report = run_width(&spec, &grid.checkpoints)?;
                    rows.extend(report.checkpoints.into_iter().map(|c| ComparisonRow {
                        method,
                        distribution: report.distribution.clone(),
                        p,
                        alpha,
                        n: c.n,
                        mean_width: c.mean_width,
                        q10: c.q10,
                        q50: c.q50,
                        q90: c.q90,
                        bound: c.bound,
                        condition_holds: c.condition_holds,
                    }));
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoints_are_sorted_and_bounded() {
        let cps = default_checkpoints(12_345);
        assert_eq!(cps[0], 1);
        assert_eq!(*cps.last().unwrap(), 12_345);
        assert!(cps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(default_checkpoints(1), vec![1]);
    }

    #[test]
    fn quantile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&xs, 0.5), 3.0);
        assert!((quantile(&xs, 0.1) - 1.4).abs() < 1e-15);
        assert_eq!(quantile(&[7.0], 0.9), 7.0);
    }

    #[test]
    fn slope_of_power_law_is_exact() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(-0.4))).collect();
        assert!((log_log_slope(&pts).unwrap() + 0.4).abs() < 1e-12);
        assert!(log_log_slope(&pts[..1]).is_none());
    }

    #[test]
    fn out_of_range_checkpoint_is_rejected() {
        let spec = ExperimentSpec::new(Method::DubinsSavage, DistributionSpec::gaussian(0.0, 1.0).unwrap(), 2.0, 0.1);
        assert!(run_width(&spec, &[0]).is_err());
        assert!(run_width(&spec, &[spec.horizon + 1]).is_err());
    }
}
