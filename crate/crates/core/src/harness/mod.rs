//! Seeded Monte Carlo experiments: uniform-in-time coverage, width
//! profiles, method comparisons and the certified bound/floor checks.
//!
//! Every replication draws from its own substream (see [`rng`]) and results
//! are reduced in replication order, so reports are bit-identical for a
//! given spec and seed whatever the thread count.

pub mod certify;
pub mod distributions;
pub mod martingale;
pub mod rng;
mod width;

use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catoni::{CatoniConfig, TuningSequence};
use crate::dubins_savage::{DsConfig, DsState};
use crate::error::{check_alpha, check_order, check_positive, Error, Result};
use crate::schedules::{LambdaSchedule, PrefixSums};
use crate::summation::CompensatedSum;

pub use certify::{run_bound_validity, run_lil_floor, BoundValidityReport, LilFloorReport};
pub use distributions::{DistributionSpec, Sampler, TAIL_MARGIN};
pub use martingale::{run_supermartingale, SupermartingaleRow};
pub use rng::replication_rng;
pub use width::{compare_methods, default_checkpoints, run_width, ComparisonGrid, ComparisonRow, WidthCheckpoint, WidthReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "catoni")]
    Catoni,
    #[serde(rename = "ds")]
    DubinsSavage,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Catoni => "catoni",
            Method::DubinsSavage => "ds",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub method: Method,
    pub distribution: DistributionSpec,
    pub p: f64,
    pub alpha: f64,
    /// Largest `n` examined.
    pub horizon: u64,
    pub replications: u64,
    pub seed: u64,
    /// Check every `stride`-th time (and the horizon).
    pub stride: u64,
    /// Moment bound handed to the method; `None` uses the true moment.
    pub v_p: Option<f64>,
    /// Catoni weights; `None` means `λ_t = t^{-1/p}`.
    pub schedule: Option<LambdaSchedule>,
    pub t: f64,
    pub tau: f64,
    /// Dubins-Savage `b`.
    pub b: f64,
    /// Worker threads; `None` uses the global rayon pool. Never affects results.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(method: Method, distribution: DistributionSpec, p: f64, alpha: f64) -> Self {
        ExperimentSpec {
            method,
            distribution,
            p,
            alpha,
            horizon: 10_000,
            replications: 100,
            seed: 0,
            stride: 1,
            v_p: None,
            schedule: None,
            t: 0.5,
            tau: 0.1,
            b: 1.0,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.p)?;
        check_alpha(self.alpha)?;
        self.distribution.validate()?;
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        check_positive("b", self.b)?;
        if let Some(v) = self.v_p {
            check_positive("v_p", v)?;
        }
        Ok(())
    }

    /// The configured moment bound, checked against the true moment: the
    /// coverage guarantee needs `v_p ≥ E|X - μ|^p`.
    pub fn resolved_vp(&self) -> Result<f64> {
        self.validate()?;
        let truth = self.distribution.experiment_vp(self.p)?;
        match self.v_p {
            None => Ok(truth),
            Some(v) if v >= truth => Ok(v),
            Some(v) => Err(Error::Config(format!(
                "configured v_p = {v} is below the true moment {truth} of {}",
                self.distribution.label()
            ))),
        }
    }

    pub fn catoni_config(&self) -> Result<CatoniConfig> {
        let v_p = self.resolved_vp()?;
        let schedule = match &self.schedule {
            Some(s) => s.clone(),
            None => LambdaSchedule::power_law(1.0, self.p)?,
        };
        if let Some(h) = schedule.horizon() {
            if h < self.horizon {
                return Err(Error::Config(format!(
                    "custom schedule has {h} weights but the horizon is {}",
                    self.horizon
                )));
            }
        }
        CatoniConfig::new(self.p, v_p, self.alpha)?
            .with_schedule(schedule)
            .with_t(TuningSequence::Constant(self.t))?
            .with_tau(TuningSequence::Constant(self.tau))
    }

    pub fn ds_config(&self) -> Result<DsConfig> {
        DsConfig::new(self.p, self.resolved_vp()?, self.alpha, self.b)
    }

    fn checks_at(&self, n: u64) -> bool {
        n % self.stride == 0 || n == self.horizon
    }
}

/// Runs `job(r)` for `r in 0..replications`, results in replication order.
pub(crate) fn run_replications<T, F>(replications: u64, threads: Option<usize>, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    match threads {
        Some(1) => (0..replications).map(job).collect(),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| (0..replications).into_par_iter().map(&job).collect())
        }
        None => (0..replications).into_par_iter().map(&job).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub method: Method,
    pub distribution: String,
    pub p: f64,
    pub alpha: f64,
    pub v_p: f64,
    pub horizon: u64,
    pub replications: u64,
    /// Replications in which `μ ∉ I_n` for some checked `n ≤ horizon`.
    pub miscoverage_count: u64,
    pub miscoverage_rate: f64,
    /// Binomial standard error of the rate.
    pub mc_std_err: f64,
    pub seed: u64,
    pub stride: u64,
}

/// Uniform-in-time coverage over `replications` independent streams.
///
/// For the Catoni sequence `μ ∈ I_n` is decided by `|f_n(μ)| ≤ T_n`, which
/// is exact and incremental, so every checked `n` costs O(1).
pub fn run_coverage(spec: &ExperimentSpec) -> Result<CoverageReport> {
    let v_p = spec.resolved_vp()?;
    let sampler = spec.distribution.sampler()?;
    let mu = spec.distribution.true_mean();
    let misses: Vec<bool> = match spec.method {
        Method::Catoni => {
            let cfg = spec.catoni_config()?;
            run_replications(spec.replications, spec.threads, |rep| {
                let mut rng = replication_rng(spec.seed, rep);
                let influence = *cfg.influence();
                let mut prefix = PrefixSums::new(spec.p)?;
                let mut f = CompensatedSum::new();
                for n in 1..=spec.horizon {
                    let x = sampler.sample(&mut rng);
                    let lambda = prefix.extend(cfg.schedule())?;
                    f.add(influence.eval(lambda * (x - mu)));
                    if spec.checks_at(n) && f.value().abs() > cfg.threshold(prefix.sum_lambda_p()) {
                        return Ok(true);
                    }
                }
                Ok(false)
            })?
        }
        Method::DubinsSavage => {
            let cfg = spec.ds_config()?;
            run_replications(spec.replications, spec.threads, |rep| {
                let mut rng = replication_rng(spec.seed, rep);
                let mut state = DsState::new(&cfg);
                for n in 1..=spec.horizon {
                    state.update(sampler.sample(&mut rng))?;
                    if spec.checks_at(n) && !state.interval(&cfg)?.contains(mu) {
                        return Ok(true);
                    }
                }
                Ok(false)
            })?
        }
    };
    let count = misses.iter().filter(|&&m| m).count() as u64;
    let rate = count as f64 / spec.replications as f64;
    Ok(CoverageReport {
        method: spec.method,
        distribution: spec.distribution.label(),
        p: spec.p,
        alpha: spec.alpha,
        v_p,
        horizon: spec.horizon,
        replications: spec.replications,
        miscoverage_count: count,
        miscoverage_rate: rate,
        mc_std_err: (rate * (1.0 - rate) / spec.replications as f64).sqrt(),
        seed: spec.seed,
        stride: spec.stride,
    })
}

/// Sample mean, standard deviation and standard error of the mean.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = crate::summation::sum(values.iter().copied()) / n;
    let var = if values.len() > 1 {
        crate::summation::sum(values.iter().map(|v| (v - mean) * (v - mean))) / (n - 1.0)
    } else {
        0.0
    };
    let sd = var.sqrt();
    (mean, sd, sd / n.sqrt())
}
