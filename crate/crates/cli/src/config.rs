//! Merging of config file, flags and environment into a resolved run.

use std::path::{Path, PathBuf};

use heavytail_cs::harness::ExperimentSpec;
use heavytail_cs::{DistributionSpec, LambdaSchedule, Method};
use serde::{Deserialize, Serialize};

use crate::args::{DistKind, Format, MethodChoice, RunArgs, ScheduleKind};
use crate::CliError;

pub const SEED_ENV: &str = "HEAVYTAIL_CS_SEED";

/// Settings as they may appear in a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<String>,
    pub method: Option<MethodChoice>,
    pub distribution: Option<DistributionSpec>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub n: Option<u64>,
    pub reps: Option<u64>,
    pub schedule: Option<LambdaSchedule>,
    pub t: Option<f64>,
    pub tau: Option<f64>,
    pub b: Option<f64>,
    pub v_p: Option<f64>,
    pub seed: Option<u64>,
    pub stride: Option<u64>,
    pub checkpoints: Option<Vec<u64>>,
    pub a: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl PartialConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// The fully resolved experiment; embedded in every report.
///
/// Output plumbing (format, paths, threads) lives in [`OutputOptions`] so
/// that it cannot make otherwise identical reports differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub method: MethodChoice,
    pub distribution: DistributionSpec,
    pub p: f64,
    pub alpha: f64,
    pub n: u64,
    pub reps: u64,
    pub schedule: LambdaSchedule,
    pub t: f64,
    pub tau: f64,
    pub b: f64,
    pub v_p: Option<f64>,
    pub seed: u64,
    pub stride: u64,
    pub checkpoints: Option<Vec<u64>>,
    pub a: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputOptions {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub threads: Option<usize>,
}

fn distribution(args: &RunArgs, file: Option<&DistributionSpec>) -> Result<DistributionSpec, CliError> {
    let file_kind = file.map(|d| match d {
        DistributionSpec::Gaussian { .. } => DistKind::Gaussian,
        DistributionSpec::CenteredPareto { .. } => DistKind::CenteredPareto,
        DistributionSpec::StudentT { .. } => DistKind::StudentT,
        DistributionSpec::TwoPoint { .. } => DistKind::TwoPoint,
    });
    let kind = args
        .dist
        .or(file_kind)
        .ok_or_else(|| CliError::Usage("missing --dist (or a distribution in --config)".into()))?;
    // parameters from the file when it names the same family
    let base = match file {
        Some(d) if Some(kind) == file_kind => d.clone(),
        _ => match kind {
            DistKind::Gaussian => DistributionSpec::Gaussian { mean: 0.0, sigma: 1.0 },
            DistKind::CenteredPareto => DistributionSpec::CenteredPareto { shape: 1.9, scale: 1.0 },
            DistKind::StudentT => DistributionSpec::StudentT { df: 1.8, location: 0.0 },
            DistKind::TwoPoint => DistributionSpec::TwoPoint {
                values: [-1.0, 1.0],
                probabilities: [0.5, 0.5],
            },
        },
    };
    let pair = |v: &Option<Vec<f64>>, name: &str, current: [f64; 2]| match v {
        None => Ok(current),
        Some(v) if v.len() == 2 => Ok([v[0], v[1]]),
        Some(v) => Err(CliError::Usage(format!("--{name} needs exactly two values, got {}", v.len()))),
    };
    let spec = match base {
        DistributionSpec::Gaussian { mean, sigma } => DistributionSpec::Gaussian {
            mean: args.mean.unwrap_or(mean),
            sigma: args.sigma.unwrap_or(sigma),
        },
        DistributionSpec::CenteredPareto { shape, scale } => DistributionSpec::CenteredPareto {
            shape: args.shape.unwrap_or(shape),
            scale: args.scale.unwrap_or(scale),
        },
        DistributionSpec::StudentT { df, location } => DistributionSpec::StudentT {
            df: args.df.unwrap_or(df),
            location: args.location.unwrap_or(location),
        },
        DistributionSpec::TwoPoint { values, probabilities } => DistributionSpec::TwoPoint {
            values: pair(&args.values, "values", values)?,
            probabilities: pair(&args.probs, "probs", probabilities)?,
        },
    };
    spec.validate()?;
    Ok(spec)
}

fn schedule(args: &RunArgs, file: Option<&LambdaSchedule>, p: f64) -> Result<LambdaSchedule, CliError> {
    let kind = args.schedule.or(if args.lambdas.is_some() {
        Some(ScheduleKind::Custom)
    } else if args.c.is_some() {
        Some(ScheduleKind::PowerLaw)
    } else {
        None
    });
    Ok(match (kind, file) {
        (Some(ScheduleKind::Custom), _) => {
            let values = args
                .lambdas
                .clone()
                .ok_or_else(|| CliError::Usage("--schedule custom needs --lambdas".into()))?;
            LambdaSchedule::custom(values)?
        }
        (Some(ScheduleKind::PowerLaw), _) => LambdaSchedule::power_law(args.c.unwrap_or(1.0), p)?,
        (None, Some(s)) => s.clone(),
        (None, None) => LambdaSchedule::power_law(1.0, p)?,
    })
}

fn check_range(name: &str, value: f64, ok: bool, expected: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!("invalid {name} = {value}: {expected}")))
    }
}

/// Resolves flags over file values over defaults. `env_seed` is the raw
/// value of [`SEED_ENV`], used when neither flag nor file sets a seed.
pub fn resolve(command: &str, args: &RunArgs, env_seed: Option<&str>) -> Result<(RunConfig, OutputOptions), CliError> {
    let file = match &args.config {
        Some(path) => PartialConfig::load(path)?,
        None => PartialConfig::default(),
    };
    let env_seed = match env_seed {
        Some(s) => Some(
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV} = {s:?} is not a non-negative integer")))?,
        ),
        None => None,
    };
    let p = args.p.or(file.p).unwrap_or(2.0);
    let alpha = args.alpha.or(file.alpha).unwrap_or(0.05);
    let n = args.n.or(file.n).unwrap_or(10_000);
    let reps = args.reps.or(file.reps).unwrap_or(100);
    let stride = args.stride.or(file.stride).unwrap_or(1);
    check_range("p", p, p > 1.0 && p <= 2.0, "p must lie in (1, 2]")?;
    check_range("alpha", alpha, alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)")?;
    check_range("n", n as f64, n >= 1, "the horizon must be at least 1")?;
    check_range("reps", reps as f64, reps >= 1, "at least one replication is needed")?;
    check_range("stride", stride as f64, stride >= 1, "stride must be at least 1")?;

    let config = RunConfig {
        command: command.to_string(),
        method: args.method.or(file.method).unwrap_or(MethodChoice::Catoni),
        distribution: distribution(args, file.distribution.as_ref())?,
        p,
        alpha,
        n,
        reps,
        schedule: schedule(args, file.schedule.as_ref(), p)?,
        t: args.t.or(file.t).unwrap_or(0.5),
        tau: args.tau.or(file.tau).unwrap_or(0.1),
        b: args.b.or(file.b).unwrap_or(1.0),
        v_p: args.v_p.or(file.v_p),
        seed: args.seed.or(file.seed).or(env_seed).unwrap_or(0),
        stride,
        checkpoints: args.checkpoints.clone().or(file.checkpoints),
        a: args.a.or(file.a),
    };
    if let Some(threads) = args.threads.or(file.threads) {
        check_range("threads", threads as f64, threads >= 1, "at least one thread is needed")?;
    }
    let options = OutputOptions {
        format: args.format.or(file.format).unwrap_or(Format::Csv),
        output: args.output.clone().or(file.output),
        svg: args.svg.clone().or(file.svg),
        threads: args.threads.or(file.threads),
    };
    Ok((config, options))
}

impl RunConfig {
    pub fn methods(&self) -> Vec<Method> {
        match self.method {
            MethodChoice::Catoni => vec![Method::Catoni],
            MethodChoice::Ds => vec![Method::DubinsSavage],
            MethodChoice::Both => vec![Method::Catoni, Method::DubinsSavage],
        }
    }

    pub fn spec(&self, method: Method, threads: Option<usize>) -> ExperimentSpec {
        ExperimentSpec {
            horizon: self.n,
            replications: self.reps,
            seed: self.seed,
            stride: self.stride,
            v_p: self.v_p,
            schedule: Some(self.schedule.clone()),
            t: self.t,
            tau: self.tau,
            b: self.b,
            threads,
            ..ExperimentSpec::new(method, self.distribution.clone(), self.p, self.alpha)
        }
    }
}
