//! A law-of-the-iterated-logarithm floor on the Catoni width for `p = 2`,
//! and the Monte Carlo checks behind it.
//!
//! For finite variance `σ²` and weights with `λ_i ↓ 0`, `Σ λ_i² = ∞`, the
//! width eventually exceeds `a (S₂ log log S₂)^{1/2} / S₁` for any
//! `a < 2σ√2`, where `S₁ = Σ λ_i` and `S₂ = Σ λ_i²`.

use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, Normal, StudentsT};

use crate::error::{check_positive, Error, Result};
use crate::harness::{replication_rng, DistributionSpec};
use crate::influence::InfluenceFunction;
use crate::quadrature::{integrate_to_infinity, QuadOptions};
use crate::schedules::{LambdaSchedule, PrefixSums};
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LilConfig {
    sigma: f64,
    a: f64,
    schedule: LambdaSchedule,
    vartheta: f64,
}

impl LilConfig {
    /// Power-law weights must have `p = 2` exactly (otherwise `Σ λ_i² < ∞`);
    /// custom lists must be nonincreasing.
    pub fn new(sigma: f64, a: f64, schedule: LambdaSchedule, vartheta: f64) -> Result<Self> {
        check_positive("sigma", sigma)?;
        let sup = 2.0 * sigma * std::f64::consts::SQRT_2;
        if !(a > 0.0 && a < sup) {
            return Err(Error::domain("a", a, "needs 0 < a < 2·sigma·sqrt(2)"));
        }
        if !(vartheta > 0.0 && vartheta <= 1.0) {
            return Err(Error::domain("vartheta", vartheta, "needs 0 < vartheta <= 1"));
        }
        match &schedule {
            LambdaSchedule::PowerLaw { p, .. } | LambdaSchedule::DsOptimal { p, .. } if *p != 2.0 => {
                return Err(Error::Config(format!(
                    "weights decaying like t^(-1/{p}) have a summable square; the floor needs Σλ² = ∞"
                )));
            }
            LambdaSchedule::Custom { values } if values.windows(2).any(|w| w[1] > w[0]) => {
                return Err(Error::Config("custom weights must be nonincreasing".into()));
            }
            _ => {}
        }
        Ok(LilConfig { sigma, a, schedule, vartheta })
    }

    /// `a = σ√2`, half the supremum, with `λ_i = i^{-1/2}`.
    pub fn matched(sigma: f64) -> Result<Self> {
        Self::new(sigma, sigma * std::f64::consts::SQRT_2, LambdaSchedule::power_law(1.0, 2.0)?, 1.0)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn schedule(&self) -> &LambdaSchedule {
        &self.schedule
    }
    pub fn vartheta(&self) -> f64 {
        self.vartheta
    }

    /// The floor from given `S₁`, `S₂`; `None` while `S₂ ≤ e`.
    pub fn floor_from_sums(&self, sum_lambda: f64, sum_lambda_sq: f64) -> Option<f64> {
        (sum_lambda_sq > std::f64::consts::E)
            .then(|| self.a * (sum_lambda_sq * sum_lambda_sq.ln().ln()).sqrt() / sum_lambda)
    }
}

/// `a (S₂ log log S₂)^{1/2} / S₁` at time `n`, or `None` while `S₂ ≤ e`.
pub fn lil_floor(cfg: &LilConfig, n: u64) -> Result<Option<f64>> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "n must be at least 1"));
    }
    let sums = PrefixSums::from_schedule(&cfg.schedule, 2.0, n)?;
    Ok(cfg.floor_from_sums(sums.sum_lambda(), sums.sum_lambda_sq()))
}

/// [`lil_floor`] for `n = 1..=n_max`.
pub fn lil_floor_profile(cfg: &LilConfig, n_max: u64) -> Result<Vec<Option<f64>>> {
    let mut sums = PrefixSums::new(2.0)?;
    let mut out = Vec::with_capacity(n_max as usize);
    for _ in 0..n_max {
        sums.extend(&cfg.schedule)?;
        out.push(cfg.floor_from_sums(sums.sum_lambda(), sums.sum_lambda_sq()));
    }
    Ok(out)
}

/// `θ = s (2 log log s²)^{1/2}`, or `None` when `s² ≤ e`.
pub fn theta_n(s_n: f64) -> Option<f64> {
    let s2 = s_n * s_n;
    (s_n > 0.0 && s2 > std::f64::consts::E).then(|| s_n * (2.0 * s2.ln().ln()).sqrt())
}

/// Mean and variance of `ψ(λ(X - μ))` for the classic influence function.
///
/// Exact for two-point laws; by quadrature for the symmetric Gaussian and
/// Student-t laws, whose mean is zero by oddness of `ψ`.
pub fn influence_moments(dist: &DistributionSpec, lambda: f64) -> Result<(f64, f64)> {
    check_positive("lambda", lambda)?;
    let psi = InfluenceFunction::catoni();
    let opts = QuadOptions {
        rel_tol: 1e-12,
        ..QuadOptions::default()
    };
    let bad = |e: &dyn std::fmt::Display| Error::Config(format!("{}: {e}", dist.label()));
    match *dist {
        DistributionSpec::TwoPoint { values, probabilities } => {
            let mu = dist.true_mean();
            let y = values.map(|v| psi.eval(lambda * (v - mu)));
            let mean = probabilities[0] * y[0] + probabilities[1] * y[1];
            let var = probabilities[0] * (y[0] - mean).powi(2) + probabilities[1] * (y[1] - mean).powi(2);
            Ok((mean, var))
        }
        DistributionSpec::Gaussian { sigma, .. } => {
            let density = Normal::new(0.0, sigma).map_err(|e| bad(&e))?;
            let q = integrate_to_infinity(|z| psi.eval(lambda * z).powi(2) * density.pdf(z), 0.0, opts)?;
            Ok((0.0, 2.0 * q.value))
        }
        DistributionSpec::StudentT { df, .. } => {
            let density = StudentsT::new(0.0, 1.0, df).map_err(|e| bad(&e))?;
            let q = integrate_to_infinity(|z| psi.eval(lambda * z).powi(2) * density.pdf(z), 0.0, opts)?;
            Ok((0.0, 2.0 * q.value))
        }
        DistributionSpec::CenteredPareto { .. } => Err(Error::Config(
            "influence moments are only available for symmetric or two-point laws".into(),
        )),
    }
}

/// Monte Carlo summary of `Y = ψ(λ(X - μ))` at one `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YVarianceRow {
    /// Schedule index, when the row came from a schedule.
    pub index: Option<u64>,
    pub lambda: f64,
    pub samples: u64,
    pub mean: f64,
    pub mean_std_err: f64,
    /// `λ² σ² / 2`, the bound on `|E Y|`.
    pub mean_bound: f64,
    pub variance: f64,
    /// `Var(Y) / (λ² σ²)`.
    pub ratio: f64,
    /// Delta-method standard error of `ratio`.
    pub ratio_std_err: f64,
}

/// Draws `samples` copies of `Y` at weight `lambda`.
pub fn y_variance_at(dist: &DistributionSpec, lambda: f64, samples: u64, seed: u64) -> Result<YVarianceRow> {
    check_positive("lambda", lambda)?;
    if samples < 2 {
        return Err(Error::Config("need at least two samples".into()));
    }
    let sigma2 = dist
        .variance()
        .ok_or_else(|| Error::Config(format!("{} has infinite variance", dist.label())))?;
    let psi = InfluenceFunction::catoni();
    let sampler = dist.sampler()?;
    let mu = dist.true_mean();
    let mut rng = replication_rng(seed, 0);
    let ys: Vec<f64> = (0..samples).map(|_| psi.eval(lambda * (sampler.sample(&mut rng) - mu))).collect();
    let n = samples as f64;
    let mean = ys.iter().copied().collect::<CompensatedSum>().value() / n;
    let m2 = ys.iter().map(|y| (y - mean).powi(2)).collect::<CompensatedSum>().value() / n;
    let m4 = ys.iter().map(|y| (y - mean).powi(4)).collect::<CompensatedSum>().value() / n;
    let variance = m2 * n / (n - 1.0);
    let scale = lambda * lambda * sigma2;
    Ok(YVarianceRow {
        index: None,
        lambda,
        samples,
        mean,
        mean_std_err: (variance / n).sqrt(),
        mean_bound: scale / 2.0,
        variance,
        ratio: variance / scale,
        ratio_std_err: ((m4 - m2 * m2).max(0.0) / n).sqrt() / scale,
    })
}

/// [`y_variance_at`] at `i = 1, 10, 100, …` up to `i_max`, with an
/// independent stream per index.
pub fn y_variance_check(
    dist: &DistributionSpec,
    schedule: &LambdaSchedule,
    i_max: u64,
    samples: u64,
    seed: u64,
) -> Result<Vec<YVarianceRow>> {
    let mut rows = Vec::new();
    let mut i = 1;
    while i <= i_max {
        let mut row = y_variance_at(dist, schedule.lambda_at(i)?, samples, seed.wrapping_add(i))?;
        row.index = Some(i);
        rows.push(row);
        i = i.saturating_mul(10);
    }
    Ok(rows)
}

/// One point of the LIL diagnostic `Σ (Y_i - E Y_i) / θ_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LilTracePoint {
    pub n: u64,
    /// `s_n = (Σ Var Y_i)^{1/2}`.
    pub s_n: f64,
    pub theta: Option<f64>,
    pub centered_sum: f64,
    pub ratio: Option<f64>,
}

/// The normalised centred sum along one stream, reported at `checkpoints`.
/// Its limsup is one; this is a trace for plotting, not a test.
pub fn lil_trace(
    dist: &DistributionSpec,
    schedule: &LambdaSchedule,
    checkpoints: &[u64],
    seed: u64,
) -> Result<Vec<LilTracePoint>> {
    let psi = InfluenceFunction::catoni();
    let sampler = dist.sampler()?;
    let mu = dist.true_mean();
    let mut rng = replication_rng(seed, 0);
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    let mut centered = CompensatedSum::new();
    let mut var = CompensatedSum::new();
    let mut n = 0;
    let mut out = Vec::with_capacity(cps.len());
    for target in cps {
        while n < target {
            n += 1;
            let lambda = schedule.lambda_at(n)?;
            let (ey, vy) = influence_moments(dist, lambda)?;
            centered.add(psi.eval(lambda * (sampler.sample(&mut rng) - mu)) - ey);
            var.add(vy);
        }
        let s_n = var.value().sqrt();
        let theta = theta_n(s_n);
        out.push(LilTracePoint {
            n,
            s_n,
            theta,
            centered_sum: centered.value(),
            ratio: theta.map(|t| centered.value() / t),
        });
    }
    Ok(out)
}
