//! Confidence sequence from the L_p Dubins-Savage inequality.
//!
//! For a martingale with `V_i = E[|ΔS_i|^p | F_{i-1}]`,
//! `P(S_t ≥ a + b Σ V_i) ≤ (1 + m_p a b^{1/(p-1)})^{-(p-1)}`. Applied to
//! `±Σ λ_i (X_i - μ)` with `V_i ≤ λ_i^p v_p` and `a` chosen so each side has
//! level `α/2`, this gives the interval
//! `Σ λ_i X_i / Σ λ_i ± (a + b v_p Σ λ_i^p) / Σ λ_i`.

use serde::{Deserialize, Serialize};

use crate::catoni::ConfidenceInterval;
use crate::error::{check_alpha, check_order, check_positive, Error, Result};
use crate::schedules::{LambdaSchedule, PrefixSums};
use crate::summation::CompensatedSum;

/// `m_p = ((p-1) / 2^{2-p})^{1/(p-1)}`.
pub fn m_p(p: f64) -> Result<f64> {
    check_order(p)?;
    Ok(((p - 1.0) / 2f64.powf(2.0 - p)).powf(1.0 / (p - 1.0)))
}

/// Tail bound `1 / (1 + m_p a b^{1/(p-1)})^{p-1}` for `a ≥ 0`, `b > 0`.
pub fn ds_tail_bound(a: f64, b: f64, p: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::domain("a", a, "must be nonnegative"));
    }
    check_positive("b", b)?;
    let m = m_p(p)?;
    Ok((1.0 + m * a * b.powf(1.0 / (p - 1.0))).powf(-(p - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DsConfig {
    p: f64,
    v_p: f64,
    alpha: f64,
    b: f64,
}

impl DsConfig {
    pub fn new(p: f64, v_p: f64, alpha: f64, b: f64) -> Result<Self> {
        check_order(p)?;
        check_positive("v_p", v_p)?;
        check_alpha(alpha)?;
        check_positive("b", b)?;
        Ok(DsConfig { p, v_p, alpha, b })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn v_p(&self) -> f64 {
        self.v_p
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn m_p(&self) -> f64 {
        m_p(self.p).expect("validated p")
    }

    /// `a = ((2/α)^{1/(p-1)} - 1) / (m_p b^{1/(p-1)})`, making each one-sided
    /// tail bound exactly `α/2`.
    pub fn a(&self) -> f64 {
        let q = 1.0 / (self.p - 1.0);
        ((2.0 / self.alpha).powf(q) - 1.0) / (self.m_p() * self.b.powf(q))
    }

    /// `λ_t = (a / (t b v_p (p-1)))^{1/p}`.
    pub fn schedule(&self) -> LambdaSchedule {
        LambdaSchedule::DsOptimal {
            p: self.p,
            a: self.a(),
            b: self.b,
            v_p: self.v_p,
        }
    }

    /// Certified radius `(a + b v_p Σ λ_i^p) / Σ λ_i`.
    pub fn radius(&self, sum_lambda: f64, sum_lambda_p: f64) -> f64 {
        (self.a() + self.b * self.v_p * sum_lambda_p) / sum_lambda
    }
}

/// `ds_a` as a free function.
pub fn ds_a(cfg: &DsConfig) -> f64 {
    cfg.a()
}

/// Running sums `Σ λ_i`, `Σ λ_i X_i`, `Σ λ_i^p` under a weight schedule.
#[derive(Debug, Clone)]
pub struct DsState {
    schedule: LambdaSchedule,
    prefix: PrefixSums,
    sum_lambda_x: CompensatedSum,
}

impl DsState {
    /// State driven by the width-optimal schedule of `cfg`.
    pub fn new(cfg: &DsConfig) -> Self {
        Self::with_schedule(cfg, cfg.schedule())
    }

    pub fn with_schedule(cfg: &DsConfig, schedule: LambdaSchedule) -> Self {
        DsState {
            schedule,
            prefix: PrefixSums::new(cfg.p).expect("validated p"),
            sum_lambda_x: CompensatedSum::new(),
        }
    }

    pub fn update(&mut self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain("x", x, "observations must be finite"));
        }
        let lambda = self.prefix.extend(&self.schedule)?;
        self.sum_lambda_x.add(lambda * x);
        Ok(lambda)
    }

    pub fn n(&self) -> u64 {
        self.prefix.n()
    }
    pub fn sum_lambda(&self) -> f64 {
        self.prefix.sum_lambda()
    }
    pub fn sum_lambda_x(&self) -> f64 {
        self.sum_lambda_x.value()
    }
    pub fn sum_lambda_p(&self) -> f64 {
        self.prefix.sum_lambda_p()
    }
    pub fn schedule(&self) -> &LambdaSchedule {
        &self.schedule
    }

    pub fn interval(&self, cfg: &DsConfig) -> Result<ConfidenceInterval> {
        if self.n() == 0 {
            return Err(Error::State("no observations yet".into()));
        }
        let center = self.sum_lambda_x() / self.sum_lambda();
        let radius = cfg.radius(self.sum_lambda(), self.sum_lambda_p());
        ConfidenceInterval::new(center - radius, center + radius)
    }
}

/// Certified width `2 (a + b v_p Σ λ_i^p) / Σ λ_i` at time `n` under the
/// width-optimal schedule. It does not depend on the data.
pub fn ds_width(cfg: &DsConfig, n: u64) -> Result<f64> {
    let sums = optimal_sums(cfg, n)?;
    Ok(2.0 * cfg.radius(sums.sum_lambda(), sums.sum_lambda_p()))
}

/// The width expression `2 b v_p Σ λ_i^p / Σ λ_i`, which drops the `a`
/// term; kept for comparison with [`ds_width`].
pub fn ds_width_without_offset(cfg: &DsConfig, n: u64) -> Result<f64> {
    let sums = optimal_sums(cfg, n)?;
    Ok(2.0 * cfg.b * cfg.v_p * sums.sum_lambda_p() / sums.sum_lambda())
}

fn optimal_sums(cfg: &DsConfig, n: u64) -> Result<PrefixSums> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "n must be at least 1"));
    }
    PrefixSums::from_schedule(&cfg.schedule(), cfg.p, n)
}

/// Certified widths for every `n` up to `n_max` in one pass.
pub fn ds_width_profile(cfg: &DsConfig, n_max: u64) -> Result<Vec<f64>> {
    let schedule = cfg.schedule();
    let mut sums = PrefixSums::new(cfg.p)?;
    let mut out = Vec::with_capacity(n_max as usize);
    for _ in 0..n_max {
        sums.extend(&schedule)?;
        out.push(2.0 * cfg.radius(sums.sum_lambda(), sums.sum_lambda_p()));
    }
    Ok(out)
}
