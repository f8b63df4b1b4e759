//! Deterministic weight sequences `λ_t` and their running prefix sums.
//!
//! The Catoni construction needs `λ_t → 0` with `Σ λ_t^p = ∞`; the
//! power-law family `λ_t = c t^{-1/p}` meets both. The Dubins-Savage family
//! is the per-step minimiser of `b v_p λ^{p-1} + a / (t λ)`.

use serde::{Deserialize, Serialize};

use crate::error::{check_order, check_positive, Error, Result};
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaSchedule {
    /// `λ_t = c · t^{-1/p}`.
    PowerLaw { c: f64, p: f64 },
    /// `λ_t = (a / (t b v_p (p - 1)))^{1/p}`.
    DsOptimal { p: f64, a: f64, b: f64, v_p: f64 },
    /// Explicit weights for `t = 1..=values.len()`.
    Custom { values: Vec<f64> },
}

impl LambdaSchedule {
    pub fn power_law(c: f64, p: f64) -> Result<Self> {
        check_positive("c", c)?;
        check_order(p)?;
        Ok(LambdaSchedule::PowerLaw { c, p })
    }

    pub fn ds_optimal(p: f64, a: f64, b: f64, v_p: f64) -> Result<Self> {
        check_order(p)?;
        check_positive("a", a)?;
        check_positive("b", b)?;
        check_positive("v_p", v_p)?;
        Ok(LambdaSchedule::DsOptimal { p, a, b, v_p })
    }

    /// Builds a custom schedule. The divergence condition is not checked
    /// here; see [`LambdaSchedule::advisories`].
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("custom schedule needs at least one weight".into()));
        }
        for &v in &values {
            check_positive("lambda", v)?;
        }
        Ok(LambdaSchedule::Custom { values })
    }

    /// `λ_t` for `t ≥ 1`.
    pub fn lambda_at(&self, t: u64) -> Result<f64> {
        if t == 0 {
            return Err(Error::domain("t", 0.0, "schedule index starts at 1"));
        }
        let tf = t as f64;
        match self {
            LambdaSchedule::PowerLaw { c, p } => Ok(c * tf.powf(-1.0 / p)),
            LambdaSchedule::DsOptimal { p, a, b, v_p } => {
                Ok((a / (tf * b * v_p * (p - 1.0))).powf(1.0 / p))
            }
            LambdaSchedule::Custom { values } => values.get((t - 1) as usize).copied().ok_or_else(|| {
                Error::Config(format!(
                    "custom schedule has {} weights, index {t} requested",
                    values.len()
                ))
            }),
        }
    }

    /// Number of weights available, `None` for unbounded schedules.
    pub fn horizon(&self) -> Option<u64> {
        match self {
            LambdaSchedule::Custom { values } => Some(values.len() as u64),
            _ => None,
        }
    }

    /// The first `n` weights. Fails when a custom list is shorter than `n`.
    pub fn weights(&self, n: u64) -> Result<Vec<f64>> {
        (1..=n).map(|t| self.lambda_at(t)).collect()
    }

    /// Advisory checks of `λ_t → 0` and `Σ λ_t^p = ∞` for custom lists.
    ///
    /// Both conditions are asymptotic, so a finite list can only be flagged
    /// as suspicious, never rejected.
    pub fn advisories(&self, p: f64) -> Vec<String> {
        let LambdaSchedule::Custom { values } = self else {
            return Vec::new();
        };
        let mut notes = Vec::new();
        if values.windows(2).any(|w| w[1] > w[0]) {
            notes.push("weights are not nonincreasing; λ_t → 0 cannot be read off the list".to_string());
        }
        let first = values[0];
        let last = values[values.len() - 1];
        if values.len() > 1 && last >= first {
            notes.push(format!("last weight {last} is not below the first {first}; λ_t does not appear to vanish"));
        }
        if values.len() >= 4 {
            // Σ λ^p over the second half should keep pace with log growth.
            let half = values.len() / 2;
            let head: f64 = values[..half].iter().map(|l| l.powf(p)).sum();
            let tail: f64 = values[half..].iter().map(|l| l.powf(p)).sum();
            if tail < 0.1 * head * (2.0f64).ln() / (half as f64).ln().max(1.0) {
                notes.push("Σ λ_t^p grows slowly over the second half of the list; it may converge".to_string());
            }
        }
        notes.push(format!(
            "custom schedule ends at t = {}; longer streams are rejected",
            values.len()
        ));
        notes
    }
}

/// Running sums `Σ λ_i`, `Σ λ_i^p`, `Σ λ_i²` for `i ≤ n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixSums {
    p: f64,
    n: u64,
    sum_lambda: CompensatedSum,
    sum_lambda_p: CompensatedSum,
    sum_lambda_sq: CompensatedSum,
    max_lambda: f64,
}

impl PrefixSums {
    pub fn new(p: f64) -> Result<Self> {
        check_order(p)?;
        Ok(PrefixSums {
            p,
            n: 0,
            sum_lambda: CompensatedSum::new(),
            sum_lambda_p: CompensatedSum::new(),
            sum_lambda_sq: CompensatedSum::new(),
            max_lambda: 0.0,
        })
    }

    /// Batch computation over the first `n` weights of `schedule`.
    pub fn from_schedule(schedule: &LambdaSchedule, p: f64, n: u64) -> Result<Self> {
        let mut sums = PrefixSums::new(p)?;
        for _ in 0..n {
            sums.extend(schedule)?;
        }
        Ok(sums)
    }

    /// Appends the weight `λ`.
    #[inline]
    pub fn push(&mut self, lambda: f64) {
        self.n += 1;
        self.sum_lambda.add(lambda);
        let lp = if self.p == 2.0 { lambda * lambda } else { lambda.powf(self.p) };
        self.sum_lambda_p.add(lp);
        self.sum_lambda_sq.add(lambda * lambda);
        self.max_lambda = self.max_lambda.max(lambda);
    }

    /// Advances by one step of `schedule` and returns the weight used.
    pub fn extend(&mut self, schedule: &LambdaSchedule) -> Result<f64> {
        let lambda = schedule.lambda_at(self.n + 1)?;
        self.push(lambda);
        Ok(lambda)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sum_lambda(&self) -> f64 {
        self.sum_lambda.value()
    }

    pub fn sum_lambda_p(&self) -> f64 {
        self.sum_lambda_p.value()
    }

    pub fn sum_lambda_sq(&self) -> f64 {
        self.sum_lambda_sq.value()
    }

    pub fn max_lambda(&self) -> f64 {
        self.max_lambda
    }
}
