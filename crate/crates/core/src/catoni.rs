//! Catoni-style confidence sequence for `p ∈ (1, 2]`.
//!
//! With `f_n(x) = Σ_{i≤n} φ(λ_i (X_i - x))` and the threshold
//! `T_n = log(2/α) + C_p v_p Σ_{i≤n} λ_i^p`, the confidence set at time `n` is
//! `{x : -T_n ≤ f_n(x) ≤ T_n}`. `f_n` is strictly decreasing, so the set is
//! the interval between the roots of `f_n(x) = T_n` (lower end) and
//! `f_n(x) = -T_n` (upper end).
//!
//! The width guarantee is driven by the deterministic quantities in
//! [`BoundPoint`]: the failure weights `ε_n`, the applicability condition and
//! the bound `4(1+τ_n)(C_p v_p Σ λ_i^p (1 + t_i^{-(p-1)}) + log(2/α)) / Σ λ_i`.
//!
//! All observations are retained: `f_n` has no finite sufficient statistic,
//! so memory is O(n) and each interval solve costs O(n) per bisection step.

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, check_order, check_positive, Error, Result};
use crate::influence::{InfluenceFunction, InfluenceKind};
use crate::roots::{solve_monotone, Monotonicity, RootOptions};
use crate::schedules::{LambdaSchedule, PrefixSums};
use crate::summation::CompensatedSum;

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Bracket doublings allowed before an interval solve gives up.
pub const MAX_BRACKET_DOUBLINGS: u32 = 200;

/// A positive tuning sequence indexed from 1 (`t_i` or `τ_n`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuningSequence {
    Constant(f64),
    /// Explicit values; indices past the end reuse the last value.
    Values(Vec<f64>),
}

impl TuningSequence {
    #[inline]
    pub fn at(&self, i: u64) -> f64 {
        match self {
            TuningSequence::Constant(v) => *v,
            TuningSequence::Values(vs) => {
                let idx = (i.max(1) - 1) as usize;
                vs[idx.min(vs.len() - 1)]
            }
        }
    }

    fn check(&self, name: &'static str, open_unit: bool) -> Result<()> {
        let values: &[f64] = match self {
            TuningSequence::Constant(v) => std::slice::from_ref(v),
            TuningSequence::Values(vs) if vs.is_empty() => {
                return Err(Error::Config(format!("{name} sequence is empty")))
            }
            TuningSequence::Values(vs) => vs,
        };
        for &v in values {
            if open_unit {
                if !(v > 0.0 && v < 1.0) {
                    return Err(Error::domain(name, v, "must lie in (0, 1)"));
                }
            } else {
                check_positive(name, v)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatoniConfig {
    p: f64,
    v_p: f64,
    alpha: f64,
    schedule: LambdaSchedule,
    t_seq: TuningSequence,
    tau_seq: TuningSequence,
    root_tol: Option<f64>,
    influence: InfluenceFunction,
}

impl CatoniConfig {
    /// Defaults: `λ_t = t^{-1/p}`, `t_i ≡ 1/2`, `τ_n ≡ 0.1`, the tight
    /// influence function and a relative root tolerance.
    pub fn new(p: f64, v_p: f64, alpha: f64) -> Result<Self> {
        check_order(p)?;
        check_positive("v_p", v_p)?;
        check_alpha(alpha)?;
        Ok(CatoniConfig {
            p,
            v_p,
            alpha,
            schedule: LambdaSchedule::power_law(1.0, p)?,
            t_seq: TuningSequence::Constant(0.5),
            tau_seq: TuningSequence::Constant(0.1),
            root_tol: None,
            influence: InfluenceFunction::new(p, InfluenceKind::TightUpper)?,
        })
    }

    pub fn with_schedule(mut self, schedule: LambdaSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_t(mut self, t_seq: TuningSequence) -> Result<Self> {
        t_seq.check("t", true)?;
        self.t_seq = t_seq;
        Ok(self)
    }

    pub fn with_tau(mut self, tau_seq: TuningSequence) -> Result<Self> {
        tau_seq.check("tau", false)?;
        self.tau_seq = tau_seq;
        Ok(self)
    }

    /// Absolute endpoint tolerance; the default is `1e-9 · max(1, |x̂|)`.
    pub fn with_root_tol(mut self, tol: f64) -> Result<Self> {
        check_positive("root_tol", tol)?;
        self.root_tol = Some(tol);
        Ok(self)
    }

    pub fn with_influence(mut self, influence: InfluenceFunction) -> Result<Self> {
        if influence.p() != self.p {
            return Err(Error::Config(format!(
                "influence order {} does not match p = {}",
                influence.p(),
                self.p
            )));
        }
        self.influence = influence;
        Ok(self)
    }

    /// Re-checks every invariant (useful after deserialising).
    pub fn validate(&self) -> Result<()> {
        check_order(self.p)?;
        check_positive("v_p", self.v_p)?;
        check_alpha(self.alpha)?;
        self.t_seq.check("t", true)?;
        self.tau_seq.check("tau", false)?;
        if self.influence.p() != self.p {
            return Err(Error::Config("influence order does not match p".into()));
        }
        if let Some(tol) = self.root_tol {
            check_positive("root_tol", tol)?;
        }
        Ok(())
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
    pub fn schedule(&self) -> &LambdaSchedule {
        &self.schedule
    }
    pub fn t_seq(&self) -> &TuningSequence {
        &self.t_seq
    }
    pub fn tau_seq(&self) -> &TuningSequence {
        &self.tau_seq
    }
    pub fn influence(&self) -> &InfluenceFunction {
        &self.influence
    }
    pub fn c_p(&self) -> f64 {
        self.influence.c_p()
    }

    /// `T = log(2/α) + C_p v_p Σ λ_i^p`.
    pub fn threshold(&self, sum_lambda_p: f64) -> f64 {
        (2.0 / self.alpha).ln() + self.c_p() * self.v_p * sum_lambda_p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
}

impl ConfidenceInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower <= upper) {
            return Err(Error::Numeric(format!("interval endpoints out of order: [{lower}, {upper}]")));
        }
        Ok(ConfidenceInterval {
            lower,
            upper,
            width: upper - lower,
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Running intersection of the intervals of a confidence sequence.
///
/// Intersecting never loses coverage; the raw sequence is what the width
/// results describe, so this is opt-in.
#[derive(Debug, Clone, Default)]
pub struct RunningIntersection {
    current: Option<(f64, f64)>,
}

impl RunningIntersection {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intersects with `ci`. `None` once the intersection is empty.
    pub fn update(&mut self, ci: &ConfidenceInterval) -> Option<ConfidenceInterval> {
        let (lo, hi) = match self.current {
            None => (ci.lower, ci.upper),
            Some((lo, hi)) => (lo.max(ci.lower), hi.min(ci.upper)),
        };
        self.current = Some((lo, hi));
        ConfidenceInterval::new(lo, hi).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Value of a supermartingale, kept in log space; `value` saturates to `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupermartingaleValue {
    pub log_value: f64,
    pub value: f64,
    pub overflowed: bool,
}

impl SupermartingaleValue {
    fn from_log(log_value: f64) -> Self {
        let value = log_value.exp();
        SupermartingaleValue {
            log_value,
            value,
            overflowed: value.is_infinite(),
        }
    }
}

/// Observations and weights seen so far.
#[derive(Debug, Clone)]
pub struct CatoniState {
    observations: Vec<f64>,
    weights: Vec<f64>,
    prefix: PrefixSums,
}

impl CatoniState {
    pub fn new(config: &CatoniConfig) -> Self {
        CatoniState {
            observations: Vec::new(),
            weights: Vec::new(),
            prefix: PrefixSums::new(config.p).expect("config validated p"),
        }
    }

    pub fn with_capacity(config: &CatoniConfig, capacity: usize) -> Self {
        let mut state = Self::new(config);
        state.observations.reserve(capacity);
        state.weights.reserve(capacity);
        state
    }

    pub fn n(&self) -> u64 {
        self.prefix.n()
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn prefix(&self) -> &PrefixSums {
        &self.prefix
    }

    /// Appends an observation and returns the weight it received.
    pub fn update(&mut self, config: &CatoniConfig, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain("x", x, "observations must be finite"));
        }
        let lambda = self.prefix.extend(&config.schedule)?;
        self.observations.push(x);
        self.weights.push(lambda);
        Ok(lambda)
    }

    fn require_data(&self) -> Result<()> {
        if self.observations.is_empty() {
            Err(Error::State("no observations yet".into()))
        } else {
            Ok(())
        }
    }

    /// `f_n(x) = Σ φ(λ_i (X_i - x))`.
    pub fn psi_sum(&self, config: &CatoniConfig, x: f64) -> Result<f64> {
        self.require_data()?;
        Ok(self.psi_sum_unchecked(&config.influence, x))
    }

    fn psi_sum_unchecked(&self, influence: &InfluenceFunction, x: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for (&l, &obs) in self.weights.iter().zip(&self.observations) {
            acc.add(influence.eval(l * (obs - x)));
        }
        acc.value()
    }

    /// `T_n = log(2/α) + C_p v_p Σ λ_i^p`.
    pub fn threshold(&self, config: &CatoniConfig) -> f64 {
        config.threshold(self.prefix.sum_lambda_p())
    }

    /// Weighted mean `Σ λ_i X_i / Σ λ_i`.
    pub fn weighted_mean(&self) -> Result<f64> {
        self.require_data()?;
        let num = crate::summation::sum(self.weights.iter().zip(&self.observations).map(|(l, x)| l * x));
        Ok(num / self.prefix.sum_lambda())
    }

    /// Membership test `-T_n ≤ f_n(x) ≤ T_n`, equivalent to `x ∈ I_n`
    /// without solving for the endpoints.
    pub fn contains(&self, config: &CatoniConfig, x: f64) -> Result<bool> {
        let f = self.psi_sum(config, x)?;
        let t = self.threshold(config);
        Ok(-t <= f && f <= t)
    }

    /// The interval `I_n(α)` by bracket doubling and bisection.
    pub fn interval(&self, config: &CatoniConfig) -> Result<ConfidenceInterval> {
        self.require_data()?;
        let center = self.weighted_mean()?;
        let half_width = 1.0 + interquartile_range(&self.observations);
        let tol = config.root_tol.unwrap_or(1e-9 * center.abs().max(1.0));
        let target = self.threshold(config);
        let opts = RootOptions {
            tol,
            max_doublings: MAX_BRACKET_DOUBLINGS,
        };
        let f = |x: f64| self.psi_sum_unchecked(&config.influence, x);
        let solve = |target: f64| {
            solve_monotone(f, target, center - half_width, center + half_width, Monotonicity::Decreasing, opts)
                .map_err(|e| Error::Numeric(format!("{e} (n = {}, center = {center}, target = {target})", self.n())))
        };
        let lower = solve(target)?;
        let upper = solve(-target)?;
        // Both roots are within tol of the truth; keep them ordered.
        ConfidenceInterval::new(lower.min(upper), upper.max(lower))
    }

    /// `M_n^±(x)` for the true mean `mu`.
    ///
    /// With `use_t` the general process with `t_i` and `(1-t_i)` splitting is
    /// returned; without it `t_i ≡ 1`, which is only defined at `x = mu`.
    pub fn supermartingale(
        &self,
        config: &CatoniConfig,
        sign: Sign,
        mu: f64,
        x: f64,
        use_t: bool,
    ) -> Result<SupermartingaleValue> {
        let p = config.p;
        let cv = config.c_p() * config.v_p;
        let f = if self.observations.is_empty() {
            0.0
        } else {
            self.psi_sum_unchecked(&config.influence, x)
        };
        let log_value = if use_t {
            let mut shift = CompensatedSum::new();
            let mut variance = CompensatedSum::new();
            let mut split = CompensatedSum::new();
            for (i, &l) in self.weights.iter().enumerate() {
                let t = config.t_seq.at(i as u64 + 1);
                let lp = l.powf(p);
                shift.add(l);
                variance.add(lp * t.powf(-(p - 1.0)));
                split.add(lp * (1.0 - t).powf(-(p - 1.0)));
            }
            let gap = mu - x;
            let penalty = cv * variance.value() + config.c_p() * gap.abs().powf(p) * split.value();
            match sign {
                Sign::Plus => f - gap * shift.value() - penalty,
                Sign::Minus => -f + gap * shift.value() - penalty,
            }
        } else {
            if x != mu {
                return Err(Error::Config(
                    "t_i ≡ 1 leaves the process undefined away from the true mean".into(),
                ));
            }
            let penalty = cv * self.prefix.sum_lambda_p();
            match sign {
                Sign::Plus => f - penalty,
                Sign::Minus => -f - penalty,
            }
        };
        Ok(SupermartingaleValue::from_log(log_value))
    }
}

/// Spread of the data used to size the initial root bracket.
fn interquartile_range(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mut scratch = values.to_vec();
    let last = scratch.len() - 1;
    let q1_idx = last / 4;
    let q3_idx = (3 * last) / 4;
    let (_, q3, _) = scratch.select_nth_unstable_by(q3_idx, f64::total_cmp);
    let q3 = *q3;
    let (_, q1, _) = scratch[..=q3_idx].select_nth_unstable_by(q1_idx, f64::total_cmp);
    q3 - *q1
}

/// Deterministic quantities of the width guarantee at one time `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub n: u64,
    pub sum_lambda: f64,
    pub sum_lambda_p: f64,
    /// `Σ λ_i^p (1 + t_i^{-(p-1)})`
    pub sum_weighted: f64,
    /// `Σ λ_i^p (1 - t_i)^{-(p-1)}`
    pub sum_split: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub condition_holds: bool,
    /// Present exactly when the condition holds.
    pub width_bound: Option<f64>,
}

/// Streams [`BoundPoint`]s for `n = 1, 2, …` in O(1) per step.
#[derive(Debug, Clone)]
pub struct BoundScan<'a> {
    config: &'a CatoniConfig,
    prefix: PrefixSums,
    weighted: CompensatedSum,
    split: CompensatedSum,
}

impl<'a> BoundScan<'a> {
    pub fn new(config: &'a CatoniConfig) -> Self {
        BoundScan {
            config,
            prefix: PrefixSums::new(config.p).expect("config validated p"),
            weighted: CompensatedSum::new(),
            split: CompensatedSum::new(),
        }
    }

    pub fn next_point(&mut self) -> Result<BoundPoint> {
        let cfg = self.config;
        let p = cfg.p;
        let lambda = self.prefix.extend(&cfg.schedule)?;
        let n = self.prefix.n();
        let t = cfg.t_seq.at(n);
        let lp = lambda.powf(p);
        self.weighted.add(lp * (1.0 + t.powf(-(p - 1.0))));
        self.split.add(lp * (1.0 - t).powf(-(p - 1.0)));

        let c = cfg.c_p();
        let sum_lambda = self.prefix.sum_lambda();
        let sum_weighted = self.weighted.value();
        let sum_split = self.split.value();
        let tau = cfg.tau_seq.at(n);
        let log_2_alpha = (2.0 / cfg.alpha).ln();
        let exponent = c * cfg.v_p * sum_weighted;
        let epsilon = cfg.alpha * (-exponent).exp();

        // log(2/ε_n) = log(2/α) + exponent
        let lhs = 2.0 * (exponent + log_2_alpha);
        let q = 1.0 / (p - 1.0);
        let log_rhs = q * tau.ln() - p * q * tau.ln_1p() + p * q * sum_lambda.ln() - q * (c * sum_split).ln();
        let condition_holds = lhs.ln() <= log_rhs;
        let width_bound =
            condition_holds.then(|| 4.0 * (1.0 + tau) * (exponent + log_2_alpha) / sum_lambda);

        Ok(BoundPoint {
            n,
            sum_lambda,
            sum_lambda_p: self.prefix.sum_lambda_p(),
            sum_weighted,
            sum_split,
            tau,
            epsilon,
            condition_holds,
            width_bound,
        })
    }
}

impl Iterator for BoundScan<'_> {
    type Item = Result<BoundPoint>;

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(h) = self.config.schedule.horizon() {
            if self.prefix.n() >= h {
                return None;
            }
        }
        Some(self.next_point())
    }
}

/// The [`BoundPoint`] at time `n ≥ 1` (O(n)).
pub fn bound_point(config: &CatoniConfig, n: u64) -> Result<BoundPoint> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "n must be at least 1"));
    }
    let mut scan = BoundScan::new(config);
    let mut point = scan.next_point()?;
    for _ in 1..n {
        point = scan.next_point()?;
    }
    Ok(point)
}

/// `ε_n = α exp{-C_p v_p Σ λ_i^p (1 + t_i^{-(p-1)})}`.
pub fn epsilon_n(config: &CatoniConfig, n: u64) -> Result<f64> {
    bound_point(config, n).map(|b| b.epsilon)
}

/// Whether the width guarantee applies at time `n`.
pub fn condition_holds(config: &CatoniConfig, n: u64) -> Result<bool> {
    bound_point(config, n).map(|b| b.condition_holds)
}

/// The width bound at `n`, or `None` where the condition fails.
pub fn width_bound(config: &CatoniConfig, n: u64) -> Result<Option<f64>> {
    bound_point(config, n).map(|b| b.width_bound)
}

/// `Σ_{n≥1} ε_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureBudget {
    /// Sum of the terms evaluated directly.
    pub partial_sum: f64,
    pub terms: u64,
    /// Upper bound on the remaining tail, when one is available.
    pub tail_bound: Option<f64>,
    /// `partial_sum + tail_bound`; `None` when the series diverges or the
    /// tail cannot be bounded.
    pub total: Option<f64>,
}

/// Sums `ε_n` until the terms drop below `1e-16` or `max_terms` is reached,
/// then bounds the tail analytically for power-law schedules with constant
/// `t`, using `H_n ≥ log n + γ`.
pub fn failure_budget(config: &CatoniConfig, max_terms: u64) -> Result<FailureBudget> {
    let mut scan = BoundScan::new(config);
    let mut acc = CompensatedSum::new();
    let mut terms = 0;
    while terms < max_terms {
        let Some(point) = scan.next() else {
            // finite custom schedule: the sequence ends here
            return Ok(FailureBudget {
                partial_sum: acc.value(),
                terms,
                tail_bound: Some(0.0),
                total: Some(acc.value()),
            });
        };
        let point = point?;
        acc.add(point.epsilon);
        terms += 1;
        if point.epsilon < 1e-16 {
            break;
        }
    }
    let partial_sum = acc.value();
    let p = config.p;
    // λ_t^p = scale / t for the power-law families
    let scale = match config.schedule {
        LambdaSchedule::PowerLaw { c, .. } => Some(c.powf(p)),
        LambdaSchedule::DsOptimal { a, b, v_p, .. } => Some(a / (b * v_p * (p - 1.0))),
        LambdaSchedule::Custom { .. } => None,
    };
    let tail_bound = match (scale, &config.t_seq) {
        (Some(scale), TuningSequence::Constant(t)) => {
            let kappa = config.c_p() * config.v_p * scale * (1.0 + t.powf(-(p - 1.0)));
            if kappa > 1.0 {
                let n = terms as f64;
                Some(config.alpha * (-kappa * EULER_GAMMA).exp() * n.powf(1.0 - kappa) / (kappa - 1.0))
            } else {
                None
            }
        }
        _ => None,
    };
    Ok(FailureBudget {
        partial_sum,
        terms,
        tail_bound,
        total: tail_bound.map(|t| partial_sum + t),
    })
}

/// Coefficients of the reduced endpoint equations `K z^p - z + M = 0` and
/// `y^p - y + D = 0` at time `n`, with `y = K^{1/(p-1)} z`, `D = K^{1/(p-1)} M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedEquation {
    pub p: f64,
    pub k: f64,
    pub m: f64,
    pub d: f64,
    /// `τ^{1/(p-1)} / (1+τ)^{p/(p-1)}`
    pub d_threshold: f64,
    pub tau: f64,
}

impl ReducedEquation {
    pub fn at(config: &CatoniConfig, n: u64) -> Result<Self> {
        let b = bound_point(config, n)?;
        Ok(Self::from_point(config, &b))
    }

    pub fn from_point(config: &CatoniConfig, b: &BoundPoint) -> Self {
        let p = config.p;
        let c = config.c_p();
        let k = c * b.sum_split / b.sum_lambda;
        let numerator = c * config.v_p * b.sum_weighted + (2.0 / b.epsilon).ln() + (2.0 / config.alpha).ln();
        let m = numerator / b.sum_lambda;
        let q = 1.0 / (p - 1.0);
        ReducedEquation {
            p,
            k,
            m,
            d: k.powf(q) * m,
            d_threshold: b.tau.powf(q) / (1.0 + b.tau).powf(p * q),
            tau: b.tau,
        }
    }

    /// Smallest positive root `z` of `K z^p - z + M = 0`, if any.
    pub fn smallest_z(&self) -> Option<f64> {
        reduced_root(self.p, self.d).map(|y| y / self.k.powf(1.0 / (self.p - 1.0)))
    }
}

/// Largest `D` for which `y^p - y + D = 0` has a real root:
/// `(p-1) p^{-p/(p-1)}`, the depth of the minimum of `y^p - y`.
pub fn reduced_root_limit(p: f64) -> f64 {
    (p - 1.0) * p.powf(-p / (p - 1.0))
}

/// Smallest positive root of `y^p - y + D = 0` for `D > 0`.
pub fn reduced_root(p: f64, d: f64) -> Option<f64> {
    if !(d > 0.0) || d > reduced_root_limit(p) {
        return None;
    }
    // h(y) = y^p - y + D decreases on [0, y*], y* = p^{-1/(p-1)}
    let y_star = p.powf(-1.0 / (p - 1.0));
    solve_monotone(
        |y: f64| y.powf(p) - y + d,
        0.0,
        0.0,
        y_star,
        Monotonicity::Decreasing,
        RootOptions {
            tol: 1e-15,
            max_doublings: 0,
        },
    )
    .ok()
}

/// `B_n^+(x)` for the true mean `mu`.
pub fn b_plus(config: &CatoniConfig, n: u64, mu: f64, x: f64) -> Result<f64> {
    let b = bound_point(config, n)?;
    let c = config.c_p();
    let variance = b.sum_weighted - b.sum_lambda_p;
    Ok((mu - x) * b.sum_lambda
        + c * config.v_p * variance
        + c * (mu - x).abs().powf(config.p) * b.sum_split
        + (2.0 / b.epsilon).ln())
}

/// Minimiser and minimum of `B_n^+` in closed form.
pub fn b_plus_minimum(config: &CatoniConfig, n: u64, mu: f64) -> Result<(f64, f64)> {
    let b = bound_point(config, n)?;
    let p = config.p;
    let c = config.c_p();
    let q = 1.0 / (p - 1.0);
    let ratio = b.sum_lambda / (p * c * b.sum_split);
    let z = mu + ratio.powf(q);
    let min = -((p - 1.0) / p) * b.sum_lambda.powf(p * q) / (p * c * b.sum_split).powf(q)
        + c * config.v_p * (b.sum_weighted - b.sum_lambda_p)
        + (2.0 / b.epsilon).ln();
    Ok((z, min))
}
