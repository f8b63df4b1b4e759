//! Exact every-`n` checks of the width bound and the LIL floor.
//!
//! Solving for the interval at every `n` costs O(n) per bisection step. The
//! checks here only need to know whether the interval contains, or is
//! contained in, a given pair of points, and membership of a fixed point
//! follows from the sign of `f_n(x) ∓ T_n`, which updates in O(1). Time is cut
//! into geometric blocks; within a block the probe points are held fixed at
//! the tightest target over the block, their `f_n` sums are carried forward
//! incrementally, and a full interval solve is done only when the probes
//! cannot decide.

use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use super::{replication_rng, run_replications, ExperimentSpec, Method};
use crate::catoni::{failure_budget, BoundScan, CatoniState, FailureBudget};
use crate::error::{Error, Result};
use crate::influence::InfluenceFunction;
use crate::lower_bound::{lil_floor_profile, LilConfig};
use crate::summation::CompensatedSum;

/// Relative growth of the certification blocks.
pub const BLOCK_GROWTH: f64 = 0.05;

/// Terms summed directly in the failure budget before the tail bound.
const BUDGET_TERMS: u64 = 10_000_000;

/// Inclusive `(start, end)` blocks covering `1..=horizon`.
fn blocks(horizon: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = 1;
    while start <= horizon {
        let end = ((start as f64 * (1.0 + BLOCK_GROWTH)).floor() as u64).clamp(start, horizon);
        out.push((start, end));
        start = end + 1;
    }
    out
}

/// `f_n` at two fixed points.
struct Probes {
    points: [f64; 2],
    sums: [CompensatedSum; 2],
}

impl Probes {
    fn rebuild(state: &CatoniState, influence: &InfluenceFunction, points: [f64; 2]) -> Self {
        let mut sums = [CompensatedSum::new(), CompensatedSum::new()];
        for (&l, &x) in state.weights().iter().zip(state.observations()) {
            for k in 0..2 {
                sums[k].add(influence.eval(l * (x - points[k])));
            }
        }
        Probes { points, sums }
    }

    fn push(&mut self, influence: &InfluenceFunction, lambda: f64, x: f64) {
        for k in 0..2 {
            self.sums[k].add(influence.eval(lambda * (x - self.points[k])));
        }
    }

    fn values(&self) -> [f64; 2] {
        [self.sums[0].value(), self.sums[1].value()]
    }
}

fn require_catoni(spec: &ExperimentSpec) -> Result<()> {
    if spec.method != Method::Catoni {
        return Err(Error::Config("this check applies to the Catoni sequence only".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValidityReport {
    pub distribution: String,
    pub p: f64,
    pub alpha: f64,
    pub v_p: f64,
    pub horizon: u64,
    pub replications: u64,
    pub seed: u64,
    /// Replications with `width > width_bound(n)` at some `n ≤ horizon`
    /// where the condition holds.
    pub violating_replications: u64,
    pub violation_rate: f64,
    pub mc_std_err: f64,
    /// `Σ_n ε_n`.
    pub failure_budget: FailureBudget,
    /// Smallest `n₀` with the condition true on `[n₀, horizon]`; `None` if
    /// it fails at the horizon.
    pub condition_onset: Option<u64>,
    pub last_condition_failure: Option<u64>,
    /// Full interval solves needed when the probes were inconclusive.
    pub exact_solves: u64,
}

/// Checks `width ≤ width_bound(n)` at every `n ≤ horizon` where the
/// condition holds.
pub fn run_bound_validity(spec: &ExperimentSpec) -> Result<BoundValidityReport> {
    require_catoni(spec)?;
    let v_p = spec.resolved_vp()?;
    let cfg = spec.catoni_config()?;
    let sampler = spec.distribution.sampler()?;
    let mu = spec.distribution.true_mean();

    let mut bounds = Vec::with_capacity(spec.horizon as usize);
    let mut last_condition_failure = None;
    for point in BoundScan::new(&cfg).take(spec.horizon as usize) {
        let point = point?;
        if !point.condition_holds {
            last_condition_failure = Some(point.n);
        }
        bounds.push(point.width_bound);
    }
    let condition_onset = match last_condition_failure {
        Some(n) if n == spec.horizon => None,
        Some(n) => Some(n + 1),
        None => Some(1),
    };
    let budget = failure_budget(&cfg, BUDGET_TERMS)?;
    let blocks = blocks(spec.horizon);

    let outcomes: Vec<(bool, u64)> = run_replications(spec.replications, spec.threads, |rep| {
        let mut rng = replication_rng(spec.seed, rep);
        let influence = *cfg.influence();
        let mut state = CatoniState::with_capacity(&cfg, spec.horizon as usize);
        let mut exact = 0;
        for &(start, end) in &blocks {
            let tightest = bounds[(start - 1) as usize..end as usize]
                .iter()
                .flatten()
                .copied()
                .reduce(f64::min);
            let mut probes = tightest.map(|b| Probes::rebuild(&state, &influence, [mu - b / 2.0, mu + b / 2.0]));
            for n in start..=end {
                let x = sampler.sample(&mut rng);
                let lambda = state.update(&cfg, x)?;
                if let Some(pr) = probes.as_mut() {
                    pr.push(&influence, lambda, x);
                }
                let Some(bound) = bounds[(n - 1) as usize] else { continue };
                let t = state.threshold(&cfg);
                let [f_lo, f_hi] = probes.as_ref().expect("bound present in block").values();
                if f_lo >= t && f_hi <= -t {
                    continue;
                }
                exact += 1;
                if state.interval(&cfg)?.width > bound {
                    return Ok((true, exact));
                }
            }
        }
        Ok((false, exact))
    })?;

    let violating = outcomes.iter().filter(|o| o.0).count() as u64;
    let rate = violating as f64 / spec.replications as f64;
    Ok(BoundValidityReport {
        distribution: spec.distribution.label(),
        p: spec.p,
        alpha: spec.alpha,
        v_p,
        horizon: spec.horizon,
        replications: spec.replications,
        seed: spec.seed,
        violating_replications: violating,
        violation_rate: rate,
        mc_std_err: (rate * (1.0 - rate) / spec.replications as f64).sqrt(),
        failure_budget: budget,
        condition_onset,
        last_condition_failure,
        exact_solves: outcomes.iter().map(|o| o.1).sum(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LilFloorReport {
    pub distribution: String,
    pub alpha: f64,
    pub a: f64,
    pub horizon: u64,
    pub replications: u64,
    pub seed: u64,
    /// First `n` at which the floor is defined.
    pub floor_onset: Option<u64>,
    /// Per replication, the last `n` with `width < lil_floor(n)`.
    pub last_violation: Vec<Option<u64>>,
    /// Smallest `n₀` such that every replication stays above the floor on
    /// `[n₀, horizon]`.
    pub n0: Option<u64>,
    pub exact_solves: u64,
}

/// Checks `width ≥ lil_floor(n)` at every `n ≤ horizon` where the floor is
/// defined. Needs `p = 2` and a distribution with finite variance.
pub fn run_lil_floor(spec: &ExperimentSpec, a: f64) -> Result<LilFloorReport> {
    require_catoni(spec)?;
    if spec.p != 2.0 {
        return Err(Error::Config(format!(
            "the LIL floor needs p = 2 (finite variance); got p = {}",
            spec.p
        )));
    }
    let sigma = spec
        .distribution
        .variance()
        .ok_or_else(|| Error::Config(format!("{} has infinite variance", spec.distribution.label())))?
        .sqrt();
    let cfg = spec.catoni_config()?;
    let lil = LilConfig::new(sigma, a, cfg.schedule().clone(), 1.0)?;
    let floors = lil_floor_profile(&lil, spec.horizon)?;
    let floor_onset = floors.iter().position(Option::is_some).map(|i| i as u64 + 1);
    let sampler = spec.distribution.sampler()?;
    let mu = spec.distribution.true_mean();
    let blocks = blocks(spec.horizon);

    let outcomes: Vec<(Option<u64>, u64)> = run_replications(spec.replications, spec.threads, |rep| {
        let mut rng = replication_rng(spec.seed, rep);
        let influence = *cfg.influence();
        let mut state = CatoniState::with_capacity(&cfg, spec.horizon as usize);
        let mut weighted = CompensatedSum::new();
        let mut last = None;
        let mut exact = 0;
        for &(start, end) in &blocks {
            let widest = floors[(start - 1) as usize..end as usize]
                .iter()
                .flatten()
                .copied()
                .reduce(f64::max);
            let center = if state.n() == 0 {
                mu
            } else {
                weighted.value() / state.prefix().sum_lambda()
            };
            let mut probes = widest.map(|f| Probes::rebuild(&state, &influence, [center - f / 2.0, center + f / 2.0]));
            for n in start..=end {
                let x = sampler.sample(&mut rng);
                let lambda = state.update(&cfg, x)?;
                weighted.add(lambda * x);
                if let Some(pr) = probes.as_mut() {
                    pr.push(&influence, lambda, x);
                }
                let Some(floor) = floors[(n - 1) as usize] else { continue };
                let t = state.threshold(&cfg);
                let [f_lo, f_hi] = probes.as_ref().expect("floor present in block").values();
                if f_lo <= t && f_hi >= -t {
                    continue;
                }
                exact += 1;
                if state.interval(&cfg)?.width < floor {
                    last = Some(n);
                }
            }
        }
        Ok((last, exact))
    })?;

    let last_violation: Vec<Option<u64>> = outcomes.iter().map(|o| o.0).collect();
    let n0 = match last_violation.iter().flatten().max() {
        Some(&n) if n == spec.horizon => None,
        Some(&n) => Some(n + 1),
        None => floor_onset,
    };
    Ok(LilFloorReport {
        distribution: spec.distribution.label(),
        alpha: spec.alpha,
        a,
        horizon: spec.horizon,
        replications: spec.replications,
        seed: spec.seed,
        floor_onset,
        last_violation,
        n0,
        exact_solves: outcomes.iter().map(|o| o.1).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::DistributionSpec;

    #[test]
    fn blocks_tile_the_horizon() {
        for horizon in [1, 2, 19, 20, 21, 1000, 12_345] {
            let b = blocks(horizon);
            assert_eq!(b[0].0, 1);
            assert_eq!(b.last().unwrap().1, horizon);
            assert!(b.windows(2).all(|w| w[1].0 == w[0].1 + 1));
            assert!(b.iter().all(|&(s, e)| s <= e));
        }
    }

    /// The certified scan must agree with solving the interval at every n.
    #[test]
    fn certified_floor_scan_matches_brute_force() {
        let mut spec = ExperimentSpec::new(Method::Catoni, DistributionSpec::gaussian(0.0, 1.0).unwrap(), 2.0, 0.05);
        spec.horizon = 400;
        spec.replications = 3;
        spec.seed = 11;
        // a deliberately large floor so that violations occur
        let a = 2.0 * 2f64.sqrt() * 0.999;
        let report = run_lil_floor(&spec, a).unwrap();

        let cfg = spec.catoni_config().unwrap();
        let lil = LilConfig::new(1.0, a, cfg.schedule().clone(), 1.0).unwrap();
        let floors = lil_floor_profile(&lil, spec.horizon).unwrap();
        let sampler = spec.distribution.sampler().unwrap();
        for rep in 0..spec.replications {
            let mut rng = replication_rng(spec.seed, rep);
            let mut state = CatoniState::new(&cfg);
            let mut last = None;
            for n in 1..=spec.horizon {
                state.update(&cfg, sampler.sample(&mut rng)).unwrap();
                if let Some(f) = floors[(n - 1) as usize] {
                    if state.interval(&cfg).unwrap().width < f {
                        last = Some(n);
                    }
                }
            }
            assert_eq!(report.last_violation[rep as usize], last, "replication {rep}");
        }
    }

    #[test]
    fn bound_scan_rejects_dubins_savage() {
        let spec = ExperimentSpec::new(Method::DubinsSavage, DistributionSpec::gaussian(0.0, 1.0).unwrap(), 2.0, 0.05);
        assert!(run_bound_validity(&spec).is_err());
    }

    #[test]
    fn lil_needs_p_two() {
        let spec = ExperimentSpec::new(Method::Catoni, DistributionSpec::gaussian(0.0, 1.0).unwrap(), 1.5, 0.05);
        assert!(run_lil_floor(&spec, 1.0).is_err());
    }
}
