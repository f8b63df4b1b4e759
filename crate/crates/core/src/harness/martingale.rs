//! Monte Carlo means of the supermartingales `M_n^±` at the true mean.

use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use super::{mean_std, replication_rng, run_replications, ExperimentSpec, Method};
use crate::catoni::Sign;
use crate::error::{Error, Result};
use crate::schedules::PrefixSums;
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupermartingaleRow {
    pub n: u64,
    pub sign: Sign,
    pub mean: f64,
    pub std_dev: f64,
    pub std_err: f64,
    pub max: f64,
}

/// `M_n^± = exp{±f_n(μ) - C_p v_p Σ λ_i^p}` averaged over replications at
/// each checkpoint; rows are ordered by `n`, then `+` before `-`.
pub fn run_supermartingale(spec: &ExperimentSpec, checkpoints: &[u64]) -> Result<Vec<SupermartingaleRow>> {
    if spec.method != Method::Catoni {
        return Err(Error::Config("supermartingales are defined for the Catoni sequence".into()));
    }
    let cfg = spec.catoni_config()?;
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    if cps.first() == Some(&0) {
        return Err(Error::Config("checkpoints start at n = 1".into()));
    }
    let sampler = spec.distribution.sampler()?;
    let mu = spec.distribution.true_mean();
    let cv = cfg.c_p() * cfg.v_p();

    let per_rep: Vec<Vec<[f64; 2]>> = run_replications(spec.replications, spec.threads, |rep| {
        let mut rng = replication_rng(spec.seed, rep);
        let influence = *cfg.influence();
        let mut prefix = PrefixSums::new(spec.p)?;
        let mut f = CompensatedSum::new();
        let mut out = Vec::with_capacity(cps.len());
        for &target in &cps {
            while prefix.n() < target {
                let lambda = prefix.extend(cfg.schedule())?;
                f.add(influence.eval(lambda * (sampler.sample(&mut rng) - mu)));
            }
            let penalty = cv * prefix.sum_lambda_p();
            out.push([(f.value() - penalty).exp(), (-f.value() - penalty).exp()]);
        }
        Ok(out)
    })?;

    let mut rows = Vec::with_capacity(2 * cps.len());
    for (j, &n) in cps.iter().enumerate() {
        for (k, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
            let values: Vec<f64> = per_rep.iter().map(|r| r[j][k]).collect();
            let (mean, std_dev, std_err) = mean_std(&values);
            rows.push(SupermartingaleRow {
                n,
                sign,
                mean,
                std_dev,
                std_err,
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            });
        }
    }
    Ok(rows)
}
