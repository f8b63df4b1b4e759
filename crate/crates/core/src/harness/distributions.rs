//! Test distributions with known mean and p-th absolute central moment.

use rand::Rng;
use rand_distr::{Distribution, Normal, Pareto, StudentT};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::rng::replication_rng;
use crate::error::{check_order, check_positive, Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Experiments need `p` at least this far below the tail index.
pub const TAIL_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Gaussian { mean: f64, sigma: f64 },
    /// Pareto(scale, shape) shifted to mean zero.
    CenteredPareto { shape: f64, scale: f64 },
    /// Standard Student-t with `df` degrees of freedom, shifted by `location`.
    StudentT { df: f64, location: f64 },
    TwoPoint { values: [f64; 2], probabilities: [f64; 2] },
}

impl DistributionSpec {
    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self> {
        let d = DistributionSpec::Gaussian { mean, sigma };
        d.validate()?;
        Ok(d)
    }

    pub fn centered_pareto(shape: f64, scale: f64) -> Result<Self> {
        let d = DistributionSpec::CenteredPareto { shape, scale };
        d.validate()?;
        Ok(d)
    }

    pub fn student_t(df: f64, location: f64) -> Result<Self> {
        let d = DistributionSpec::StudentT { df, location };
        d.validate()?;
        Ok(d)
    }

    pub fn two_point(values: [f64; 2], probabilities: [f64; 2]) -> Result<Self> {
        let d = DistributionSpec::TwoPoint { values, probabilities };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Gaussian { mean, sigma } => {
                if !mean.is_finite() {
                    return Err(Error::domain("mean", mean, "must be finite"));
                }
                check_positive("sigma", sigma)
            }
            DistributionSpec::CenteredPareto { shape, scale } => {
                if !(shape > 1.0 && shape.is_finite()) {
                    return Err(Error::domain("shape", shape, "needs shape > 1 for a finite mean"));
                }
                check_positive("scale", scale)
            }
            DistributionSpec::StudentT { df, location } => {
                if !(df > 1.0 && df.is_finite()) {
                    return Err(Error::domain("df", df, "needs df > 1 for a finite mean"));
                }
                if !location.is_finite() {
                    return Err(Error::domain("location", location, "must be finite"));
                }
                Ok(())
            }
            DistributionSpec::TwoPoint { values, probabilities } => {
                if !values.iter().all(|v| v.is_finite()) {
                    return Err(Error::Config("two-point values must be finite".into()));
                }
                if !probabilities.iter().all(|&q| (0.0..=1.0).contains(&q))
                    || (probabilities[0] + probabilities[1] - 1.0).abs() > 1e-12
                {
                    return Err(Error::Config(format!(
                        "two-point probabilities {probabilities:?} must be in [0, 1] and sum to 1"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Short human-readable name, e.g. `gaussian(0, 1)`.
    pub fn label(&self) -> String {
        match *self {
            DistributionSpec::Gaussian { mean, sigma } => format!("gaussian({mean}, {sigma})"),
            DistributionSpec::CenteredPareto { shape, scale } => format!("centered_pareto({shape}, {scale})"),
            DistributionSpec::StudentT { df, location } => format!("student_t({df}, {location})"),
            DistributionSpec::TwoPoint { values, probabilities } => format!(
                "two_point({}:{}, {}:{})",
                values[0], probabilities[0], values[1], probabilities[1]
            ),
        }
    }

    pub fn true_mean(&self) -> f64 {
        match *self {
            DistributionSpec::Gaussian { mean, .. } => mean,
            DistributionSpec::CenteredPareto { .. } => 0.0,
            DistributionSpec::StudentT { location, .. } => location,
            DistributionSpec::TwoPoint { values, probabilities } => {
                values[0] * probabilities[0] + values[1] * probabilities[1]
            }
        }
    }

    /// Moments of order below this are finite.
    pub fn tail_index(&self) -> f64 {
        match *self {
            DistributionSpec::Gaussian { .. } | DistributionSpec::TwoPoint { .. } => f64::INFINITY,
            DistributionSpec::CenteredPareto { shape, .. } => shape,
            DistributionSpec::StudentT { df, .. } => df,
        }
    }

    /// Variance, when finite.
    pub fn variance(&self) -> Option<f64> {
        match *self {
            DistributionSpec::Gaussian { sigma, .. } => Some(sigma * sigma),
            DistributionSpec::TwoPoint { .. } => self.true_vp(2.0).ok(),
            DistributionSpec::CenteredPareto { shape, scale } if shape > 2.0 => {
                Some(scale * scale * shape / ((shape - 1.0).powi(2) * (shape - 2.0)))
            }
            DistributionSpec::StudentT { df, .. } if df > 2.0 => Some(df / (df - 2.0)),
            _ => None,
        }
    }

    /// `E|X - μ|^p`: closed form for the Gaussian, Student-t and two-point
    /// cases, adaptive quadrature for the centered Pareto.
    pub fn true_vp(&self, p: f64) -> Result<f64> {
        check_order(p)?;
        self.validate()?;
        let index = self.tail_index();
        if p >= index {
            return Err(Error::InfiniteMoment { p, tail_index: index });
        }
        match *self {
            DistributionSpec::Gaussian { sigma, .. } if p == 2.0 => Ok(sigma * sigma),
            DistributionSpec::Gaussian { sigma, .. } => {
                // E|Z|^p = 2^{p/2} Γ((p+1)/2) / √π
                let log_abs = 0.5 * p * 2f64.ln() + ln_gamma((p + 1.0) / 2.0) - 0.5 * std::f64::consts::PI.ln();
                Ok(sigma.powf(p) * log_abs.exp())
            }
            DistributionSpec::StudentT { df, .. } => Ok(student_t_abs_moment(df, p)),
            DistributionSpec::TwoPoint { values, probabilities } => {
                let mu = self.true_mean();
                Ok(probabilities[0] * (values[0] - mu).abs().powf(p) + probabilities[1] * (values[1] - mu).abs().powf(p))
            }
            DistributionSpec::CenteredPareto { shape, scale } => pareto_abs_moment_quadrature(shape, scale, p),
        }
    }

    /// Like [`true_vp`](Self::true_vp) but also requires `p` to sit at
    /// least [`TAIL_MARGIN`] below the tail index.
    pub fn experiment_vp(&self, p: f64) -> Result<f64> {
        let index = self.tail_index();
        if p > index - TAIL_MARGIN + 1e-12 {
            return Err(Error::Config(format!(
                "p = {p} is too close to the tail index {index} of {}; experiments need p ≤ index - {TAIL_MARGIN}",
                self.label()
            )));
        }
        self.true_vp(p)
    }

    pub fn sampler(&self) -> Result<Sampler> {
        self.validate()?;
        let bad = |e: &dyn std::fmt::Display| Error::Config(format!("{}: {e}", self.label()));
        Ok(match *self {
            DistributionSpec::Gaussian { mean, sigma } => Sampler::Normal(Normal::new(mean, sigma).map_err(|e| bad(&e))?),
            DistributionSpec::CenteredPareto { shape, scale } => Sampler::Pareto {
                dist: Pareto::new(scale, shape).map_err(|e| bad(&e))?,
                shift: shape * scale / (shape - 1.0),
            },
            DistributionSpec::StudentT { df, location } => Sampler::StudentT {
                dist: StudentT::new(df).map_err(|e| bad(&e))?,
                location,
            },
            DistributionSpec::TwoPoint { values, probabilities } => Sampler::TwoPoint {
                values,
                p_first: probabilities[0],
            },
        })
    }

    /// `n` i.i.d. draws; identical for identical `(self, seed, n)`.
    pub fn sample_stream(&self, seed: u64, n: usize) -> Result<Vec<f64>> {
        let sampler = self.sampler()?;
        let mut rng = replication_rng(seed, 0);
        Ok((0..n).map(|_| sampler.sample(&mut rng)).collect())
    }
}

/// A ready-to-draw form of a [`DistributionSpec`].
#[derive(Debug, Clone, Copy)]
pub enum Sampler {
    Normal(Normal<f64>),
    Pareto { dist: Pareto<f64>, shift: f64 },
    StudentT { dist: StudentT<f64>, location: f64 },
    TwoPoint { values: [f64; 2], p_first: f64 },
}

impl Distribution<f64> for Sampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Normal(d) => d.sample(rng),
            Sampler::Pareto { dist, shift } => dist.sample(rng) - shift,
            Sampler::StudentT { dist, location } => dist.sample(rng) + location,
            Sampler::TwoPoint { values, p_first } => {
                if rng.random::<f64>() < *p_first {
                    values[0]
                } else {
                    values[1]
                }
            }
        }
    }
}

/// `E|T|^p = ν^{p/2} Γ((p+1)/2) Γ((ν-p)/2) / (√π Γ(ν/2))` for `p < ν`.
pub fn student_t_abs_moment(df: f64, p: f64) -> f64 {
    let log_value = 0.5 * p * df.ln() + ln_gamma((p + 1.0) / 2.0) + ln_gamma((df - p) / 2.0)
        - 0.5 * std::f64::consts::PI.ln()
        - ln_gamma(df / 2.0);
    log_value.exp()
}

/// `E|X - m|^p` for `X ~ Pareto(scale, shape)`, `m = shape·scale/(shape-1)`.
///
/// With `x = m s` the density part factors out `shape·scale^shape·m^{p-shape}`;
/// the piece below the mean is smooth on `[scale/m, 1]` and the piece above
/// becomes `k ∫_0^1 (1 - w^k)^p dw` after `s = w^k`, `k = 1/(shape - p)`.
pub fn pareto_abs_moment_quadrature(shape: f64, scale: f64, p: f64) -> Result<f64> {
    if p >= shape {
        return Err(Error::InfiniteMoment { p, tail_index: shape });
    }
    let m = shape * scale / (shape - 1.0);
    let opts = QuadOptions {
        rel_tol: 1e-12,
        ..QuadOptions::default()
    };
    let below = integrate(|s: f64| (1.0 - s).powf(p) * s.powf(-shape - 1.0), scale / m, 1.0, opts)?;
    let k = 1.0 / (shape - p);
    let above = integrate(|w: f64| (1.0 - w.powf(k)).max(0.0).powf(p), 0.0, 1.0, opts)?;
    let prefactor = shape * scale.powf(shape) * m.powf(p - shape);
    Ok(prefactor * (below.value + k * above.value))
}
