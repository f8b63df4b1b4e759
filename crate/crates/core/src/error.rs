use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument lies outside the domain of the operation.
    #[error("{name} = {value} is outside its domain: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    /// The operation needs observations (or other state) that is not there yet.
    #[error("invalid state: {0}")]
    State(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("E|X - mu|^{p} is infinite for a tail index of {tail_index}")]
    InfiniteMoment { p: f64, tail_index: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}

/// Checks `p ∈ (1, 2]`.
pub(crate) fn check_order(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 && p <= 2.0 {
        Ok(())
    } else {
        Err(Error::domain("p", p, "p must lie in (1, 2]"))
    }
}

/// Checks `alpha ∈ (0, 1)`.
pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "alpha must lie in (0, 1)"))
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, value, "must be positive and finite"))
    }
}
