//! Root finding for monotone scalar functions: expand a bracket by doubling
//! until the sign changes, then bisect.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Stopping rules for [`solve_monotone`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Absolute width of the final bracket.
    pub tol: f64,
    /// Bracket doublings allowed before giving up.
    pub max_doublings: u32,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tol: 1e-12,
            max_doublings: 200,
        }
    }
}

/// Solves `f(x) = target` for a monotone `f`, starting from the guess
/// bracket `[lo, hi]`.
///
/// The returned point is within `opts.tol` of the root (or within one ulp
/// when the tolerance is below the float spacing at the root).
pub fn solve_monotone<F>(
    mut f: F,
    target: f64,
    lo: f64,
    hi: f64,
    monotonicity: Monotonicity,
    opts: RootOptions,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Numeric(format!("invalid initial bracket [{lo}, {hi}]")));
    }
    // g is increasing in x after the sign flip
    let sign = match monotonicity {
        Monotonicity::Increasing => 1.0,
        Monotonicity::Decreasing => -1.0,
    };
    let mut g = |x: f64| sign * (f(x) - target);

    let (mut lo, mut hi) = (lo, hi);
    let mut g_lo = checked(g(lo), lo)?;
    let mut g_hi = checked(g(hi), hi)?;
    let mut doublings = 0u32;
    while g_lo > 0.0 {
        if doublings == opts.max_doublings {
            return Err(bracket_failure(lo, hi, doublings));
        }
        let step = hi - lo;
        hi = lo;
        g_hi = g_lo;
        lo -= 2.0 * step;
        g_lo = checked(g(lo), lo)?;
        doublings += 1;
    }
    while g_hi < 0.0 {
        if doublings == opts.max_doublings {
            return Err(bracket_failure(lo, hi, doublings));
        }
        let step = hi - lo;
        lo = hi;
        g_lo = g_hi;
        hi += 2.0 * step;
        g_hi = checked(g(hi), hi)?;
        doublings += 1;
    }
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }

    while hi - lo > opts.tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = checked(g(mid), mid)?;
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

fn checked(value: f64, at: f64) -> Result<f64> {
    if value.is_nan() {
        Err(Error::Numeric(format!("function returned NaN at x = {at}")))
    } else {
        Ok(value)
    }
}

fn bracket_failure(lo: f64, hi: f64, doublings: u32) -> Error {
    Error::Numeric(format!(
        "no sign change after {doublings} bracket doublings (last bracket [{lo}, {hi}])"
    ))
}
