//! Catoni-type influence functions `φ` of order `p ∈ (1, 2]`.
//!
//! Every function here satisfies, wherever the logarithms are defined,
//!
//! ```text
//! -log(1 - x + C_p |x|^p) <= φ(x) <= log(1 + x + C_p |x|^p)
//! ```
//!
//! with `C_p = ((p-1)/p)^{p/2} ((2-p)/(p-1))^{(2-p)/2}` (so `C_2 = 1/2`).

use serde::{Deserialize, Serialize};

use crate::error::{check_order, Error, Result};
use crate::roots::{solve_monotone, Monotonicity, RootOptions};

/// Past this magnitude `1 + |x| + C|x|^p` is evaluated in log space.
const LOG_SPACE_CUTOFF: f64 = 1e100;

/// Bisection tolerance used by [`InfluenceFunction::invert`].
pub const INVERT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfluenceKind {
    /// Catoni's original `p = 2` function `±log(1 ± x + x²/2)`.
    CatoniClassic,
    /// The tightest nondecreasing odd function under the upper envelope:
    /// `log(1 + x + C_p x^p)` for `x ≥ 0`, mirrored for `x < 0`.
    TightUpper,
}

/// `C_p` from the moment condition. The `p = 2` limit uses `0⁰ = 1`.
pub fn catoni_constant(p: f64) -> Result<f64> {
    check_order(p)?;
    let first = ((p - 1.0) / p).powf(p / 2.0);
    let second = if p == 2.0 {
        1.0
    } else {
        ((2.0 - p) / (p - 1.0)).powf((2.0 - p) / 2.0)
    };
    Ok(first * second)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfluenceFunction {
    p: f64,
    c_p: f64,
    kind: InfluenceKind,
}

impl InfluenceFunction {
    pub fn new(p: f64, kind: InfluenceKind) -> Result<Self> {
        check_order(p)?;
        if kind == InfluenceKind::CatoniClassic && p != 2.0 {
            return Err(Error::Config(format!(
                "the classic Catoni influence function requires p = 2, got p = {p}"
            )));
        }
        Ok(InfluenceFunction {
            p,
            c_p: catoni_constant(p)?,
            kind,
        })
    }

    /// Catoni's `p = 2` function.
    pub fn catoni() -> Self {
        InfluenceFunction {
            p: 2.0,
            c_p: 0.5,
            kind: InfluenceKind::CatoniClassic,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn c_p(&self) -> f64 {
        self.c_p
    }

    pub fn kind(&self) -> InfluenceKind {
        self.kind
    }

    /// `log(1 + |x| + C_p |x|^p)`, the magnitude of both branches.
    #[inline]
    fn log_envelope(&self, x: f64) -> f64 {
        let a = x.abs();
        if a > LOG_SPACE_CUTOFF {
            let lead = self.c_p.ln() + self.p * a.ln();
            let rest = (1.0 + a) / (self.c_p * a.powf(self.p));
            return lead + rest.ln_1p();
        }
        let power = if self.p == 2.0 { a * a } else { a.powf(self.p) };
        (a + self.c_p * power).ln_1p()
    }

    /// Evaluates `φ(x)`. Both variants are odd, so only the magnitude
    /// branch is computed.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        // The two variants coincide at p = 2; CatoniClassic is only
        // constructible there.
        let magnitude = self.log_envelope(x);
        if x < 0.0 {
            -magnitude
        } else {
            magnitude
        }
    }

    /// `φ'(x)`, used by the Lipschitz diagnostics.
    pub fn derivative(&self, x: f64) -> f64 {
        let a = x.abs();
        let inner = 1.0 + a + self.c_p * a.powf(self.p);
        (1.0 + self.p * self.c_p * a.powf(self.p - 1.0)) / inner
    }

    /// Upper envelope `log(1 + x + C_p |x|^p)`; `+∞` where the argument is
    /// not positive.
    pub fn upper_envelope(&self, x: f64) -> f64 {
        let arg = 1.0 + x + self.c_p * x.abs().powf(self.p);
        if arg > 0.0 {
            arg.ln()
        } else {
            f64::INFINITY
        }
    }

    /// Lower envelope `-log(1 - x + C_p |x|^p)`; `-∞` where the argument is
    /// not positive (the constraint is vacuous there).
    pub fn lower_envelope(&self, x: f64) -> f64 {
        let arg = 1.0 - x + self.c_p * x.abs().powf(self.p);
        if arg > 0.0 {
            -arg.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    /// Solves `φ(x) = y` by bracket doubling from `[-1, 1]` and bisection to
    /// [`INVERT_TOL`].
    pub fn invert(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        // φ is unbounded both ways, so the bracket search ends before the
        // bracket overflows for any finite y.
        solve_monotone(
            |x| self.eval(x),
            y,
            -1.0,
            1.0,
            Monotonicity::Increasing,
            RootOptions {
                tol: INVERT_TOL,
                max_doublings: 2048,
            },
        )
        .expect("influence function is continuous, strictly increasing and unbounded")
    }
}
