//! Anytime-valid confidence sequences for the mean of a data stream whose
//! only distributional assumption is a known bound `v_p` on the p-th central
//! moment, `p ∈ (1, 2]`.
//!
//! Two constructions are provided:
//!
//! - [`catoni`]: intervals obtained by inverting a sum of Catoni-style
//!   influence functions, with the matching width bound, its applicability
//!   condition and the supermartingales behind the coverage guarantee.
//! - [`dubins_savage`]: intervals from the L_p Dubins-Savage maximal
//!   inequality with the width-optimal weight schedule.
//!
//! [`lower_bound`] computes the law-of-the-iterated-logarithm width floor for
//! the finite-variance case and [`harness`] runs seeded Monte Carlo coverage
//! and width experiments over heavy-tailed test distributions.

pub mod catoni;
pub mod dubins_savage;
pub mod error;
pub mod harness;
pub mod influence;
pub mod lower_bound;
pub mod quadrature;
pub mod roots;
pub mod schedules;
pub mod summation;

pub use catoni::{CatoniConfig, CatoniState, ConfidenceInterval, Sign, TuningSequence};
pub use dubins_savage::{DsConfig, DsState};
pub use error::{Error, Result};
pub use harness::{
    CoverageReport, DistributionSpec, ExperimentSpec, Method, WidthCheckpoint, WidthReport,
};
pub use influence::{InfluenceFunction, InfluenceKind};
pub use lower_bound::LilConfig;
pub use schedules::{LambdaSchedule, PrefixSums};
