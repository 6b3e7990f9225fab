//! Online convex optimization under dynamic regret.
//!
//! * [`pog`]: proximal online gradient with horizon-tuned learning rates.
//! * [`adversary`]: the Rademacher lower-bound game and its explicit block comparator.
//! * [`oracle`]: the offline optimal comparator under a weighted path-length budget.
//! * [`analysis`]: exact random-walk expectations, bound evaluators and inequality checks.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases below fix `f64`.

// argument checks are written `!(x > 0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod analysis;
pub mod budget;
pub mod domain;
mod error;
pub mod instances;
pub mod loss;
pub mod metrics;
pub mod online;
pub mod oracle;
pub mod pog;
pub mod prox;
mod scalar;
pub mod sequence;
pub mod stats;
pub mod vector;

pub use budget::{DynamicsBudget, ShiftBudget};
pub use domain::{DomainKind, DomainSpec};
pub use error::{Error, Result};
pub use loss::{ConvexLoss, LossFunction};
pub use metrics::{dynamic_regret, shifting_regret, static_regret, weighted_path_length, RegretReport};
pub use online::{run_online, FixedLearner, Learner, LossStream};
pub use pog::{pog_step, run_pog, schedule_corollary1, schedule_corollary2, Pog, Schedule};
pub use prox::{project, prox, Regularizer};
pub use scalar::Scalar;
pub use sequence::{ComparatorSequence, Trajectory};

pub type DomainSpec64 = DomainSpec<f64>;
pub type LossFunction64 = LossFunction<f64>;
pub type Regularizer64 = Regularizer<f64>;
pub type Schedule64 = Schedule<f64>;
pub type DynamicsBudget64 = DynamicsBudget<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type ComparatorSequence64 = ComparatorSequence<f64>;
pub type RegretReport64 = RegretReport<f64>;
