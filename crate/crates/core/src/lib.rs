//! Retraining-free privacy leakage measurement.
//!
//! An audit set is built by flipping a fair coin per index and showing either
//! a real training member or a generated sample. Two scorers then try to
//! recover the coins: a baseline that only sees the data point, and a
//! membership-inference attack that also sees the target model. Each scorer's
//! success, swept over thresholds, is turned into a lower bound:
//!
//! * the baseline bounds the generator's closeness `c`,
//! * the attack bounds `c + eps`,
//!
//! and the difference of the two, clamped at zero, is the leakage measurement.
//!
//! The crate is `no_std` (with `alloc`). Reading score files and the command
//! line live in the `leakaudit` crate.

#![no_std]
// `!(a <= b)` is used deliberately so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;

pub mod audit;
pub mod game;
pub mod o1;
pub mod rng;
pub mod sim;
pub mod stats;
pub mod sweep;

pub use audit::{
    bound_curve, estimate_bound, measure, AuditConfig, AuditResult, BaselineBudget, BoundEstimate,
    CurvePoint, Mode, RecallWindow, UnionBound,
};
pub use error::Error;
pub use game::{run_privacy_game, GameEntry, PairedAuditSet};
pub use o1::{build_guesses, o1_measure, AbstentionThresholds, GuessCount, O1Result};
pub use stats::{
    binomial_tail, hoeffding_tail, relaxed_tail, solve_max_rejected_param, BoundKind, FailureBudget,
    Solved, TailQuery,
};
pub use sweep::{sweep_thresholds, ScoreRecord, ThresholdStat};
