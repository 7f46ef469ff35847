//! Tail probabilities of Bernoulli guess counts and their inversion into the
//! largest rejected closeness (or closeness-plus-privacy) parameter.

mod binomial;
pub(crate) mod relaxed;
pub(crate) mod solve;

pub use relaxed::relaxed_tail;
pub use solve::{sigmoid_pair, solve_max_rejected_param, Solved, BISECTION_TOLERANCE, DEFAULT_PARAM_CAP};

use crate::Error;

/// Which tail is used to test a guess count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BoundKind {
    /// Exact binomial survival function.
    #[default]
    Exact,
    /// Closed-form Hoeffding bound; looser, kept for comparison.
    Hoeffding,
}

/// `P[Bin(trials, success_prob) >= threshold]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailQuery {
    pub trials: u64,
    pub success_prob: f64,
    pub threshold: i64,
    /// `1 - success_prob`, carried separately so that probabilities close
    /// to one keep full precision.
    complement: f64,
}

impl TailQuery {
    pub fn new(trials: u64, success_prob: f64, threshold: i64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&success_prob) {
            return Err(Error::InvalidProbability(success_prob));
        }
        Ok(Self { trials, success_prob, threshold, complement: 1.0 - success_prob })
    }

    /// Query at `p = e^x / (1 + e^x)`.
    pub fn from_logit(trials: u64, x: f64, threshold: i64) -> Result<Self, Error> {
        if x.is_nan() {
            return Err(Error::InvalidParameter("logit parameter is NaN"));
        }
        let (p, q) = sigmoid_pair(x);
        Ok(Self { trials, success_prob: p, threshold, complement: q })
    }

    pub(crate) fn with_threshold(self, threshold: i64) -> Self {
        Self { threshold, ..self }
    }

    pub(crate) fn complement(&self) -> f64 {
        self.complement
    }
}

/// Worst-case failure count added to the guess sum: any distribution on
/// `{0, ..., support_cap}` whose mean is at most `mean_cap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureBudget {
    mean_cap: f64,
    support_cap: u64,
}

impl FailureBudget {
    pub const NONE: FailureBudget = FailureBudget { mean_cap: 0.0, support_cap: 0 };

    pub fn new(mean_cap: f64, support_cap: u64) -> Result<Self, Error> {
        if !(mean_cap >= 0.0 && mean_cap <= support_cap as f64) {
            return Err(Error::InvalidParameter("failure mean cap must lie in [0, support cap]"));
        }
        Ok(Self { mean_cap, support_cap })
    }

    pub fn mean_cap(&self) -> f64 {
        self.mean_cap
    }

    pub fn support_cap(&self) -> u64 {
        self.support_cap
    }

    pub fn is_zero(&self) -> bool {
        self.mean_cap == 0.0
    }
}

/// Exact `P[Bin(r, p) >= v]`.
pub fn binomial_tail(q: &TailQuery) -> f64 {
    binomial::upper_tail(q.trials, q.threshold, q.success_prob, q.complement)
}

/// Hoeffding upper bound on [`binomial_tail`]. Undefined for zero trials.
pub fn hoeffding_tail(q: &TailQuery) -> Result<f64, Error> {
    if q.trials == 0 {
        return Err(Error::InvalidParameter("Hoeffding bound needs at least one trial"));
    }
    Ok(binomial::hoeffding_upper(q.trials, q.threshold, q.success_prob))
}

/// Tail of the selected kind, with `r = 0` handled exactly for Hoeffding.
pub fn tail(q: &TailQuery, kind: BoundKind) -> f64 {
    match kind {
        BoundKind::Exact => binomial_tail(q),
        BoundKind::Hoeffding if q.trials == 0 => binomial_tail(q),
        BoundKind::Hoeffding => binomial::hoeffding_upper(q.trials, q.threshold, q.success_prob),
    }
}
