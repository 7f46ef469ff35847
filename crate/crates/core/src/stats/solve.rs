use libm::{ceil, exp, log2};

use super::{relaxed::relaxed_tail_with, BoundKind, FailureBudget, TailQuery};
use crate::Error;

/// Largest parameter searched by default. At 20 the success probability is
/// within 2.1e-9 of one and the tests are numerically saturated.
pub const DEFAULT_PARAM_CAP: f64 = 20.0;

/// Absolute accuracy of the solved parameter.
pub const BISECTION_TOLERANCE: f64 = 1e-6;

/// `(e^x / (1 + e^x), 1 / (1 + e^x))`, each computed without cancellation.
pub fn sigmoid_pair(x: f64) -> (f64, f64) {
    (1.0 / (1.0 + exp(-x)), 1.0 / (1.0 + exp(x)))
}

/// Outcome of [`solve_max_rejected_param`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solved {
    pub value: f64,
    /// The search cap itself was rejected; the true supremum may be larger.
    pub capped: bool,
}

impl Solved {
    pub const ZERO: Solved = Solved { value: 0.0, capped: false };
}

/// Does observing `tp` correct guesses out of `r` reject parameter `x` at
/// `level`?
pub(crate) fn rejects(
    tp: u64,
    r: u64,
    level: f64,
    budget: &FailureBudget,
    kind: BoundKind,
    x: f64,
) -> bool {
    if tp == 0 {
        return false;
    }
    let q = TailQuery::from_logit(r, x, tp as i64).expect("finite parameter");
    // the relaxed tail is at least the plain one
    if !budget.is_zero() && super::tail(&q, kind) > level {
        return false;
    }
    relaxed_tail_with(&q, budget, kind) <= level
}

fn validate(tp: u64, r: u64, level: f64, cap: f64) -> Result<(), Error> {
    if tp > r {
        return Err(Error::InvalidParameter("true positives exceed guesses"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter("test level must lie in (0, 1)"));
    }
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::InvalidParameter("parameter cap must be positive and finite"));
    }
    Ok(())
}

/// Largest `x` in `[0, cap]` whose tail test on `(tp, r)` is rejected at
/// `level`, where the success probability is `e^x / (1 + e^x)`.
///
/// The tail is nondecreasing in `x`, so the rejected set is an interval
/// starting at zero and bisection finds its right end. The returned value is
/// the largest bisection point known to be rejected, so it never overshoots
/// the supremum and undershoots it by less than [`BISECTION_TOLERANCE`].
pub fn solve_max_rejected_param(
    tp: u64,
    r: u64,
    level: f64,
    budget: &FailureBudget,
    kind: BoundKind,
    cap: f64,
) -> Result<Solved, Error> {
    validate(tp, r, level, cap)?;
    Ok(solve_unchecked(tp, r, level, budget, kind, cap))
}

pub(crate) fn solve_unchecked(
    tp: u64,
    r: u64,
    level: f64,
    budget: &FailureBudget,
    kind: BoundKind,
    cap: f64,
) -> Solved {
    let pred = |x: f64| rejects(tp, r, level, budget, kind, x);
    if !pred(0.0) {
        return Solved::ZERO;
    }
    if pred(cap) {
        return Solved { value: cap, capped: true };
    }
    let steps = ceil(log2(cap / (BISECTION_TOLERANCE / 4.0))) as u32;
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Solved { value: lo, capped: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(tp: u64, r: u64, level: f64) -> Solved {
        solve_max_rejected_param(tp, r, level, &FailureBudget::NONE, BoundKind::Exact, DEFAULT_PARAM_CAP)
            .unwrap()
    }

    #[test]
    fn zero_true_positives_reject_nothing() {
        assert_eq!(exact(0, 50, 0.025), Solved::ZERO);
        assert_eq!(exact(0, 0, 0.025), Solved::ZERO);
    }

    #[test]
    fn all_correct_closed_form() {
        let s = exact(100, 100, 0.025);
        let p = libm::exp(libm::log(0.025) / 100.0);
        let closed = libm::log(p / (1.0 - p));
        assert!((s.value - closed).abs() < 1e-6, "{} vs {closed}", s.value);
        assert!((s.value - 3.281).abs() < 1e-3);
        assert!(!s.capped);
    }

    #[test]
    fn half_precision_rejects_nothing() {
        assert_eq!(exact(50, 100, 0.025), Solved::ZERO);
    }

    #[test]
    fn errors() {
        let b = FailureBudget::NONE;
        assert!(solve_max_rejected_param(5, 4, 0.1, &b, BoundKind::Exact, 20.0).is_err());
        assert!(solve_max_rejected_param(1, 4, 0.0, &b, BoundKind::Exact, 20.0).is_err());
        assert!(solve_max_rejected_param(1, 4, 1.0, &b, BoundKind::Exact, 20.0).is_err());
        assert!(solve_max_rejected_param(1, 4, 0.1, &b, BoundKind::Exact, 0.0).is_err());
    }

    #[test]
    fn capped_when_cap_is_rejected() {
        let s = solve_max_rejected_param(1000, 1000, 0.4, &FailureBudget::NONE, BoundKind::Exact, 1.0)
            .unwrap();
        assert_eq!(s, Solved { value: 1.0, capped: true });
    }
}
