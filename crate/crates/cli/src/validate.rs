//! Oracle-equivalence and soundness checks behind `validate-bounds`.

use leakaudit_core::sim::{validity_trials, CategoricalWorld};
use leakaudit_core::stats::{hoeffding_tail, DEFAULT_PARAM_CAP};
use leakaudit_core::{
    binomial_tail, relaxed_tail, solve_max_rejected_param, AuditConfig, BoundKind, FailureBudget, TailQuery,
};
use leakaudit_oracles::{all_correct_logit, enumerate_tail, lp_worst_failure, ratio, to_f64};

use crate::document::{CheckOutcome, ValidationReport};

/// Monte Carlo cap on a false-rejection rate: `beta` plus two standard errors.
pub fn soundness_cap(beta: f64, trials: u64) -> f64 {
    beta + 2.0 * (beta * (1.0 - beta) / trials as f64).sqrt()
}

struct Tracker {
    name: &'static str,
    cases: u64,
    max_error: f64,
    tolerance: f64,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, cases: 0, max_error: 0.0, tolerance }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        // NaN counts as a failure
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(err <= self.max_error) {
            self.max_error = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name.into(),
            cases: self.cases,
            max_error: self.max_error,
            tolerance: self.tolerance,
            passed: self.max_error <= self.tolerance,
        }
    }
}

/// Relative error of the exact tail against rational enumeration, `r <= 20`.
pub fn check_binomial_tail() -> CheckOutcome {
    let mut t = Tracker::new("binomial_tail_vs_enumeration", 1e-12);
    for r in 0..=20u64 {
        for tenths in 1..=9 {
            let p = tenths as f64 / 10.0;
            let exact_p = ratio(tenths, 10);
            for v in 0..=(r as i64 + 1) {
                let want = to_f64(&enumerate_tail(r, &exact_p, v).expect("within oracle limits"));
                let got = binomial_tail(&TailQuery::new(r, p, v).expect("valid query"));
                t.record(if want == 0.0 { got.abs() } else { ((got - want) / want).abs() });
            }
        }
    }
    t.finish()
}

/// Absolute error of the relaxed tail against the vertex LP, `r, m <= 6`.
pub fn check_relaxed_tail() -> CheckOutcome {
    let mut t = Tracker::new("relaxed_tail_vs_lp", 1e-9);
    for r in 0..=6u64 {
        for m in 0..=6u64 {
            for &(num, den) in &[(1, 10), (7, 20), (1, 2), (3, 4), (9, 10)] {
                let p = num as f64 / den as f64;
                let exact_p = ratio(num, den);
                for v in 0..=(r + m + 1) as i64 {
                    for step in 0..=(4 * m) {
                        let mu = step as f64 / 4.0;
                        let want = to_f64(
                            &lp_worst_failure(r, &exact_p, v, &ratio(step as i64, 4), m).expect("within oracle limits"),
                        );
                        let budget = FailureBudget::new(mu, m).expect("valid budget");
                        let got = relaxed_tail(&TailQuery::new(r, p, v).expect("valid query"), &budget);
                        t.record((got - want).abs());
                    }
                }
            }
        }
    }
    t.finish()
}

/// All-correct guess vectors against `logit(level^(1/r))`.
pub fn check_all_correct() -> CheckOutcome {
    let mut t = Tracker::new("all_correct_closed_form", 1e-6);
    for &r in &[10u64, 100, 1000] {
        for &level in &[0.025, 0.025 / 200.0, 1e-4] {
            let got = solve_max_rejected_param(r, r, level, &FailureBudget::NONE, BoundKind::Exact, DEFAULT_PARAM_CAP)
                .expect("valid solve");
            t.record((got.value - all_correct_logit(level, r).max(0.0)).abs());
        }
    }
    t.finish()
}

/// Amount by which the Hoeffding bound ever falls below the exact tail.
pub fn check_hoeffding_dominance() -> CheckOutcome {
    let mut t = Tracker::new("hoeffding_dominates_exact", 1e-15);
    for r in (1..=400u64).step_by(7) {
        for pct in 1..100 {
            let p = pct as f64 / 100.0;
            for v in (0..=r as i64 + 1).step_by(3) {
                let q = TailQuery::new(r, p, v).expect("valid query");
                t.record((binomial_tail(&q) - hoeffding_tail(&q).expect("r >= 1")).max(0.0));
            }
        }
    }
    t.finish()
}

pub fn run_validation(trials: u64, seed: u64) -> Result<ValidationReport, leakaudit_core::Error> {
    let checks = vec![check_binomial_tail(), check_relaxed_tail(), check_all_correct(), check_hoeffding_dominance()];
    let config = AuditConfig::default();
    let soundness = validity_trials(&CategoricalWorld::default_world(), trials, &config, seed)?;
    let cap = soundness_cap(config.beta, trials);
    let soundness_passed = soundness.rate <= cap;
    let passed = soundness_passed && checks.iter().all(|c| c.passed);
    Ok(ValidationReport { checks, soundness, soundness_cap: cap, soundness_passed, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_checks_pass() {
        assert!(check_all_correct().passed);
        let h = check_hoeffding_dominance();
        assert!(h.passed && h.cases > 1000, "{h:?}");
    }

    #[test]
    fn cap_formula() {
        assert!((soundness_cap(0.05, 500) - 0.069_493).abs() < 1e-6);
    }
}
