//! Turning swept guess statistics into closeness and leakage bounds.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::stats::{self, solve::rejects, BoundKind, FailureBudget, Solved, DEFAULT_PARAM_CAP};
use crate::sweep::{sweep_thresholds, ScoreRecord, ThresholdStat};
use crate::Error;

/// How the confidence budget is split across per-threshold tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum UnionBound {
    /// Every threshold tested at the full half-budget.
    Off,
    /// Divide by the number of thresholds actually tested.
    #[default]
    Tests,
    /// Divide by the audit size, an upper bound on the number of thresholds.
    AuditSize,
}

/// Failure mean used for the baseline test when the target is only
/// approximately private.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BaselineBudget {
    /// `2 m gamma`: the baseline never touches the target, so only the
    /// generator relaxation applies.
    #[default]
    Gamma,
    /// `2 m delta`.
    Delta,
}

/// Closed recall interval; thresholds outside it are not tested.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecallWindow {
    pub min: f64,
    pub max: f64,
}

impl RecallWindow {
    pub const FULL: RecallWindow = RecallWindow { min: 0.0, max: 1.0 };

    pub fn contains(&self, recall: f64) -> bool {
        self.min <= recall && recall <= self.max
    }
}

impl Default for RecallWindow {
    fn default() -> Self {
        Self::FULL
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditConfig {
    /// Total confidence budget, split evenly between the baseline and the
    /// attack.
    pub beta: f64,
    /// Generator relaxation: closeness may fail with this probability.
    pub gamma: f64,
    /// Approximate-DP slack of the target.
    pub delta: f64,
    pub bound_kind: BoundKind,
    pub union_bound: UnionBound,
    pub recall_window: RecallWindow,
    pub param_cap: f64,
    pub baseline_budget: BaselineBudget,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            beta: 0.05,
            gamma: 0.0,
            delta: 0.0,
            bound_kind: BoundKind::Exact,
            union_bound: UnionBound::Tests,
            recall_window: RecallWindow::FULL,
            param_cap: DEFAULT_PARAM_CAP,
            baseline_budget: BaselineBudget::Gamma,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidConfig("beta must lie in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidConfig("gamma must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::InvalidConfig("delta must lie in [0, 1]"));
        }
        let w = self.recall_window;
        if !(0.0 <= w.min && w.min <= w.max && w.max <= 1.0) {
            return Err(Error::InvalidConfig("recall window must be a nonempty subinterval of [0, 1]"));
        }
        if !(self.param_cap > 0.0 && self.param_cap.is_finite()) {
            return Err(Error::InvalidConfig("parameter cap must be positive and finite"));
        }
        Ok(())
    }

    /// Expected failure count for an audit of `m` records.
    pub fn failure_mean(&self, m: usize, mode: Mode) -> f64 {
        let m = m as f64;
        let rate = match mode {
            Mode::Baseline => match self.baseline_budget {
                BaselineBudget::Gamma => self.gamma,
                BaselineBudget::Delta => self.delta,
            },
            Mode::Mia if self.delta == 0.0 => self.gamma,
            Mode::Mia => self.gamma + self.delta - self.gamma * self.delta,
        };
        (2.0 * m * rate).min(m)
    }
}

/// Which scorer produced the records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Sees only the data point; bounds the generator closeness `c`.
    Baseline,
    /// Also sees the target model; bounds `c + eps`.
    Mia,
}

/// A solved lower bound and the threshold that achieved it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundEstimate {
    pub value: f64,
    pub capped: bool,
    pub witness_threshold: f64,
    pub witness_recall: f64,
    pub witness_guesses: u64,
    pub witness_tp: u64,
    pub per_test_level: f64,
    pub tests_performed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditResult {
    pub c_lb: BoundEstimate,
    pub c_plus_eps_lb: BoundEstimate,
    pub eps_tilde: f64,
    pub config: AuditConfig,
}

/// Bound solved at a single threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub stat: ThresholdStat,
    pub bound: Solved,
}

struct Plan {
    stats: Vec<ThresholdStat>,
    level: f64,
    budget: FailureBudget,
    kind: BoundKind,
    cap: f64,
}

impl Plan {
    fn new(records: &[ScoreRecord], config: &AuditConfig, mode: Mode) -> Result<Self, Error> {
        config.validate()?;
        let window = config.recall_window;
        let stats: Vec<_> = sweep_thresholds(records)?
            .into_iter()
            .filter(|s| window.contains(s.recall))
            .collect();
        if stats.is_empty() {
            return Err(Error::EmptyRecallWindow { min: window.min, max: window.max });
        }
        let m = records.len();
        let tests = match config.union_bound {
            UnionBound::Off => 1,
            UnionBound::Tests => stats.len(),
            UnionBound::AuditSize => m,
        };
        let level = config.beta / 2.0 / tests as f64;
        let budget = FailureBudget::new(config.failure_mean(m, mode), m as u64)?;
        Ok(Self { stats, level, budget, kind: config.bound_kind, cap: config.param_cap })
    }

    fn solve(&self, s: &ThresholdStat) -> Solved {
        stats::solve::solve_unchecked(s.true_positives, s.guesses, self.level, &self.budget, self.kind, self.cap)
    }
}

/// Largest bound over all thresholds in the recall window.
///
/// A threshold can only improve on the running best `b` if it rejects `b`
/// itself, so most thresholds cost a single tail evaluation. Ties keep the
/// highest threshold as witness.
pub fn estimate_bound(records: &[ScoreRecord], config: &AuditConfig, mode: Mode) -> Result<BoundEstimate, Error> {
    let plan = Plan::new(records, config, mode)?;
    let mut best = Solved::ZERO;
    let mut witness = plan.stats[0];
    for s in &plan.stats {
        if best.capped {
            break;
        }
        if !rejects(s.true_positives, s.guesses, plan.level, &plan.budget, plan.kind, best.value) {
            continue;
        }
        let solved = plan.solve(s);
        if solved.value > best.value {
            best = solved;
            witness = *s;
        }
    }
    Ok(BoundEstimate {
        value: best.value,
        capped: best.capped,
        witness_threshold: witness.tau,
        witness_recall: witness.recall,
        witness_guesses: witness.guesses,
        witness_tp: witness.true_positives,
        per_test_level: plan.level,
        tests_performed: plan.stats.len() as u64,
    })
}

/// The bound at every tested threshold, highest threshold first.
pub fn bound_curve(records: &[ScoreRecord], config: &AuditConfig, mode: Mode) -> Result<Vec<CurvePoint>, Error> {
    let plan = Plan::new(records, config, mode)?;
    Ok(plan.stats.iter().map(|s| CurvePoint { stat: *s, bound: plan.solve(s) }).collect())
}

fn check_alignment(baseline: &[ScoreRecord], mia: &[ScoreRecord]) -> Result<(), Error> {
    if baseline.len() != mia.len() {
        return Err(Error::Misaligned(format!(
            "{} baseline records vs {} attack records",
            baseline.len(),
            mia.len()
        )));
    }
    let mut bits = BTreeMap::new();
    for r in baseline {
        if bits.insert(r.id.as_str(), r.member).is_some() {
            return Err(Error::Misaligned(format!("duplicate id {:?} in baseline records", r.id)));
        }
    }
    for r in mia {
        match bits.remove(r.id.as_str()) {
            None => return Err(Error::Misaligned(format!("id {:?} missing from baseline records", r.id))),
            Some(bit) if bit != r.member => {
                return Err(Error::Misaligned(format!("id {:?} has different membership bits", r.id)))
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Bound `c` from the baseline, `c + eps` from the attack, and report their
/// clamped difference.
pub fn measure(baseline: &[ScoreRecord], mia: &[ScoreRecord], config: &AuditConfig) -> Result<AuditResult, Error> {
    config.validate()?;
    check_alignment(baseline, mia)?;
    let c_lb = estimate_bound(baseline, config, Mode::Baseline)?;
    let c_plus_eps_lb = estimate_bound(mia, config, Mode::Mia)?;
    Ok(AuditResult {
        c_lb,
        c_plus_eps_lb,
        eps_tilde: (c_plus_eps_lb.value - c_lb.value).max(0.0),
        config: *config,
    })
}
