//! Single-run black-box comparator: guess members below one loss threshold,
//! non-members above another, abstain in between, and test the correct
//! guesses against a randomized-response Bernoulli.

use alloc::vec::Vec;

use crate::stats::{solve::rejects, solve::solve_unchecked, BoundKind, FailureBudget, Solved, DEFAULT_PARAM_CAP};
use crate::sweep::{check_scores, ScoreRecord};
use crate::Error;

/// Scores below `t_plus` are guessed members, scores above `t_minus`
/// non-members.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbstentionThresholds {
    #[cfg_attr(feature = "serde", serde(with = "ext_float"))]
    pub t_plus: f64,
    #[cfg_attr(feature = "serde", serde(with = "ext_float"))]
    pub t_minus: f64,
}

impl AbstentionThresholds {
    pub fn new(t_plus: f64, t_minus: f64) -> Result<Self, Error> {
        if !(t_plus <= t_minus) {
            return Err(Error::InvalidParameter("t_plus must not exceed t_minus"));
        }
        Ok(Self { t_plus, t_minus })
    }

    pub const ABSTAIN: AbstentionThresholds =
        AbstentionThresholds { t_plus: f64::NEG_INFINITY, t_minus: f64::INFINITY };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuessCount {
    pub guesses: u64,
    pub correct: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct O1Result {
    pub epsilon: f64,
    pub capped: bool,
    pub guesses: u64,
    pub correct: u64,
    pub thresholds: AbstentionThresholds,
    pub per_test_level: f64,
    pub combos_tested: u64,
}

/// Count non-abstained guesses and how many of them are right. Scores equal
/// to a threshold abstain.
pub fn build_guesses(records: &[ScoreRecord], t: &AbstentionThresholds) -> GuessCount {
    let mut count = GuessCount { guesses: 0, correct: 0 };
    for r in records {
        let guess = if r.score < t.t_plus {
            Some(true)
        } else if r.score > t.t_minus {
            Some(false)
        } else {
            None
        };
        if let Some(g) = guess {
            count.guesses += 1;
            count.correct += (g == r.member) as u64;
        }
    }
    count
}

/// Cut points between distinct sorted scores. Cut `j` separates the first
/// `j` distinct values from the rest; its threshold is the midpoint of the
/// two neighbours, or an infinity at either end.
struct Cuts {
    values: Vec<f64>,
    /// records (total, members) strictly below each cut
    below: Vec<(u64, u64)>,
}

fn quantile_cuts(records: &[ScoreRecord], grid_size: usize) -> Option<Cuts> {
    let mut sorted: Vec<(f64, bool)> = records.iter().map(|r| (r.score, r.member)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

    // distinct values and cumulative counts below each distinct boundary
    let mut distinct = Vec::new();
    let mut below = alloc::vec![(0u64, 0u64)];
    let (mut n, mut mem) = (0u64, 0u64);
    for (i, &(s, member)) in sorted.iter().enumerate() {
        n += 1;
        mem += member as u64;
        if i + 1 == sorted.len() || sorted[i + 1].0 != s {
            distinct.push(s);
            below.push((n, mem));
        }
    }
    let d = distinct.len();
    if d < 2 {
        return None;
    }

    let mut idx: Vec<usize> = (0..grid_size)
        .map(|i| libm::round(i as f64 * d as f64 / (grid_size - 1) as f64) as usize)
        .collect();
    idx.dedup();
    let values = idx
        .iter()
        .map(|&j| match j {
            0 => f64::NEG_INFINITY,
            j if j == d => f64::INFINITY,
            j => distinct[j - 1] + (distinct[j] - distinct[j - 1]) / 2.0,
        })
        .collect();
    Some(Cuts { values, below: idx.iter().map(|&j| below[j]).collect() })
}

/// Best epsilon lower bound over all ordered threshold pairs on a quantile
/// grid, with the confidence budget split across every pair that makes at
/// least one guess.
pub fn o1_measure(records: &[ScoreRecord], grid_size: usize, beta: f64) -> Result<O1Result, Error> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    if grid_size < 2 {
        return Err(Error::InvalidParameter("grid size must be at least 2"));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter("beta must lie in (0, 1)"));
    }
    check_scores(records)?;

    let Some(cuts) = quantile_cuts(records, grid_size) else {
        return Ok(O1Result {
            epsilon: 0.0,
            capped: false,
            guesses: 0,
            correct: 0,
            thresholds: AbstentionThresholds::ABSTAIN,
            per_test_level: beta,
            combos_tested: 1,
        });
    };
    let n = records.len() as u64;
    let non_members = n - records.iter().filter(|r| r.member).count() as u64;

    let mut combos = Vec::new();
    for a in 0..cuts.values.len() {
        for b in a..cuts.values.len() {
            let (below_a, members_a) = cuts.below[a];
            let (below_b, members_b) = cuts.below[b];
            let non_members_above = non_members - (below_b - members_b);
            let count = GuessCount { guesses: below_a + (n - below_b), correct: members_a + non_members_above };
            if count.guesses > 0 {
                combos.push((AbstentionThresholds { t_plus: cuts.values[a], t_minus: cuts.values[b] }, count));
            }
        }
    }
    let level = beta / combos.len() as f64;
    let budget = FailureBudget::NONE;

    let mut best = Solved::ZERO;
    let mut witness = combos[0];
    for &(t, c) in &combos {
        if best.capped {
            break;
        }
        if !rejects(c.correct, c.guesses, level, &budget, BoundKind::Exact, best.value) {
            continue;
        }
        let solved = solve_unchecked(c.correct, c.guesses, level, &budget, BoundKind::Exact, DEFAULT_PARAM_CAP);
        if solved.value > best.value {
            best = solved;
            witness = (t, c);
        }
    }
    Ok(O1Result {
        epsilon: best.value,
        capped: best.capped,
        guesses: witness.1.guesses,
        correct: witness.1.correct,
        thresholds: witness.0,
        per_test_level: level,
        combos_tested: combos.len() as u64,
    })
}

/// Infinite thresholds serialize as strings so documents stay plain JSON.
#[cfg(feature = "serde")]
mod ext_float {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(alloc::string::String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *x == f64::INFINITY {
            Repr::Str("inf".into()).serialize(s)
        } else if *x == f64::NEG_INFINITY {
            Repr::Str("-inf".into()).serialize(s)
        } else {
            Repr::Num(*x).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Str(other) => Err(serde::de::Error::custom(alloc::format!("bad threshold {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::solve_max_rejected_param;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn total_abstention() {
        let recs = vec![ScoreRecord::new("a", 0.1, true), ScoreRecord::new("b", 0.9, false)];
        assert_eq!(build_guesses(&recs, &AbstentionThresholds::ABSTAIN), GuessCount { guesses: 0, correct: 0 });
    }

    #[test]
    fn single_split_hand_trace() {
        let recs = vec![ScoreRecord::new("a", 0.1, true), ScoreRecord::new("b", 0.9, false)];
        let t = AbstentionThresholds::new(0.5, 0.5).unwrap();
        assert_eq!(build_guesses(&recs, &t), GuessCount { guesses: 2, correct: 2 });
        // equality abstains
        let at = AbstentionThresholds::new(0.1, 0.9).unwrap();
        assert_eq!(build_guesses(&recs, &at).guesses, 0);
    }

    #[test]
    fn flipped_bits_complement() {
        let recs: Vec<_> = (0..40).map(|i| ScoreRecord::new(i.to_string(), (i % 9) as f64, i % 3 == 0)).collect();
        let flipped: Vec<_> = recs.iter().map(|r| ScoreRecord { member: !r.member, ..r.clone() }).collect();
        let t = AbstentionThresholds::new(2.5, 6.0).unwrap();
        let a = build_guesses(&recs, &t);
        let b = build_guesses(&flipped, &t);
        assert_eq!(a.guesses, b.guesses);
        assert_eq!(b.correct, a.guesses - a.correct);
    }

    #[test]
    fn thresholds_must_be_ordered() {
        assert!(AbstentionThresholds::new(1.0, 0.0).is_err());
        assert!(AbstentionThresholds::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn separated_losses_hit_the_all_guess_closed_form() {
        // members have the low losses
        let recs: Vec<_> = (0..200).map(|i| ScoreRecord::new(i.to_string(), i as f64, i < 100)).collect();
        let res = o1_measure(&recs, 3, 0.05).unwrap();
        // cuts at 0, 100, 200 distinct values: 6 pairs, one makes no guess
        assert_eq!(res.combos_tested, 5);
        assert_eq!((res.guesses, res.correct), (200, 200));
        let level = 0.05 / 5.0;
        let p = libm::exp(libm::log(level) / 200.0);
        assert!((res.epsilon - libm::log(p / (1.0 - p))).abs() < 1e-6);
        assert_eq!(res.per_test_level, level);
    }

    #[test]
    fn shares_the_engine_solver() {
        let recs: Vec<_> = (0..300)
            .map(|i| ScoreRecord::new(i.to_string(), ((i * 31) % 101) as f64 + if i % 2 == 0 { 0.0 } else { 40.0 }, i % 2 == 0))
            .collect();
        let res = o1_measure(&recs, 20, 0.05).unwrap();
        assert!(res.epsilon > 0.0);
        let again = solve_max_rejected_param(
            res.correct,
            res.guesses,
            res.per_test_level,
            &FailureBudget::NONE,
            BoundKind::Exact,
            DEFAULT_PARAM_CAP,
        )
        .unwrap();
        assert_eq!(again.value, res.epsilon);
    }

    #[test]
    fn degenerate_grid() {
        let recs: Vec<_> = (0..10).map(|i| ScoreRecord::new(i.to_string(), 1.0, i < 5)).collect();
        let res = o1_measure(&recs, 50, 0.05).unwrap();
        assert_eq!((res.epsilon, res.combos_tested), (0.0, 1));
    }

    #[test]
    fn input_errors() {
        assert_eq!(o1_measure(&[], 10, 0.05), Err(Error::EmptyInput));
        let recs = vec![ScoreRecord::new("a", 1.0, true)];
        assert!(o1_measure(&recs, 1, 0.05).is_err());
        assert!(o1_measure(&recs, 10, 1.0).is_err());
    }
}
