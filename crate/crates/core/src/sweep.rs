//! Binarizing membership scores at every distinct threshold.

use alloc::string::String;
use alloc::vec::Vec;

use crate::Error;

/// One audit example: a membership score and its secret bit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreRecord {
    pub id: String,
    /// Larger means more member-like.
    pub score: f64,
    pub member: bool,
}

impl ScoreRecord {
    pub fn new(id: impl Into<String>, score: f64, member: bool) -> Self {
        Self { id: id.into(), score, member }
    }
}

/// Guess statistics when every record scoring at least `tau` is guessed a
/// member.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdStat {
    pub tau: f64,
    pub guesses: u64,
    pub true_positives: u64,
    pub precision: f64,
    pub recall: f64,
}

pub(crate) fn check_scores(records: &[ScoreRecord]) -> Result<(), Error> {
    match records.iter().find(|r| !r.score.is_finite()) {
        Some(r) => Err(Error::NonFiniteScore { id: r.id.clone() }),
        None => Ok(()),
    }
}

/// One [`ThresholdStat`] per distinct score, highest threshold first.
pub fn sweep_thresholds(records: &[ScoreRecord]) -> Result<Vec<ThresholdStat>, Error> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_scores(records)?;
    let members = records.iter().filter(|r| r.member).count() as u64;
    if members == 0 {
        return Err(Error::NoMembers);
    }

    let mut order: Vec<(f64, bool)> = records.iter().map(|r| (r.score, r.member)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut stats = Vec::new();
    let (mut guesses, mut tp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let tau = order[i].0;
        while i < order.len() && order[i].0 == tau {
            guesses += 1;
            tp += order[i].1 as u64;
            i += 1;
        }
        stats.push(ThresholdStat {
            tau,
            guesses,
            true_positives: tp,
            precision: tp as f64 / guesses as f64,
            recall: tp as f64 / members as f64,
        });
    }
    Ok(stats)
}
