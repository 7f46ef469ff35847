//! The coin-flip game that builds an audit set from a member pool and a
//! generated pool.

use alloc::vec::Vec;

use rand::Rng;

use crate::{rng, Error};

/// Candidate audit points: real members and generated samples, paired by
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedAuditSet<T> {
    pub member_pool: Vec<T>,
    pub generated_pool: Vec<T>,
    pub size: usize,
}

/// One audit point with its secret bit.
#[derive(Debug, Clone, PartialEq)]
pub struct GameEntry<T> {
    pub item: T,
    pub member: bool,
}

/// Flip one fair coin per index; heads shows the member at that index,
/// tails the generated sample.
pub fn run_privacy_game<T: Clone>(pairs: &PairedAuditSet<T>, seed: u64) -> Result<Vec<GameEntry<T>>, Error> {
    let m = pairs.size;
    let shortest = pairs.member_pool.len().min(pairs.generated_pool.len());
    if shortest < m {
        return Err(Error::PoolTooSmall { needed: m, got: shortest });
    }
    let mut rng = rng::seeded(seed);
    Ok((0..m)
        .map(|i| {
            let member: bool = rng.random();
            let item = if member { &pairs.member_pool[i] } else { &pairs.generated_pool[i] };
            GameEntry { item: item.clone(), member }
        })
        .collect())
}
