//! Synthetic audit worlds with a known generator closeness.
//!
//! Data and generator are categorical distributions over a handful of
//! symbols, so the closeness `c = max_k ln(p_D(k) / p_G(k))` is exact. The
//! target model is replaced by a loss channel: members get a loss shifted
//! down by `loss_separation`, and the attack mixes that loss into the
//! baseline score.

use alloc::format;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Normal;

use crate::audit::{estimate_bound, measure, AuditConfig, Mode};
use crate::rng::{derive_seed, seeded};
use crate::sweep::ScoreRecord;
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CategoricalWorld {
    pub symbol_probs_data: Vec<f64>,
    pub symbol_probs_gen: Vec<f64>,
    /// Mean loss gap between members and non-members.
    pub loss_separation: f64,
    /// Standard deviation of the target loss.
    pub loss_noise: f64,
    /// Weight of the (standardized, negated) loss in the attack score.
    pub mia_weight: f64,
    /// Audit size.
    pub m: usize,
}

/// Generator used by [`CategoricalWorld::default_world`]: a Dirichlet(8, ..., 8)
/// draw around the uniform data distribution, rounded to four decimals.
const DEFAULT_GEN: [f64; 8] = [0.1488, 0.1545, 0.0604, 0.1409, 0.1894, 0.1310, 0.0682, 0.1068];

impl CategoricalWorld {
    /// Eight uniform data symbols, a perturbed generator, unit loss noise,
    /// no leakage and `m = 2000`.
    pub fn default_world() -> Self {
        Self {
            symbol_probs_data: alloc::vec![0.125; 8],
            symbol_probs_gen: DEFAULT_GEN.to_vec(),
            loss_separation: 0.0,
            loss_noise: 1.0,
            mia_weight: 1.0,
            m: 2000,
        }
    }

    pub fn with_separation(&self, loss_separation: f64) -> Self {
        Self { loss_separation, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let (d, g) = (&self.symbol_probs_data, &self.symbol_probs_gen);
        if d.is_empty() || d.len() != g.len() {
            return Err(Error::InvalidWorld("probability vectors must be nonempty and of equal length"));
        }
        for probs in [d, g] {
            if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(Error::InvalidWorld("probabilities must be finite and nonnegative"));
            }
            if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidWorld("probabilities must sum to 1"));
            }
        }
        if !(self.loss_noise > 0.0 && self.loss_noise.is_finite()) {
            return Err(Error::InvalidWorld("loss noise must be positive"));
        }
        if !(self.loss_separation >= 0.0 && self.loss_separation.is_finite()) {
            return Err(Error::InvalidWorld("loss separation must be nonnegative"));
        }
        if !(self.mia_weight >= 0.0 && self.mia_weight.is_finite()) {
            return Err(Error::InvalidWorld("attack weight must be nonnegative"));
        }
        if self.m == 0 {
            return Err(Error::InvalidWorld("audit size must be positive"));
        }
        true_c(self).map(|_| ())
    }
}

/// Smallest `c >= 0` with `e^-c p_D(k) <= p_G(k)` for every symbol.
pub fn true_c(world: &CategoricalWorld) -> Result<f64, Error> {
    let mut c = 0.0f64;
    for (k, (&d, &g)) in world.symbol_probs_data.iter().zip(&world.symbol_probs_gen).enumerate() {
        if d == 0.0 {
            continue;
        }
        if g == 0.0 {
            return Err(Error::InfiniteCloseness { symbol: k });
        }
        c = c.max(libm::log(d / g));
    }
    Ok(c)
}

/// Baseline and attack scores for one game.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorldSample {
    pub baseline_records: Vec<ScoreRecord>,
    pub mia_records: Vec<ScoreRecord>,
    pub true_c: f64,
}

fn record_id(i: usize) -> alloc::string::String {
    format!("x{i:06}")
}

/// Log likelihood ratio per symbol. A symbol the data never produces gets
/// the most negative finite ratio instead of `-inf`.
fn log_ratios(world: &CategoricalWorld) -> Vec<f64> {
    world
        .symbol_probs_data
        .iter()
        .zip(&world.symbol_probs_gen)
        .map(|(&d, &g)| if g == 0.0 { 0.0 } else { libm::log((d / g).max(f64::MIN_POSITIVE)) })
        .collect()
}

/// Play one game of size `m`: flip each bit, draw the symbol from the data
/// or the generator, score it by its exact log likelihood ratio, and draw a
/// target loss `N(-separation * bit, noise^2)` for the attack.
pub fn make_world_sample(world: &CategoricalWorld, seed: u64) -> Result<WorldSample, Error> {
    world.validate()?;
    let mut rng = seeded(seed);
    let data = WeightedIndex::new(&world.symbol_probs_data).map_err(|_| Error::InvalidWorld("bad data weights"))?;
    let gen = WeightedIndex::new(&world.symbol_probs_gen).map_err(|_| Error::InvalidWorld("bad generator weights"))?;
    let noise = Normal::new(0.0, world.loss_noise).map_err(|_| Error::InvalidWorld("bad loss noise"))?;
    let ratios = log_ratios(world);

    let mut baseline_records = Vec::with_capacity(world.m);
    let mut mia_records = Vec::with_capacity(world.m);
    for i in 0..world.m {
        let member: bool = rng.random();
        let symbol = if member { data.sample(&mut rng) } else { gen.sample(&mut rng) };
        let base = ratios[symbol];
        let loss = noise.sample(&mut rng) - if member { world.loss_separation } else { 0.0 };
        let attack = base + world.mia_weight * (-loss) / world.loss_noise;
        baseline_records.push(ScoreRecord::new(record_id(i), base, member));
        mia_records.push(ScoreRecord::new(record_id(i), attack, member));
    }
    Ok(WorldSample { baseline_records, mia_records, true_c: true_c(world)? })
}

/// A game where both scorers are pure noise, independent of the bits.
pub fn independent_scores_sample(m: usize, seed: u64) -> WorldSample {
    let mut rng = seeded(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut baseline_records = Vec::with_capacity(m);
    let mut mia_records = Vec::with_capacity(m);
    for i in 0..m {
        let member: bool = rng.random();
        baseline_records.push(ScoreRecord::new(record_id(i), unit.sample(&mut rng), member));
        mia_records.push(ScoreRecord::new(record_id(i), unit.sample(&mut rng), member));
    }
    WorldSample { baseline_records, mia_records, true_c: 0.0 }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidityReport {
    pub trials: u64,
    pub false_rejections: u64,
    pub rate: f64,
    pub true_c: f64,
}

/// Run independent games and count how often the baseline bound exceeds the
/// world's true closeness.
pub fn validity_trials(world: &CategoricalWorld, trials: u64, config: &AuditConfig, seed: u64) -> Result<ValidityReport, Error> {
    if trials < 100 {
        return Err(Error::InvalidParameter("validity trials need at least 100 games"));
    }
    config.validate()?;
    let c_star = true_c(world)?;
    let mut false_rejections = 0;
    for t in 0..trials {
        let sample = make_world_sample(world, derive_seed(seed, t))?;
        let est = estimate_bound(&sample.baseline_records, config, Mode::Baseline)?;
        if est.value > c_star + 1e-9 {
            false_rejections += 1;
        }
    }
    Ok(ValidityReport { trials, false_rejections, rate: false_rejections as f64 / trials as f64, true_c: c_star })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepPoint {
    pub separation: f64,
    pub median_eps_tilde: f64,
}

/// Median leakage measurement at each loss separation.
///
/// Trial `t` uses the same game seed at every separation, so differences
/// between levels come from the separation alone.
pub fn leakage_sweep(
    template: &CategoricalWorld,
    separations: &[f64],
    trials_per_level: u64,
    config: &AuditConfig,
    seed: u64,
) -> Result<Vec<SweepPoint>, Error> {
    if trials_per_level < 10 {
        return Err(Error::InvalidParameter("leakage sweep needs at least 10 trials per level"));
    }
    if separations.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("separations must be sorted ascending"));
    }
    config.validate()?;
    separations
        .iter()
        .map(|&sep| {
            let world = template.with_separation(sep);
            let mut eps = Vec::with_capacity(trials_per_level as usize);
            for t in 0..trials_per_level {
                let s = make_world_sample(&world, derive_seed(seed, t))?;
                eps.push(measure(&s.baseline_records, &s.mia_records, config)?.eps_tilde);
            }
            Ok(SweepPoint { separation: sep, median_eps_tilde: median(&mut eps) })
        })
        .collect()
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// True-positive counts of a fixed guess vector across repeated games.
///
/// The baseline guesses "member" exactly when the symbol is in
/// `guess_symbols`. Conditioning on `r` such guesses, each game draws audit
/// points until `r` land in the guess set and counts the members among them.
pub fn conditional_true_positives(
    world: &CategoricalWorld,
    guess_symbols: &[usize],
    r: u64,
    games: u64,
    seed: u64,
) -> Result<Vec<u64>, Error> {
    world.validate()?;
    let k = world.symbol_probs_data.len();
    let mut in_set = alloc::vec![false; k];
    for &s in guess_symbols {
        *in_set.get_mut(s).ok_or(Error::InvalidParameter("guess symbol out of range"))? = true;
    }
    let mass: f64 = (0..k)
        .filter(|&s| in_set[s])
        .map(|s| world.symbol_probs_data[s] + world.symbol_probs_gen[s])
        .sum();
    if mass <= 0.0 {
        return Err(Error::InvalidParameter("guess set has no probability mass"));
    }
    let data = WeightedIndex::new(&world.symbol_probs_data).map_err(|_| Error::InvalidWorld("bad data weights"))?;
    let gen = WeightedIndex::new(&world.symbol_probs_gen).map_err(|_| Error::InvalidWorld("bad generator weights"))?;

    let mut out = Vec::with_capacity(games as usize);
    for g in 0..games {
        let mut rng = seeded(derive_seed(seed, g));
        let (mut guessed, mut tp) = (0u64, 0u64);
        while guessed < r {
            let member: bool = rng.random();
            let symbol = if member { data.sample(&mut rng) } else { gen.sample(&mut rng) };
            if in_set[symbol] {
                guessed += 1;
                tp += member as u64;
            }
        }
        out.push(tp);
    }
    Ok(out)
}
