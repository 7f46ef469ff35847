//! Brute-force reference computations for the tail tests.
//!
//! Everything here is intentionally naive: exact rational enumeration of
//! binomial outcomes, vertex enumeration for the worst-case failure LP, and
//! closed forms for the all-correct guess vector. None of it shares code with
//! `leakaudit-core`, so agreement between the two is meaningful.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Largest trial count accepted by [`enumerate_tail`].
pub const MAX_ENUM_TRIALS: u64 = 20;
/// Largest trial count and failure support accepted by [`lp_worst_failure`].
pub const MAX_LP_SIZE: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooLarge { what: &'static str, got: u64, max: u64 },
    BadProbability,
    BadMeanCap,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { what, got, max } => {
                write!(f, "{what} = {got} exceeds oracle limit {max}")
            }
            OracleError::BadProbability => f.write_str("probability outside [0, 1]"),
            OracleError::BadMeanCap => f.write_str("mean cap must lie in [0, support cap]"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Exact rational from a ratio of integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational equal to the given finite `f64`.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn binomial_coefficient(n: u64, k: u64) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

fn pow(base: &BigRational, exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// `P[Bin(r, p) >= v]` summed term by term in exact arithmetic.
pub fn enumerate_tail(r: u64, p: &BigRational, v: i64) -> Result<BigRational, OracleError> {
    if r > MAX_ENUM_TRIALS {
        return Err(OracleError::TooLarge { what: "trials", got: r, max: MAX_ENUM_TRIALS });
    }
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(OracleError::BadProbability);
    }
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for k in 0..=r {
        if (k as i64) < v {
            continue;
        }
        let c = BigRational::from_integer(binomial_coefficient(r, k));
        total += c * pow(p, k) * pow(&q, r - k);
    }
    Ok(total)
}

/// Worst case of `P[F + Bin(r, p) >= v]` over every distribution of `F` on
/// `{0, ..., support_cap}` with `E[F] <= mean_cap`.
///
/// The feasible set is a polytope cut by two constraints (total mass and the
/// mean cap), so every vertex has at most two support points. All of them are
/// enumerated.
pub fn lp_worst_failure(
    r: u64,
    p: &BigRational,
    v: i64,
    mean_cap: &BigRational,
    support_cap: u64,
) -> Result<BigRational, OracleError> {
    if r > MAX_LP_SIZE {
        return Err(OracleError::TooLarge { what: "trials", got: r, max: MAX_LP_SIZE });
    }
    if support_cap > MAX_LP_SIZE {
        return Err(OracleError::TooLarge {
            what: "support cap",
            got: support_cap,
            max: MAX_LP_SIZE,
        });
    }
    if *mean_cap < BigRational::zero() || *mean_cap > BigRational::from_integer(support_cap.into())
    {
        return Err(OracleError::BadMeanCap);
    }
    let g: Vec<BigRational> = (0..=support_cap)
        .map(|k| enumerate_tail(r, p, v - k as i64))
        .collect::<Result<_, _>>()?;

    let mut best = BigRational::zero();
    for (k, gk) in g.iter().enumerate() {
        let k_r = BigRational::from_integer((k as i64).into());
        // single point mass, mean constraint slack
        if k_r <= *mean_cap && *gk > best {
            best = gk.clone();
        }
        // two points j < k with the mean constraint tight
        for (j, gj) in g.iter().enumerate().take(k) {
            let j_r = BigRational::from_integer((j as i64).into());
            if j_r <= *mean_cap && *mean_cap <= k_r {
                let w = (mean_cap - &j_r) / (&k_r - &j_r);
                let val = (BigRational::one() - &w) * gj + &w * gk;
                if val > best {
                    best = val;
                }
            }
        }
    }
    Ok(best)
}

/// The parameter `x` solving `(e^x / (1 + e^x))^r = level`, i.e. the largest
/// parameter rejected when all `r` guesses are correct.
pub fn all_correct_logit(level: f64, r: u64) -> f64 {
    let log_p = level.ln() / r as f64;
    log_p - (-log_p.exp_m1()).ln()
}

/// Mean of the Bernoulli that a closeness parameter `x` induces.
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_tail(3, &ratio(1, 2), 2).unwrap(), ratio(1, 2));
        assert_eq!(enumerate_tail(4, &ratio(1, 3), 4).unwrap(), ratio(1, 81));
        assert_eq!(enumerate_tail(2, &ratio(2, 3), 1).unwrap(), ratio(8, 9));
        assert_eq!(enumerate_tail(5, &ratio(1, 3), 0).unwrap(), ratio(1, 1));
        assert_eq!(enumerate_tail(5, &ratio(1, 3), 6).unwrap(), ratio(0, 1));
    }

    #[test]
    fn enumerate_rejects_large() {
        assert!(matches!(
            enumerate_tail(21, &ratio(1, 2), 3),
            Err(OracleError::TooLarge { .. })
        ));
        assert_eq!(enumerate_tail(3, &ratio(3, 2), 1), Err(OracleError::BadProbability));
    }

    #[test]
    fn lp_examples() {
        let half = ratio(1, 2);
        assert_eq!(
            lp_worst_failure(2, &half, 2, &ratio(0, 1), 2).unwrap(),
            enumerate_tail(2, &half, 2).unwrap()
        );
        assert_eq!(lp_worst_failure(2, &half, 2, &half, 2).unwrap(), half);
        assert_eq!(lp_worst_failure(3, &half, 2, &ratio(2, 1), 2).unwrap(), ratio(1, 1));
        assert!(lp_worst_failure(2, &half, 2, &ratio(3, 1), 2).is_err());
    }

    #[test]
    fn all_correct_closed_form() {
        let x = all_correct_logit(0.025, 100);
        assert!((sigmoid(x).powi(100) - 0.025).abs() < 1e-12);
        assert!((x - 3.2814).abs() < 1e-3);
    }
}
