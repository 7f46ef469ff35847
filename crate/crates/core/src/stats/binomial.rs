//! Binomial probability mass and upper tails.
//!
//! The mass function uses the saddle-point expansion (Loader, 2000), which
//! keeps full relative precision far into the tails where a naive
//! `lgamma`-based evaluation loses digits for large `r`. Tails are summed
//! outward from the term nearest the mode and stop once the remaining mass
//! cannot change the result.

use libm::{exp, log, log1p};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `ln(n!) - (n + 1/2) ln n + n - ln sqrt(2 pi)` for integers `0..=15`.
#[allow(clippy::excessive_precision)]
const STIRLERR_SMALL: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_26,
    0.041_340_695_955_409_294,
    0.027_677_925_684_998_34,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_19,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_77,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_871,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_53,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        return STIRLERR_SMALL[n as usize];
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x / np) + np - x`, accurate when `x` is close to `np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        let mut j = 1.0;
        loop {
            ej *= v;
            let s1 = s + ej / (2.0 * j + 1.0);
            if s1 == s {
                return s1;
            }
            s = s1;
            j += 1.0;
        }
    }
    x * log(x / np) + np - x
}

/// `P[Bin(n, p) = k]` with `q = 1 - p` supplied separately so that `p` near 1
/// keeps its precision.
pub(crate) fn pmf(k: u64, n: u64, p: f64, q: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if k == 0 {
        if n == 0 {
            return 1.0;
        }
        let lc = if p < 0.1 { -bd0(nf, nf * q) - nf * p } else { nf * log(q) };
        return exp(lc);
    }
    if k == n {
        let lc = if q < 0.1 { -bd0(nf, nf * p) - nf * q } else { nf * log(p) };
        return exp(lc);
    }
    let kf = k as f64;
    let lc = stirlerr(nf) - stirlerr(kf) - stirlerr(nf - kf) - bd0(kf, nf * p) - bd0(nf - kf, nf * q);
    let lf = LN_2PI + log(kf) + log1p(-kf / nf);
    exp(lc - 0.5 * lf)
}

/// Relative size below which the remaining geometric tail is dropped.
const NEGLIGIBLE: f64 = 1e-18;

/// `P[Bin(n, p) >= v]`.
pub(crate) fn upper_tail(n: u64, v: i64, p: f64, q: f64) -> f64 {
    if v <= 0 {
        return 1.0;
    }
    let v = v as u64;
    if v > n {
        return 0.0;
    }
    if p == 0.0 {
        return 0.0;
    }
    if q == 0.0 {
        return 1.0;
    }
    let odds = p / q;
    let mode = libm::floor((n as f64 + 1.0) * p) as u64;
    if v > mode {
        // decreasing side: sum v, v+1, ... directly
        let mut term = pmf(v, n, p, q);
        let mut sum = term;
        let mut k = v;
        while k < n {
            let ratio = (n - k) as f64 / (k + 1) as f64 * odds;
            term *= ratio;
            sum += term;
            k += 1;
            if ratio < 1.0 && term * ratio / (1.0 - ratio) <= sum * NEGLIGIBLE {
                break;
            }
        }
        sum.min(1.0)
    } else {
        // complement of P[X <= v - 1], which sits on the increasing side
        1.0 - lower_tail_below_mode(n, v - 1, p, q, odds)
    }
}

fn lower_tail_below_mode(n: u64, top: u64, p: f64, q: f64, odds: f64) -> f64 {
    let mut term = pmf(top, n, p, q);
    let mut sum = term;
    let mut k = top;
    while k > 0 {
        let ratio = k as f64 / ((n - k + 1) as f64 * odds);
        term *= ratio;
        sum += term;
        k -= 1;
        if ratio < 1.0 && term * ratio / (1.0 - ratio) <= sum * NEGLIGIBLE {
            break;
        }
    }
    sum.min(1.0)
}

/// `P[Bin(n, p) >= v - k]` for `k = 0..=depth`, as one ascending vector.
pub(crate) fn shifted_tails(n: u64, v: i64, depth: u64, p: f64, q: f64) -> alloc::vec::Vec<f64> {
    let mut out = alloc::vec::Vec::with_capacity(depth as usize + 1);
    let mut g = upper_tail(n, v, p, q);
    out.push(g);
    // pmf(t - 1) = pmf(t) * t q / ((n - t + 1) p), restarted directly while
    // the running value is too small to carry relative precision
    let mut f = 0.0;
    for k in 1..=depth as i64 {
        let t = v - k;
        if t <= 0 {
            g = 1.0;
        } else if (t as u64) <= n {
            let t = t as u64;
            f = if f > 1e-250 && t < n {
                f * ((t + 1) as f64 * q) / ((n - t) as f64 * p)
            } else {
                pmf(t, n, p, q)
            };
            g = (g + f).min(1.0);
        }
        out.push(g);
    }
    out
}

/// Hoeffding bound `exp(-2 n (v/n - p)^2)` when `v/n > p`, else 1.
pub(crate) fn hoeffding_upper(n: u64, v: i64, p: f64) -> f64 {
    let nf = n as f64;
    let gap = v as f64 / nf - p;
    if gap <= 0.0 {
        1.0
    } else {
        exp(-2.0 * nf * gap * gap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_sums_to_one() {
        for &(n, p) in &[(1u64, 0.3), (17, 0.5), (200, 0.9), (3000, 0.01)] {
            let total: f64 = (0..=n).map(|k| pmf(k, n, p, 1.0 - p)).sum();
            assert!((total - 1.0).abs() < 1e-12, "n={n} p={p} total={total}");
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn stirlerr_continuity_at_table_edge() {
        // series at 16 should sit just below the tabulated value at 15
        let s15 = stirlerr(15.0);
        let s16 = stirlerr(16.0);
        assert!(s16 < s15 && s16 > 0.005);
        assert!((s16 - 0.005_207_655_919_609_640).abs() < 1e-15);
    }

    #[test]
    fn large_n_tail_matches_normal_region() {
        // symmetry of Bin(2k+1, 1/2) about k + 1/2
        let n = 1_000_001;
        let t = upper_tail(n, 500_001, 0.5, 0.5);
        assert!((t - 0.5).abs() < 1e-12, "{t}");
    }

    #[test]
    fn shifted_tails_match_direct() {
        let (n, v, p) = (40u64, 30i64, 0.55);
        let g = shifted_tails(n, v, 35, p, 1.0 - p);
        for (k, gk) in g.iter().enumerate() {
            let direct = upper_tail(n, v - k as i64, p, 1.0 - p);
            assert!((gk - direct).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn shifted_tails_recurrence_on_large_n() {
        for &(n, v, p) in &[(2000u64, 1900i64, 0.6), (5000, 4990, 0.9), (3000, 200, 0.02)] {
            let g = shifted_tails(n, v, v as u64, p, 1.0 - p);
            for (k, gk) in g.iter().enumerate().step_by(37) {
                let direct = upper_tail(n, v - k as i64, p, 1.0 - p);
                let err = if direct == 0.0 { gk.abs() } else { ((gk - direct) / direct).abs() };
                assert!(err < 1e-11, "n={n} v={v} k={k}: {gk} vs {direct}");
            }
        }
    }
}
