use leakaudit_core::stats::{hoeffding_tail, BISECTION_TOLERANCE, DEFAULT_PARAM_CAP};
use leakaudit_core::*;
use proptest::prelude::*;

/// Reference tails for large `r`, summed at 60 significant digits with the
/// same `f64` probabilities.
// digits as printed by the reference computation
#[allow(clippy::excessive_precision)]
const LARGE_R: [(u64, f64, i64, f64); 7] = [
    (100_000, 0.3, 30_500, 0.000_288_796_765_190_762_413_17),
    (1_000_000, 0.9, 900_800, 0.003_818_367_262_965_414_098_1),
    (1000, 0.01, 30, 2.059_988_850_971_958_536_5e-7),
    (1_000_000, 0.5, 499_000, 0.977_303_832_045_327_871_95),
    (5000, 0.999, 5000, 0.006_721_111_959_865_587_934_2),
    (200, 0.6, 110, 0.934_509_868_291_569_194_03),
    (100_000, 0.3, 29_000, 0.999_999_999_997_835_821_22),
];

#[test]
fn large_trial_counts_keep_relative_precision() {
    for (r, p, v, want) in LARGE_R {
        let got = binomial_tail(&TailQuery::new(r, p, v).unwrap());
        assert!(((got - want) / want).abs() <= 1e-12, "r={r} p={p} v={v}: {got} vs {want}");
    }
}

fn solve(tp: u64, r: u64, level: f64, mu: f64, kind: BoundKind) -> f64 {
    let budget = FailureBudget::new(mu, r.max(1)).unwrap();
    solve_max_rejected_param(tp, r, level, &budget, kind, DEFAULT_PARAM_CAP).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tail_monotone_in_threshold_and_probability(r in 0u64..=20, p in 0.0f64..=1.0, dp in 0.0f64..0.2, v in 0i64..=21) {
        let t = binomial_tail(&TailQuery::new(r, p, v).unwrap());
        let t_next = binomial_tail(&TailQuery::new(r, p, v + 1).unwrap());
        let t_up = binomial_tail(&TailQuery::new(r, (p + dp).min(1.0), v).unwrap());
        prop_assert!(t_next <= t);
        prop_assert!(t_up >= t * (1.0 - 1e-13));
        prop_assert!((0.0..=1.0).contains(&t));
    }

    #[test]
    fn hoeffding_dominates_exact(r in 1u64..=2000, p in 0.0f64..=1.0, frac in 0.0f64..=1.1) {
        let v = (frac * r as f64) as i64;
        let q = TailQuery::new(r, p, v).unwrap();
        prop_assert!(hoeffding_tail(&q).unwrap() >= binomial_tail(&q) * (1.0 - 1e-12));
    }

    #[test]
    fn relaxed_tail_monotone_in_mean_cap(r in 0u64..=60, p in 0.01f64..0.99, v in 0i64..=70, m in 1u64..=40, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let q = TailQuery::new(r, p, v).unwrap();
        let (lo, hi) = (a.min(b) * m as f64, a.max(b) * m as f64);
        let t_lo = relaxed_tail(&q, &FailureBudget::new(lo, m).unwrap());
        let t_hi = relaxed_tail(&q, &FailureBudget::new(hi, m).unwrap());
        prop_assert!(t_lo <= t_hi + 1e-15);
        let t0 = relaxed_tail(&q, &FailureBudget::new(0.0, m).unwrap());
        prop_assert!((t0 - binomial_tail(&q)).abs() <= 1e-12);
    }

    #[test]
    fn solver_monotone(r in 1u64..=400, tp_frac in 0.0f64..=1.0, level in 1e-6f64..0.4, mu in 0.0f64..3.0) {
        let tp = ((tp_frac * r as f64) as u64).min(r);
        let mu = mu.min(r as f64);
        let base = solve(tp, r, level, 0.0, BoundKind::Exact);
        if tp < r {
            prop_assert!(solve(tp + 1, r, level, 0.0, BoundKind::Exact) >= base);
        }
        prop_assert!(solve(tp, r, (level * 2.0).min(0.9), 0.0, BoundKind::Exact) >= base);
        prop_assert!(solve(tp, r, level, mu, BoundKind::Exact) <= base);
    }
}

#[test]
fn exact_rejects_more_than_hoeffding() {
    use proptest::test_runner::{RngAlgorithm, TestRng};
    let mut rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]);
    let mut strict = 0;
    for _ in 0..1000 {
        let r: u64 = rng.random_range(1..=2000);
        let tp: u64 = rng.random_range(0..=r);
        let level: f64 = rng.random_range(1e-6..0.5);
        let exact = solve(tp, r, level, 0.0, BoundKind::Exact);
        let hoeff = solve(tp, r, level, 0.0, BoundKind::Hoeffding);
        assert!(exact >= hoeff, "tp={tp} r={r} level={level}");
        strict += (exact > hoeff) as u32;
    }
    assert!(strict > 0);
}

fn records_from(scores: &[(f64, bool)]) -> Vec<ScoreRecord> {
    scores.iter().enumerate().map(|(i, &(s, m))| ScoreRecord::new(format!("r{i}"), s, m)).collect()
}

fn scored_records() -> impl Strategy<Value = Vec<ScoreRecord>> {
    prop::collection::vec((0u32..60, any::<bool>(), 0u32..40), 20..200).prop_map(|v| {
        let mut recs: Vec<(f64, bool)> =
            v.into_iter().map(|(s, m, bump)| (s as f64 + if m { bump as f64 } else { 0.0 }, m)).collect();
        recs[0].1 = true;
        records_from(&recs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimate_invariant_under_increasing_transform(recs in scored_records()) {
        let cfg = AuditConfig::default();
        let moved: Vec<_> = recs.iter().map(|r| ScoreRecord { score: 3.0 * r.score - 7.0, ..r.clone() }).collect();
        let a = estimate_bound(&recs, &cfg, Mode::Mia).unwrap();
        let b = estimate_bound(&moved, &cfg, Mode::Mia).unwrap();
        prop_assert_eq!(a.value, b.value);
        prop_assert_eq!(a.witness_recall, b.witness_recall);
    }

    #[test]
    fn union_bound_never_helps(recs in scored_records()) {
        let on = AuditConfig::default();
        let off = AuditConfig { union_bound: UnionBound::Off, ..on };
        prop_assert!(estimate_bound(&recs, &off, Mode::Baseline).unwrap().value
            >= estimate_bound(&recs, &on, Mode::Baseline).unwrap().value);
    }

    #[test]
    fn narrowing_the_window_without_union_bound(recs in scored_records(), lo in 0.0f64..0.5, width in 0.3f64..0.5) {
        let full = AuditConfig { union_bound: UnionBound::Off, ..AuditConfig::default() };
        let window = RecallWindow { min: lo, max: (lo + width).min(1.0) };
        let narrow = AuditConfig { recall_window: window, ..full };
        let wide = estimate_bound(&recs, &full, Mode::Baseline).unwrap();
        if let Ok(n) = estimate_bound(&recs, &narrow, Mode::Baseline) {
            prop_assert!(n.value <= wide.value);
            prop_assert!(n.tests_performed <= wide.tests_performed);
            // with the union bound the level rises as K falls; both are reported
            let narrow_ub = AuditConfig { union_bound: UnionBound::Tests, ..narrow };
            let n_ub = estimate_bound(&recs, &narrow_ub, Mode::Baseline).unwrap();
            let w_ub = estimate_bound(&recs, &AuditConfig::default(), Mode::Baseline).unwrap();
            prop_assert!(n_ub.per_test_level >= w_ub.per_test_level);
        }
    }

    #[test]
    fn eps_tilde_nonnegative_and_relaxation_shrinks(recs in scored_records(), mia_shift in prop::collection::vec(-5.0f64..5.0, 200)) {
        let mia: Vec<_> = recs.iter().zip(&mia_shift).map(|(r, d)| ScoreRecord { score: r.score + d, ..r.clone() }).collect();
        let cfg = AuditConfig::default();
        let res = measure(&recs, &mia, &cfg).unwrap();
        prop_assert!(res.eps_tilde >= 0.0);
        prop_assert_eq!(res.eps_tilde, (res.c_plus_eps_lb.value - res.c_lb.value).max(0.0));
        let relaxed = AuditConfig { gamma: 1e-3, ..cfg };
        let rres = measure(&recs, &mia, &relaxed).unwrap();
        prop_assert!(rres.c_lb.value <= res.c_lb.value);
        prop_assert!(rres.c_plus_eps_lb.value <= res.c_plus_eps_lb.value);
    }

    #[test]
    fn o1_invariant_under_increasing_transform(recs in scored_records()) {
        let moved: Vec<_> = recs.iter().map(|r| ScoreRecord { score: 0.5 * r.score + 100.0, ..r.clone() }).collect();
        let a = o1_measure(&recs, 12, 0.05).unwrap();
        let b = o1_measure(&moved, 12, 0.05).unwrap();
        prop_assert_eq!(a.epsilon, b.epsilon);
        prop_assert_eq!((a.guesses, a.correct, a.combos_tested), (b.guesses, b.correct, b.combos_tested));
    }
}

#[test]
fn bisection_tolerance_is_the_documented_one() {
    assert_eq!(BISECTION_TOLERANCE, 1e-6);
}
