use alloc::vec::Vec;

use super::{binomial, BoundKind, FailureBudget, TailQuery};

/// Worst case of `P[F + Bin(r, p) >= v]` over failure counts `F` allowed by
/// `budget`, using the exact binomial tail.
pub fn relaxed_tail(q: &TailQuery, budget: &FailureBudget) -> f64 {
    relaxed_tail_with(q, budget, BoundKind::Exact)
}

/// As [`relaxed_tail`], with the per-shift tail of the given kind.
///
/// Write `g(k)` for the tail at threshold `v - k`. The objective
/// `sum_k w_k g(k)` is linear in the failure distribution `w`, which only
/// has to satisfy `sum w_k = 1` and `sum k w_k <= mean_cap`. Because `g` is
/// nondecreasing the mean constraint binds, and the optimum is the upper
/// concave envelope of the points `(k, g(k))` evaluated at `mean_cap`.
pub(crate) fn relaxed_tail_with(q: &TailQuery, budget: &FailureBudget, kind: BoundKind) -> f64 {
    let base = super::tail(q, kind);
    if budget.is_zero() || q.threshold <= 0 || base >= 1.0 {
        return base;
    }
    // g(k) = 1 once v - k <= 0, so shifts beyond v cannot help
    let depth = budget.support_cap().min(q.threshold as u64);
    let g = shifted(q, depth, kind);
    concave_envelope_at(&g, budget.mean_cap())
}

fn shifted(q: &TailQuery, depth: u64, kind: BoundKind) -> Vec<f64> {
    match kind {
        BoundKind::Exact => {
            binomial::shifted_tails(q.trials, q.threshold, depth, q.success_prob, q.complement())
        }
        BoundKind::Hoeffding => (0..=depth as i64)
            .map(|k| super::tail(&q.with_threshold(q.threshold - k), kind))
            .collect(),
    }
}

/// Upper concave envelope of `(k, g[k])` evaluated at `x`, for nondecreasing
/// `g`; points past the end extend flat.
fn concave_envelope_at(g: &[f64], x: f64) -> f64 {
    let last = g.len() - 1;
    if x >= last as f64 {
        return g[last];
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(g.len());
    for (k, &gk) in g.iter().enumerate() {
        let b = (k as f64, gk);
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(b);
    }
    let seg = hull.windows(2).find(|w| w[1].0 >= x).expect("x inside hull range");
    let (a, b) = (seg[0], seg[1]);
    let t = (x - a.0) / (b.0 - a.0);
    ((1.0 - t) * a.1 + t * b.1).min(1.0)
}
