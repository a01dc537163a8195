//! Real roots of the secular equation `Σ_k w_k / (λ − p_k)² = 4`, `w_k > 0`.
//!
//! The poles split the real line into open intervals. On the two outer ones
//! the left-hand side is monotone and runs from 0 to +∞, so each holds
//! exactly one root. Between two poles it is convex with +∞ at both ends:
//! its minimum is located by bisection on the (monotone) derivative, and if
//! that minimum is negative the two roots on either side are bracketed by
//! monotone pieces. Every root is refined by bisection to adjacent floats.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Minimum of `g` between poles below this counts as a double root.
const TANGENT_TOL: f64 = 1e-12;

fn secular(poles: &[(f64, f64)], lambda: f64) -> f64 {
    poles
        .iter()
        .map(|&(p, w)| {
            let d = lambda - p;
            w / (d * d)
        })
        .sum::<f64>()
        - 4.0
}

fn secular_slope(poles: &[(f64, f64)], lambda: f64) -> f64 {
    poles
        .iter()
        .map(|&(p, w)| {
            let d = lambda - p;
            -2.0 * w / (d * d * d)
        })
        .sum()
}

/// Bisects the open interval `(lo, hi)` for a sign change of `f`, where `f`
/// is negative just right of `lo` when `rising` (positive otherwise). The
/// endpoints themselves are never evaluated.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rising: bool) -> f64 {
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All real solutions `λ`, ascending. `poles` holds `(p_k, w_k)` pairs with
/// positive weights; coincident poles are merged.
pub(crate) fn secular_roots(poles: &[(f64, f64)]) -> Vec<f64> {
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(poles.len());
    let mut sorted: Vec<(f64, f64)> = poles.iter().copied().filter(|&(_, w)| w > 0.0).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (p, w) in sorted {
        match merged.last_mut() {
            Some(last) if (p - last.0).abs() <= 1e-15 * p.abs().max(last.0.abs()) => last.1 += w,
            _ => merged.push((p, w)),
        }
    }
    if merged.is_empty() {
        return Vec::new();
    }

    let g = |l: f64| secular(&merged, l);
    let reach = 0.5 * merged.iter().map(|&(_, w)| w).sum::<f64>().sqrt();
    let mut roots = Vec::new();

    // left of every pole: g rises from -4 to +inf
    let first = merged[0].0;
    roots.push(bisect(g, first - reach, first, true));

    for pair in merged.windows(2) {
        let (lo, hi) = (pair[0].0, pair[1].0);
        let turn = bisect(|l| secular_slope(&merged, l), lo, hi, true);
        let g_min = g(turn);
        if g_min < 0.0 {
            roots.push(bisect(g, lo, turn, false));
            roots.push(bisect(g, turn, hi, true));
        } else if g_min <= TANGENT_TOL {
            roots.push(turn);
        }
    }

    // right of every pole: g falls from +inf to -4
    let last = merged[merged.len() - 1].0;
    roots.push(bisect(g, last, last + reach, false));
    roots
}
