//! Admissibility of `Λ^q(w)` weights by the ratio tests of Ariño–Muckenhoupt
//! and Sawyer type, sampled on log grids of increasing span.

use super::weight::Weight;
use serde::{Deserialize, Serialize};

const PER_DECADE: usize = 20;
const COARSE_DECADES: f64 = 4.0;
const FINE_DECADES: f64 = 8.0;
const STABLE_GROWTH: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub holds: bool,
    /// Supremum of the ratio over the widest grid.
    #[serde(with = "crate::extf64")]
    pub ratio: f64,
    /// The same supremum over the narrower grid.
    #[serde(with = "crate::extf64")]
    pub coarse_ratio: f64,
    pub decades: f64,
}

fn grid(l: f64, decades: f64) -> Vec<f64> {
    let lo = -decades;
    let hi = if l.is_finite() { l.log10() } else { decades };
    let n = ((hi - lo) * PER_DECADE as f64).ceil() as usize;
    (0..=n).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / n as f64)).collect()
}

/// Cumulative `∫_0^{s_i} h` along the grid.
fn left_cumulative(h: &Weight, s: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(s.len());
    let mut acc = h.integral(0.0, s[0]);
    out.push(acc);
    for w in s.windows(2) {
        acc += h.integral(w[0], w[1]);
        out.push(acc);
    }
    out
}

/// Cumulative `∫_{s_i}^l h` along the grid.
fn right_cumulative(h: &Weight, s: &[f64], l: f64) -> Vec<f64> {
    let n = s.len();
    let mut out = vec![0.0; n];
    let mut acc = h.integral(s[n - 1], l);
    out[n - 1] = acc;
    for i in (0..n - 1).rev() {
        acc += h.integral(s[i], s[i + 1]);
        out[i] = acc;
    }
    out
}

fn sup_ratio(q: f64, w: &Weight, l: f64, decades: f64) -> f64 {
    let s = grid(l, decades);
    if q.is_infinite() {
        let inv = left_cumulative(&w.pow(-1.0), &s);
        return s.iter().zip(&inv).map(|(&x, &i)| w.eval(x.min(l * (1.0 - 1e-15))) / x * i).fold(0.0, f64::max);
    }
    if q == 1.0 {
        let cum = left_cumulative(w, &s);
        let mut best = 0.0f64;
        let mut min_avg = f64::INFINITY;
        for (x, c) in s.iter().zip(&cum) {
            let avg = c / x;
            if avg.is_infinite() {
                return f64::INFINITY;
            }
            min_avg = min_avg.min(avg);
            best = best.max(avg / min_avg);
        }
        return best;
    }
    let wq = w.pow(q);
    let left = left_cumulative(&wq, &s);
    let right = right_cumulative(&wq.times_power(-q), &s, l);
    let mut best = 0.0f64;
    for i in 0..s.len() {
        if left[i].is_infinite() {
            continue;
        }
        let r = s[i].powf(q) * right[i] / left[i];
        if r.is_nan() {
            continue;
        }
        best = best.max(r);
    }
    best
}

/// Checks the weight condition under which `‖f* w‖_{L^q(0,l)}` is
/// equivalent to a rearrangement-invariant norm.
pub fn check_lambda_admissible(q: f64, w: &Weight, l: f64) -> AdmissibilityVerdict {
    if !(q >= 1.0) || !w.covers(l) {
        return AdmissibilityVerdict { holds: false, ratio: f64::INFINITY, coarse_ratio: f64::INFINITY, decades: 0.0 };
    }
    let w = w.truncate(l);
    let coarse = sup_ratio(q, &w, l, COARSE_DECADES);
    let fine = sup_ratio(q, &w, l, FINE_DECADES);
    let holds = fine.is_finite() && fine > 0.0 && fine <= coarse * (1.0 + STABLE_GROWTH);
    AdmissibilityVerdict { holds, ratio: fine, coarse_ratio: coarse, decades: FINE_DECADES }
}
