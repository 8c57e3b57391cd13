//! The local Hardy operator `s ↦ χ_(0,1)(s) ∫_s^1 f(r) r^{-1+m/n} dr`.

use crate::funcrep::{GridFn, Piece};
use crate::quad;
use crate::tail::{ell, TailSpec};

const PER_DECADE: f64 = 40.0;
const LEFT_DECADES: f64 = 8.0;
const DEEP_PER_DECADE: f64 = 4.0;
const DEEPEST: f64 = 1e-280;

fn cell_increment(v: f64, theta: f64, lo: f64, hi: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * (hi.powf(theta) - lo.powf(theta)) / theta
    }
}

/// `∫_lo^hi v r^{θ-1} (r - lo) dr`.
fn cell_moment(v: f64, theta: f64, lo: f64, hi: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let a = (hi.powf(theta + 1.0) - lo.powf(theta + 1.0)) / (theta + 1.0);
    let b = lo * (hi.powf(theta) - lo.powf(theta)) / theta;
    v * (a - b).max(0.0)
}

/// `∫_s^hi f(r) r^{θ-1} dr` over the pieces of `f`, exact on cells.
fn integral_from(f: &GridFn, theta: f64, s: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    for p in f.pieces() {
        match p.clip(s, hi) {
            Some(Piece::Cell { lo, hi, v }) => total += cell_increment(v, theta, lo, hi),
            Some(Piece::Tail { lo, hi, t }) => total += quad::integrate(|r| t.value(r) * r.powf(theta - 1.0), lo, hi),
            None => {}
        }
    }
    total
}

/// Pointwise value of the local Hardy operator of order `θ = m/n`.
pub fn hardy_at(f: &GridFn, theta: f64, s: f64) -> f64 {
    if s >= 1.0 {
        return 0.0;
    }
    integral_from(f, theta, s, 1.0)
}

/// Near-zero tail of `H(s) = H(s0) + ∫_s^{s0} L(r) r^{θ-1} dr` matching the
/// value at `s0`, with the leading behaviour of the exact integral.
fn left_tail(l: &TailSpec, theta: f64, s0: f64, h_s0: f64) -> TailSpec {
    let Some(lead) = l.leading_at_zero() else {
        return TailSpec::constant(h_s0);
    };
    let e = lead.e + theta - 1.0;
    let b = lead.b;
    let l0 = ell(s0);
    if quad::integrable_at_zero(e, b) {
        let rest = quad::integrate(|r| l.value(r) * r.powf(theta - 1.0), 0.0, s0);
        let h0 = h_s0 + rest;
        let (p, lp) = if e + 1.0 > 1e-12 { (e + 1.0, b) } else { (0.0, b + 1.0) };
        let denom = s0.powf(p) * l0.powf(lp);
        if rest == 0.0 || !denom.is_finite() || denom == 0.0 {
            return TailSpec::constant(h_s0);
        }
        return TailSpec { offset: h0, ..TailSpec::power_log(-rest / denom, p, lp) };
    }
    let (p, lp, k) = if e + 1.0 < -1e-12 {
        (e + 1.0, b, lead.c / -(e + 1.0))
    } else {
        // ∫ r^{-1} ℓ^b ~ ℓ^{b+1}/(b+1); b = -1 is approximated by a tiny power.
        let lp = (b + 1.0).max(1e-3);
        (0.0, lp, lead.c / lp)
    };
    TailSpec { offset: h_s0 - k * s0.powf(p) * l0.powf(lp), ..TailSpec::power_log(k, p, lp) }
}

/// `s ↦ ∫_s^upper f(r) r^{θ-1} dr` on `(0, upper)`, with `f` already supported
/// in `(0, upper]`.
pub(crate) fn hardy_profile(f: &GridFn, theta: f64, upper: f64) -> GridFn {
    if f.sup() == 0.0 {
        return GridFn::zero();
    }
    let left = f.left_tail().copied();
    let start = f.first_break();
    let s0 = if left.is_some() { (start.min(upper) * 10f64.powf(-LEFT_DECADES)).max(1e-300) } else { start };
    if !(s0 < upper) {
        return GridFn::zero();
    }

    let mut grid: Vec<f64> = f.breakpoints().iter().cloned().filter(|&b| b > s0 && b < upper).collect();
    let cells = ((upper / s0).log10() * PER_DECADE).ceil() as usize;
    for i in 0..=cells {
        grid.push(s0 * (upper / s0).powf(i as f64 / cells as f64));
    }
    // With a log factor the one-term tail is only accurate once b/((e+1) ℓ)
    // is small; continue with coarse cells until then.
    let s0 = match left.and_then(|t| t.leading_at_zero()) {
        Some(l) if l.b != 0.0 && (l.e + theta).abs() > 1e-12 => {
            let ell_min = 50.0 * l.b.abs() / (l.e + theta).abs();
            let deep = (1.0 - ell_min).exp().max(DEEPEST);
            if deep < s0 {
                let k = ((s0 / deep).log10() * DEEP_PER_DECADE).ceil() as usize;
                grid.extend((1..=k).map(|i| s0 * (deep / s0).powf(i as f64 / k as f64)));
                deep
            } else {
                s0
            }
        }
        _ => s0,
    };
    for k in 1..100 {
        grid.push(upper * (0.5 + k as f64 / 200.0));
    }
    for k in 8..40 {
        let x = upper * (1.0 - 0.5f64.powi(k));
        if x > s0 {
            grid.push(x);
        }
    }
    grid.push(s0);
    grid.push(upper);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
    *grid.first_mut().unwrap() = s0;
    *grid.last_mut().unwrap() = upper;

    let n = grid.len();
    let mut h = vec![0.0; n];
    let mut vals = vec![0.0; n - 1];
    for j in (0..n - 1).rev() {
        let (lo, hi) = (grid[j], grid[j + 1]);
        let mid = (lo * hi).sqrt();
        let (inc, mom) = match left {
            Some(t) if mid < start => {
                let g = |r: f64| t.value(r) * r.powf(theta - 1.0);
                (quad::integrate(g, lo, hi), quad::integrate(|r| g(r) * (r - lo), lo, hi))
            }
            _ => {
                let v = f.eval(mid);
                (cell_increment(v, theta, lo, hi), cell_moment(v, theta, lo, hi))
            }
        };
        h[j] = h[j + 1] + inc;
        vals[j] = (h[j + 1] + mom / (hi - lo)).clamp(h[j + 1], h[j]);
    }
    let tail = match left {
        Some(t) => left_tail(&t, theta, s0, h[0]),
        None => TailSpec::constant(h[0]),
    };
    match GridFn::build(grid.clone(), vals.clone(), Some(tail), None, false) {
        Ok(g) => g,
        // A log factor that is not yet monotone on (0, s0): keep the power only.
        Err(_) => {
            let flat = TailSpec { log_power: 0.0, ..tail };
            GridFn::build(grid, vals, Some(flat), None, false).unwrap_or_else(|_| GridFn::zero())
        }
    }
}

/// `χ_(0,1)(s) ∫_s^1 f(r) r^{-1+m/n} dr`. Values on `(0,1)` are cell
/// averages of the exact antiderivative; near zero the output keeps an
/// analytic tail with the exact leading order.
pub fn hardy_local(f: &GridFn, n: u32, m: u32) -> GridFn {
    let theta = m as f64 / n as f64;
    let f1 = f.restrict(0.0, 1.0);
    hardy_profile(&f1, theta, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_input() {
        let f = GridFn::indicator(1.0, 1.0);
        let h = hardy_local(&f, 3, 1);
        for s in [1e-9, 1e-3, 0.2, 0.5, 0.9] {
            let want = 3.0 * (1.0 - f64::powf(s, 1.0 / 3.0));
            assert!((hardy_at(&f, 1.0 / 3.0, s) - want).abs() < 1e-14, "{s}");
            assert!((h.eval(s) - want).abs() < 0.03 * want + 5e-3, "{s}: {} vs {want}", h.eval(s));
        }
        assert!(h.eval(1.0 - 1e-11) < 1e-9);
        assert_eq!(h.eval(1.5), 0.0);
        assert!(h.is_nonincreasing());
    }

    #[test]
    fn split_interval() {
        let f = GridFn::steps(vec![0.5, 1.0], vec![1.0]).unwrap();
        let theta = 1.0 / 3.0;
        for s in [0.1, 0.3, 0.6, 0.8] {
            let want = 3.0 * (1.0 - f64::max(s, 0.5).powf(theta));
            assert!((hardy_at(&f, theta, s) - want).abs() < 1e-14);
        }
        let h = hardy_local(&f, 3, 1);
        assert!((h.eval(0.01) - 3.0 * (1.0 - 0.5f64.powf(theta))).abs() < 1e-13);
        assert_eq!(hardy_local(&GridFn::zero(), 3, 1), GridFn::zero());
    }

    #[test]
    fn singular_input_keeps_leading_order() {
        // f = s^{-1/2} on (0,1): H(s) = 6 (s^{-1/6} - 1).
        let f = GridFn::build(vec![1.0], vec![], Some(TailSpec::power(1.0, -0.5)), None, false).unwrap();
        let h = hardy_local(&f, 3, 1);
        for s in [1e-12, 1e-6, 1e-2, 0.3] {
            let want = 6.0 * (f64::powf(s, -1.0 / 6.0) - 1.0);
            assert!((h.eval(s) - want).abs() < 0.03 * want, "{s}: {} vs {want}", h.eval(s));
        }
        let lead = h.left_tail().unwrap().leading_at_zero().unwrap();
        assert!((lead.e + 1.0 / 6.0).abs() < 1e-12);
        assert!(h.is_nonincreasing());
    }

    #[test]
    fn bounded_when_exponent_small() {
        // f = s^{-1/6}: H(0) = ∫_0^1 r^{-5/6} = 6.
        let f = GridFn::build(vec![1.0], vec![], Some(TailSpec::power(1.0, -1.0 / 6.0)), None, false).unwrap();
        let h = hardy_local(&f, 3, 1);
        assert!((h.left_tail().unwrap().limit_at_zero() - 6.0).abs() < 1e-6);
        assert!(h.sup() <= 6.0 + 1e-6);
    }
}
