use super::{discretize_tail, tail_integral, GridFn};
use crate::error::{Error, Result};
use crate::tail::{Monotone, TailSpec};

const PER_DECADE: f64 = 40.0;
const MAX_CELLS: f64 = 4000.0;

/// `|{f > t}|`.
pub fn level_measure(f: &GridFn, t: f64) -> f64 {
    let mut m = 0.0;
    for (w, v) in f.breakpoints().windows(2).zip(f.values()) {
        if *v > t {
            m += w[1] - w[0];
        }
    }
    if let Some(lt) = f.left_tail() {
        m += lt.solve_decreasing(t, 0.0, f.first_break());
    }
    if let Some(rt) = f.right_tail() {
        let bn = f.last_break();
        match rt.monotonicity(bn, f64::INFINITY) {
            Monotone::NonDecreasing => {
                if rt.limit_at_infinity() > t {
                    return f64::INFINITY;
                }
            }
            _ => {
                if rt.limit_at_infinity() > t {
                    return f64::INFINITY;
                }
                m += rt.solve_decreasing(t, bn, f64::INFINITY) - bn;
            }
        }
    }
    m
}

/// (value, width) pairs for a tail portion on `(a, b)`, `0 <= a < b < inf`.
fn tail_steps(t: &TailSpec, a: f64, b: f64, out: &mut Vec<(f64, f64)>) {
    let mut lo = a;
    if a == 0.0 {
        let eps = b * 1e-12;
        out.push((tail_integral(t, 0.0, eps) / eps, eps));
        lo = eps;
    }
    if !(b > lo) {
        return;
    }
    let decades = (b / lo).log10();
    let per = PER_DECADE.min(MAX_CELLS / decades.max(1e-9));
    let (br, vals) = discretize_tail(t, lo, b, per);
    for (w, v) in br.windows(2).zip(vals) {
        out.push((v, w[1] - w[0]));
    }
}

/// Non-increasing rearrangement `f*`.
///
/// The analytic part of the left tail lying above every other value stays
/// analytic, as does the part of the right tail lying below every other
/// positive value (shifted into place). Interleaving tail portions become
/// cells carrying their exact averages.
pub fn rearrange(f: &GridFn) -> Result<GridFn> {
    let b0 = f.first_break();
    let bn = f.last_break();
    let mut floor = 0.0;
    let mut rt_analytic: Option<TailSpec> = None;
    let mut const_right = None;
    if let Some(rt) = f.right_tail() {
        let lim = rt.limit_at_infinity();
        if lim.is_infinite() {
            return Err(Error::InfiniteRearrangement);
        }
        match rt.monotonicity(bn, f64::INFINITY) {
            Monotone::NonDecreasing if !rt.is_constant() => {
                floor = lim;
                if lim > 0.0 {
                    const_right = Some(TailSpec::constant(lim));
                }
            }
            _ => {
                floor = lim;
                rt_analytic = Some(*rt);
            }
        }
    }

    let mut steps: Vec<(f64, f64)> = f
        .breakpoints()
        .windows(2)
        .zip(f.values())
        .filter(|(_, v)| **v > floor)
        .map(|(w, v)| (*v, w[1] - w[0]))
        .collect();

    let rt_top = rt_analytic.map(|t| t.value(bn)).unwrap_or(0.0);
    let mut big = steps.iter().map(|x| x.0).fold(rt_top, f64::max);
    if floor > 0.0 {
        big = big.max(floor);
    }

    let mut s_star = 0.0;
    let mut lt_analytic = None;
    if let Some(lt) = f.left_tail() {
        let s_floor = if floor > 0.0 { lt.solve_decreasing(floor, 0.0, b0) } else { b0 };
        s_star = lt.solve_decreasing(big, 0.0, s_floor);
        if s_star > 0.0 {
            lt_analytic = Some(*lt);
        }
        if s_floor > s_star {
            tail_steps(lt, s_star, s_floor, &mut steps);
        }
    }

    let small = steps.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    let mut s_m = bn;
    if let Some(rt) = rt_analytic {
        if rt.value(bn) > small {
            s_m = rt.solve_decreasing(small, bn, f64::INFINITY);
            if s_m.is_finite() && s_m > bn {
                let mut extra = Vec::new();
                tail_steps(&rt, bn, s_m, &mut extra);
                steps.extend(extra);
            }
        }
    }

    steps.retain(|(v, w)| *v > floor && *w > 0.0);
    steps.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(steps.len());
    for (v, w) in steps {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += w,
            _ => merged.push((v, w)),
        }
    }

    let mut left = lt_analytic;
    let mut br = Vec::with_capacity(merged.len() + 1);
    let mut vals = Vec::with_capacity(merged.len());
    let mut pos = s_star;
    let mut iter = merged.into_iter();
    if left.is_none() {
        if let Some((v, w)) = iter.next() {
            left = Some(TailSpec::constant(v));
            pos = w;
        }
    }
    if left.is_some() {
        br.push(pos);
    }
    for (v, w) in iter {
        pos += w;
        vals.push(v);
        br.push(pos);
    }

    let right = match (rt_analytic, const_right) {
        (Some(rt), _) => {
            let sigma = br.last().copied().unwrap_or(0.0);
            let r = rt.shifted(s_m - sigma);
            if rt.limit_at_infinity() == 0.0 && rt.value(s_m) == 0.0 {
                None
            } else {
                Some(r)
            }
        }
        (None, c) => c,
    };

    if br.is_empty() {
        return match right {
            None => Ok(GridFn::zero()),
            Some(r) => GridFn::build(vec![1.0], vec![], Some(r), Some(r), false),
        };
    }
    let extended = vals.iter().any(|v: &f64| v.is_infinite()) || f.is_extended() && left.map_or(false, |t| t.value(br[0]).is_infinite());
    GridFn::build(br, vals, left, right, extended)
}
