//! Weighted integrals of a non-increasing `f*` against a [`Weight`]:
//! `L^q` functionals, suprema and Luxemburg modulars.

use super::weight::{Weight, WeightSegment};
use crate::error::{Error, Result};
use crate::funcrep::{GridFn, Piece};
use crate::quad;
use crate::tail::{Leading, TailSpec};
use crate::young::YoungFn;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Part {
    Cell(f64),
    Tail(TailSpec),
}

/// One piece of `f* · w` on `(lo, hi)` where both factors have a single formula.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Prod {
    pub lo: f64,
    pub hi: f64,
    pub f: Part,
    pub w: WeightSegment,
}

impl Prod {
    pub fn fval(&self, s: f64) -> f64 {
        match self.f {
            Part::Cell(v) => v,
            Part::Tail(t) => t.value(s),
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        let f = self.fval(s);
        if f == 0.0 {
            0.0
        } else {
            f * self.w.eval(s)
        }
    }

    fn is_zero(&self) -> bool {
        match self.f {
            Part::Cell(v) => v == 0.0,
            Part::Tail(t) => t.coef == 0.0 && t.offset == 0.0,
        }
    }

    fn leading(&self, at_zero: bool) -> Option<Leading> {
        let l = match self.f {
            Part::Cell(v) => {
                if v == 0.0 {
                    return None;
                }
                Leading { c: v, e: 0.0, b: 0.0 }
            }
            Part::Tail(t) => {
                if at_zero {
                    t.leading_at_zero()?
                } else {
                    t.leading_at_infinity()?
                }
            }
        };
        Some(Leading { c: l.c * self.w.coef, e: l.e + self.w.power, b: l.b + self.w.log_power })
    }
}

/// Splits `f* · w` on `(0, l)` into [`Prod`] pieces, also cutting at the
/// kinks of the log factors.
pub(crate) fn products(fs: &GridFn, w: &Weight, l: f64) -> Vec<Prod> {
    let mut out = Vec::new();
    for p in fs.pieces() {
        let Some(p) = p.clip(0.0, l) else { continue };
        for g in w.segments() {
            let a = p.lo().max(g.lo);
            let b = p.hi().min(g.hi);
            if !(b > a) {
                continue;
            }
            let (f, kink) = match p {
                Piece::Cell { v, .. } => (Part::Cell(v), None),
                Piece::Tail { t, .. } => {
                    let k = if t.log_power != 0.0 { Some(t.scale - t.shift) } else { None };
                    (Part::Tail(t), k)
                }
            };
            let mut cuts = vec![a];
            let mut add = |c: f64| {
                if c > a && c < b {
                    cuts.push(c);
                }
            };
            if g.log_power != 0.0 {
                add(1.0);
            }
            if let Some(k) = kink {
                add(k);
            }
            cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            cuts.push(b);
            for wdw in cuts.windows(2) {
                out.push(Prod { lo: wdw[0], hi: wdw[1], f, w: *g });
            }
        }
    }
    out
}

/// ∫ (f w)^q over one piece.
fn lq_piece(p: &Prod, q: f64) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    match p.f {
        Part::Cell(v) if p.w.is_pure_power() => {
            (v * p.w.coef).powf(q) * quad::power_integral(1.0, p.w.power * q, p.lo, p.hi)
        }
        Part::Tail(t) if t.is_pure_power() && p.w.is_pure_power() => {
            (t.coef * p.w.coef).powf(q) * quad::power_integral(1.0, (t.power + p.w.power) * q, p.lo, p.hi)
        }
        _ => {
            if p.lo == 0.0 {
                if let Some(l) = p.leading(true) {
                    if !quad::integrable_at_zero(l.e * q, l.b * q) {
                        return f64::INFINITY;
                    }
                }
            }
            if p.hi.is_infinite() {
                if let Some(l) = p.leading(false) {
                    if !quad::integrable_at_infinity(l.e * q, l.b * q) {
                        return f64::INFINITY;
                    }
                }
            }
            quad::integrate(|s| p.value(s).powf(q), p.lo, p.hi)
        }
    }
}

/// Essential supremum of `f w` over one piece.
fn sup_piece(p: &Prod) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let mut m: f64 = 0.0;
    for (end, at_zero) in [(p.lo, true), (p.hi, false)] {
        let open = if at_zero { end == 0.0 } else { end.is_infinite() };
        if open {
            if let Some(l) = p.leading(at_zero) {
                let grows = if at_zero { l.e < 0.0 } else { l.e > 0.0 };
                let logs = if l.e == 0.0 { l.b > 0.0 } else { false };
                if grows || logs {
                    return f64::INFINITY;
                }
                if l.e == 0.0 && l.b == 0.0 {
                    m = m.max(l.c);
                }
            }
        } else {
            m = m.max(p.value(end));
        }
    }
    let (a, b) = (
        if p.lo > 0.0 { p.lo.ln() } else { p.hi.min(1.0).ln() - 40.0 },
        if p.hi.is_finite() { p.hi.ln() } else { p.lo.max(1.0).ln() + 40.0 },
    );
    let n = 200;
    for i in 1..n {
        let s = (a + (b - a) * i as f64 / n as f64).exp();
        m = m.max(p.value(s));
    }
    m
}

/// `‖f* w‖_{L^q(0,l)}` for a non-increasing `fs`.
pub fn weighted_lq(fs: &GridFn, w: &Weight, q: f64, l: f64) -> f64 {
    let ps = products(fs, w, l);
    if q.is_infinite() {
        return ps.iter().map(sup_piece).fold(0.0, f64::max);
    }
    let mut total = 0.0;
    for p in &ps {
        total += lq_piece(p, q);
        if total.is_infinite() {
            return f64::INFINITY;
        }
    }
    total.powf(1.0 / q)
}

/// `∫_0^l A(f* w / λ)`.
pub(crate) fn modular(ps: &[Prod], a: &YoungFn, lambda: f64) -> f64 {
    let mut total = 0.0;
    for p in ps {
        if p.is_zero() {
            continue;
        }
        let v = match p.f {
            Part::Cell(v) if p.w.is_constant() => {
                let y = a.eval(v * p.w.coef / lambda);
                if y == 0.0 {
                    0.0
                } else {
                    y * (p.hi - p.lo)
                }
            }
            _ => quad::integrate(|s| a.eval(p.value(s) / lambda), p.lo, p.hi),
        };
        total += v;
        if total.is_infinite() || total.is_nan() {
            return f64::INFINITY;
        }
    }
    total
}

const LUX_TOL: f64 = 1e-12;

/// Luxemburg value `inf{λ : ∫_0^l A(f* w/λ) <= 1}`.
pub fn luxemburg(fs: &GridFn, w: &Weight, a: &YoungFn, l: f64) -> Result<f64> {
    let ps = products(fs, w, l);
    if ps.iter().all(|p| p.is_zero()) {
        return Ok(0.0);
    }
    let m = |lam: f64| modular(&ps, a, lam);
    let start = {
        let s = ps.iter().map(|p| p.value(0.5 * (p.lo + p.hi.min(2.0 * p.lo.max(1.0))))).fold(0.0, f64::max);
        if s.is_finite() && s > 0.0 {
            s
        } else {
            1.0
        }
    };
    let (mut lo, mut hi) = (start, start);
    let mut k = 0;
    while !(m(hi) <= 1.0) {
        hi *= 4.0;
        k += 1;
        if k > 500 || !hi.is_finite() {
            if m(1e300).is_infinite() {
                return Ok(f64::INFINITY);
            }
            return Err(Error::NonconvergentBisection("modular stays above 1 for every λ".into()));
        }
    }
    k = 0;
    while m(lo) <= 1.0 {
        lo /= 4.0;
        k += 1;
        if k > 500 || lo == 0.0 {
            return Err(Error::NonconvergentBisection("modular stays below 1 for every λ".into()));
        }
    }
    let (mut ul, mut uh) = (lo.ln(), hi.ln());
    for _ in 0..200 {
        if uh - ul < LUX_TOL {
            break;
        }
        let mid = 0.5 * (ul + uh);
        if m(mid.exp()) <= 1.0 {
            uh = mid;
        } else {
            ul = mid;
        }
    }
    Ok(uh.exp())
}

/// `∫ f g` over `(0, inf)`.
pub fn pairing(f: &GridFn, g: &GridFn) -> f64 {
    let mut total = 0.0;
    let gp = g.pieces();
    for pf in f.pieces() {
        for pg in &gp {
            let a = pf.lo().max(pg.lo());
            let b = pf.hi().min(pg.hi());
            if !(b > a) {
                continue;
            }
            let v = match (pf, *pg) {
                (Piece::Cell { v: x, .. }, Piece::Cell { v: y, .. }) => {
                    if x == 0.0 || y == 0.0 {
                        0.0
                    } else {
                        x * y * (b - a)
                    }
                }
                (Piece::Cell { v, .. }, Piece::Tail { t, .. }) | (Piece::Tail { t, .. }, Piece::Cell { v, .. }) => {
                    if v == 0.0 {
                        0.0
                    } else {
                        v * crate::funcrep::tail_integral(&t, a, b)
                    }
                }
                (Piece::Tail { t: s1, .. }, Piece::Tail { t: s2, .. }) => tail_product(&s1, &s2, a, b),
            };
            total += v;
        }
    }
    total
}

fn tail_product(s1: &TailSpec, s2: &TailSpec, a: f64, b: f64) -> f64 {
    let lead = |z: bool| -> Option<Leading> {
        let (l1, l2) = if z {
            (s1.leading_at_zero()?, s2.leading_at_zero()?)
        } else {
            (s1.leading_at_infinity()?, s2.leading_at_infinity()?)
        };
        Some(Leading { c: l1.c * l2.c, e: l1.e + l2.e, b: l1.b + l2.b })
    };
    if a == 0.0 {
        match lead(true) {
            None => {}
            Some(l) if !quad::integrable_at_zero(l.e, l.b) => return f64::INFINITY,
            _ => {}
        }
    }
    if b.is_infinite() {
        match lead(false) {
            None => {}
            Some(l) if !quad::integrable_at_infinity(l.e, l.b) => return f64::INFINITY,
            _ => {}
        }
    }
    let mut cuts = vec![a];
    for t in [s1, s2] {
        let k = t.scale - t.shift;
        if t.log_power != 0.0 && k > a && k < b {
            cuts.push(k);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.push(b);
    cuts.windows(2).map(|w| quad::integrate(|s| s1.value(s) * s2.value(s), w[0], w[1])).sum()
}
