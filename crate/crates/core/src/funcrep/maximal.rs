use super::{rearrange, GridFn, Piece};
use crate::error::{Error, Result};
use crate::quad;
use crate::tail::TailSpec;

/// `u**(s) = (1/s) ∫_0^s u*` at a single point.
pub fn maximal_at(u: &GridFn, s: f64) -> Result<f64> {
    let us = rearrange(u)?;
    check_integrable(&us)?;
    Ok(us.integral(0.0, s) / s)
}

fn check_integrable(us: &GridFn) -> Result<()> {
    if let Some(lt) = us.left_tail() {
        if let Some(l) = lt.leading_at_zero() {
            if lt.x(0.0) == 0.0 && !quad::integrable_at_zero(l.e, l.b) {
                return Err(Error::NonIntegrable);
            }
        }
    }
    if us.values().iter().any(|v| v.is_infinite()) {
        return Err(Error::NonIntegrable);
    }
    Ok(())
}

/// Running primitive of a non-increasing function, cached at breakpoints.
struct Primitive {
    pieces: Vec<Piece>,
    cum: Vec<f64>,
}

impl Primitive {
    fn new(f: &GridFn) -> Self {
        let pieces = f.pieces();
        let mut cum = Vec::with_capacity(pieces.len());
        let mut acc = 0.0;
        for p in &pieces {
            cum.push(acc);
            if p.hi().is_finite() {
                acc += super::piece_integral(p);
            }
        }
        Primitive { pieces, cum }
    }

    fn at(&self, s: f64) -> f64 {
        let i = self.pieces.partition_point(|p| p.hi() <= s);
        if i >= self.pieces.len() {
            return self.cum.last().copied().unwrap_or(0.0)
                + self.pieces.last().map_or(0.0, |p| if p.hi().is_finite() { super::piece_integral(p) } else { 0.0 });
        }
        let p = self.pieces[i];
        let part = p.clip(0.0, s).map_or(0.0, |c| super::piece_integral(&c));
        self.cum[i] + part
    }
}

/// `u**` as a grid function. Cell values are exact at geometric cell
/// midpoints; the tails are exact for pure power tails and asymptotic
/// otherwise. Use [`maximal_at`] for exact pointwise values.
pub fn maximal(u: &GridFn) -> Result<GridFn> {
    let us = rearrange(u)?;
    check_integrable(&us)?;
    let prim = Primitive::new(&us);
    let b0 = us.first_break();
    let bn = us.last_break();

    let (lo, left) = match us.left_tail() {
        None => (b0, None),
        Some(lt) if lt.log_power == 0.0 && lt.shift == 0.0 => {
            let t = TailSpec { coef: lt.coef / (lt.power + 1.0), ..*lt };
            (b0, Some(t))
        }
        Some(lt) => {
            let lo = b0 * 1e-8;
            let v = prim.at(lo) / lo;
            let t = match lt.leading_at_zero() {
                Some(l) if lt.x(0.0) == 0.0 => {
                    let shape = TailSpec::power_log(1.0, l.e, l.b);
                    TailSpec::power_log(v / shape.value(lo), l.e, l.b)
                }
                _ => TailSpec::constant(v),
            };
            (lo, Some(t))
        }
    };

    let (hi, right) = match us.right_tail() {
        None => {
            let total = prim.at(bn);
            (bn, if total > 0.0 { Some(TailSpec::power(total, -1.0)) } else { None })
        }
        Some(rt) => {
            let hi = bn * 1e8;
            let v = prim.at(hi) / hi;
            let t = match rt.leading_at_infinity() {
                Some(l) if l.e == 0.0 && l.b == 0.0 => {
                    TailSpec { offset: l.c, ..TailSpec::power((v - l.c) * hi, -1.0) }
                }
                Some(l) if l.e > -1.0 => TailSpec::power_log(v / TailSpec::power_log(1.0, l.e, l.b).value(hi), l.e, l.b),
                Some(l) if l.e == -1.0 && l.b >= -1.0 => {
                    let sh = TailSpec::power_log(1.0, -1.0, l.b + 1.0);
                    TailSpec::power_log(v / sh.value(hi), -1.0, l.b + 1.0)
                }
                _ => TailSpec::power(v * hi, -1.0),
            };
            (hi, Some(t))
        }
    };

    let mut grid: Vec<f64> = us.breakpoints().iter().cloned().filter(|b| *b >= lo && *b <= hi).collect();
    if hi > lo {
        let n = ((hi / lo).log10() * 10.0).ceil() as usize;
        for i in 0..=n {
            grid.push(lo * (hi / lo).powf(i as f64 / n.max(1) as f64));
        }
    }
    grid.push(lo);
    grid.push(hi);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
    let vals: Vec<f64> = grid
        .windows(2)
        .map(|w| {
            let m = (w[0] * w[1]).sqrt();
            prim.at(m) / m
        })
        .collect();
    GridFn::build(grid, vals, left, right, false)
}
