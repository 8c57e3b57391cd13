//! Analytic tail terms `offset + coef * x^power * (1+|ln x|)^log_power`
//! with `x = (s + shift) / scale`.

use serde::{Deserialize, Serialize};

fn one() -> f64 {
    1.0
}
fn is_zero(x: &f64) -> bool {
    *x == 0.0
}
fn is_one(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSpec {
    pub coef: f64,
    pub power: f64,
    #[serde(default)]
    pub log_power: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub shift: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub offset: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotone {
    NonIncreasing,
    NonDecreasing,
    Neither,
}

/// Leading behaviour `c * s^e * (1+|ln s|)^b` at an endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Leading {
    pub c: f64,
    pub e: f64,
    pub b: f64,
}

pub fn ell(x: f64) -> f64 {
    1.0 + x.ln().abs()
}

impl TailSpec {
    pub fn power(coef: f64, power: f64) -> Self {
        TailSpec { coef, power, log_power: 0.0, shift: 0.0, scale: 1.0, offset: 0.0 }
    }

    pub fn power_log(coef: f64, power: f64, log_power: f64) -> Self {
        TailSpec { coef, power, log_power, shift: 0.0, scale: 1.0, offset: 0.0 }
    }

    pub fn constant(c: f64) -> Self {
        TailSpec::power(c, 0.0)
    }

    pub fn x(&self, s: f64) -> f64 {
        (s + self.shift) / self.scale
    }

    pub fn term(&self, x: f64) -> f64 {
        if self.coef == 0.0 {
            return 0.0;
        }
        let mut v = self.coef;
        if self.power != 0.0 {
            v *= x.powf(self.power);
        }
        if self.log_power != 0.0 {
            v *= ell(x).powf(self.log_power);
        }
        v
    }

    pub fn value(&self, s: f64) -> f64 {
        self.offset + self.term(self.x(s))
    }

    /// True when the term has no shift, unit scale and no log factor, so
    /// integrals of powers of it are elementary.
    pub fn is_pure_power(&self) -> bool {
        self.shift == 0.0 && self.scale == 1.0 && self.log_power == 0.0 && self.offset == 0.0
    }

    pub fn is_constant(&self) -> bool {
        self.coef == 0.0 || (self.power == 0.0 && self.log_power == 0.0)
    }

    /// `d ln(term) / d ln x`, which carries the sign of the slope of `x^a ℓ^b`.
    fn log_slope(&self, x: f64, side_above_one: bool) -> f64 {
        let l = ell(x);
        if side_above_one {
            self.power + self.log_power / l
        } else {
            self.power - self.log_power / l
        }
    }

    /// Monotonicity of the tail on `(lo, hi)` in the variable `s`.
    pub fn monotonicity(&self, lo: f64, hi: f64) -> Monotone {
        if self.is_constant() {
            return Monotone::NonIncreasing;
        }
        let xl = self.x(lo);
        let xh = self.x(hi);
        let mut pts: Vec<(f64, bool)> = Vec::new();
        // log_slope is monotone in ℓ on each side of x = 1, so endpoints decide.
        let lim = |x: f64| if x <= 0.0 { self.power } else { f64::NAN };
        if xl < 1.0 {
            pts.push((xl, false));
            pts.push((xh.min(1.0), false));
        }
        if xh > 1.0 {
            pts.push((xl.max(1.0), true));
            pts.push((xh, true));
        }
        let mut pos = false;
        let mut neg = false;
        for (x, above) in pts {
            let k = if x <= 0.0 {
                lim(x)
            } else if x.is_infinite() {
                self.power
            } else {
                self.log_slope(x, above)
            };
            let d = k * self.coef.signum();
            if d > 1e-14 {
                pos = true;
            }
            if d < -1e-14 {
                neg = true;
            }
        }
        match (pos, neg) {
            (true, true) => Monotone::Neither,
            (true, false) => Monotone::NonDecreasing,
            _ => Monotone::NonIncreasing,
        }
    }

    /// Leading behaviour as `s -> 0+`. `None` when the tail vanishes identically.
    pub fn leading_at_zero(&self) -> Option<Leading> {
        let x0 = self.x(0.0);
        if x0 > 0.0 {
            let v = self.value(0.0);
            return if v == 0.0 { None } else { Some(Leading { c: v, e: 0.0, b: 0.0 }) };
        }
        let grows = self.power < 0.0 || (self.power == 0.0 && self.log_power > 0.0);
        if self.coef != 0.0 && (grows || self.offset == 0.0) {
            let c = self.coef * self.scale.powf(-self.power);
            return Some(Leading { c, e: self.power, b: self.log_power });
        }
        if self.offset != 0.0 {
            return Some(Leading { c: self.offset, e: 0.0, b: 0.0 });
        }
        if self.coef != 0.0 {
            return Some(Leading { c: self.coef, e: self.power, b: self.log_power });
        }
        None
    }

    /// Leading behaviour as `s -> inf`.
    pub fn leading_at_infinity(&self) -> Option<Leading> {
        let grows = self.power > 0.0 || (self.power == 0.0 && self.log_power > 0.0);
        let decays_term = !grows && !(self.power == 0.0 && self.log_power == 0.0);
        if self.coef != 0.0 && (grows || self.offset == 0.0) {
            let c = self.coef * self.scale.powf(-self.power);
            return Some(Leading { c, e: self.power, b: self.log_power });
        }
        if self.offset != 0.0 || (!decays_term && self.coef != 0.0) {
            let c = self.offset + if decays_term { 0.0 } else { self.coef };
            if c != 0.0 {
                return Some(Leading { c, e: 0.0, b: 0.0 });
            }
        }
        None
    }

    /// Limit of the tail as `s -> inf`.
    pub fn limit_at_infinity(&self) -> f64 {
        match self.leading_at_infinity() {
            None => 0.0,
            Some(l) if l.e > 0.0 || (l.e == 0.0 && l.b > 0.0) => f64::INFINITY * l.c.signum(),
            Some(l) if l.e == 0.0 && l.b == 0.0 => l.c,
            Some(_) => self.offset,
        }
    }

    /// Limit of the tail as `s -> 0+`.
    pub fn limit_at_zero(&self) -> f64 {
        match self.leading_at_zero() {
            None => 0.0,
            Some(l) if l.e < 0.0 || (l.e == 0.0 && l.b > 0.0) => f64::INFINITY * l.c.signum(),
            Some(l) if l.e == 0.0 && l.b == 0.0 => l.c,
            Some(_) => self.offset,
        }
    }

    /// `g(s) = f(s/λ)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        TailSpec { shift: self.shift * lambda, scale: self.scale * lambda, ..*self }
    }

    pub fn scaled(&self, c: f64) -> Self {
        TailSpec { coef: self.coef * c, offset: self.offset * c, ..*self }
    }

    /// Shifts the argument: `g(s) = f(s + d)`.
    pub fn shifted(&self, d: f64) -> Self {
        TailSpec { shift: self.shift + d, ..*self }
    }

    /// Smallest `s` in `(lo, hi)` with `value(s) <= t` for a non-increasing
    /// tail; `lo` if already below and `hi` if never.
    pub fn solve_decreasing(&self, t: f64, lo: f64, hi: f64) -> f64 {
        let lo_eff = if lo > 0.0 { lo } else { 1e-300 };
        if self.value(lo_eff) <= t && lo > 0.0 {
            return lo;
        }
        if hi.is_finite() && self.value(hi) > t {
            return hi;
        }
        if hi.is_infinite() && self.limit_at_infinity() > t {
            return hi;
        }
        if self.log_power == 0.0 && self.power != 0.0 && self.coef != 0.0 {
            let r = (t - self.offset) / self.coef;
            if r > 0.0 {
                let x = r.powf(1.0 / self.power);
                let s = x * self.scale - self.shift;
                if s.is_finite() && s >= lo && s <= hi {
                    return s;
                }
            }
        }
        let mut a = lo_eff.ln();
        let mut b = if hi.is_finite() { hi.ln() } else { 700.0 };
        if self.value(a.exp()) <= t {
            return lo;
        }
        while self.value(b.exp()) > t && b < 1e6 {
            b *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if self.value(mid.exp()) > t {
                a = mid;
            } else {
                b = mid;
            }
            if (b - a).abs() < 1e-15 * (1.0 + b.abs()) {
                break;
            }
        }
        b.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        let t = TailSpec::power_log(2.0, -0.5, 1.0);
        let s: f64 = 0.01;
        let want = 2.0 * s.powf(-0.5) * (1.0 + s.ln().abs());
        assert!((t.value(s) - want).abs() < 1e-12);
    }

    #[test]
    fn monotonicity_detection() {
        assert_eq!(TailSpec::power(1.0, -0.5).monotonicity(0.0, 1.0), Monotone::NonIncreasing);
        assert_eq!(TailSpec::power(1.0, 0.5).monotonicity(1.0, 5.0), Monotone::NonDecreasing);
        // x^{-1/2} (1+|ln x|)^2 turns around at x = e^3.
        let t = TailSpec::power_log(1.0, -0.5, 2.0);
        assert_eq!(t.monotonicity(1e-4, 1.0), Monotone::NonIncreasing);
        assert_eq!(t.monotonicity(1.0, 100.0), Monotone::Neither);
    }

    #[test]
    fn inverse_of_decreasing_tail() {
        let t = TailSpec::power_log(1.0, -0.5, 0.5);
        let s = t.solve_decreasing(10.0, 0.0, 1.0);
        assert!((t.value(s) - 10.0).abs() < 1e-9);
        let p = TailSpec::power(4.0, -2.0);
        assert!((p.solve_decreasing(1.0, 1.0, f64::INFINITY) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dilation_is_exact() {
        let t = TailSpec { shift: 0.3, ..TailSpec::power_log(1.5, -0.7, 0.4) };
        let d = t.dilate(3.0);
        for s in [0.1, 1.0, 7.0] {
            assert!((d.value(s) - t.value(s / 3.0)).abs() < 1e-12 * t.value(s / 3.0).abs());
        }
    }
}
