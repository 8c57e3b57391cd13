//! Piecewise power-log weights `c * s^a * (k + |ln s|)^b`.

use crate::error::{Error, Result};
use crate::tail::Leading;
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
pub struct WeightSegment {
    pub lo: f64,
    #[serde(with = "crate::extf64")]
    pub hi: f64,
    #[serde(default = "one")]
    pub coef: f64,
    #[serde(default)]
    pub power: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub log_power: f64,
    /// The `k` in `(k + |ln s|)`.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub log_offset: f64,
}

impl WeightSegment {
    pub fn new(lo: f64, hi: f64, coef: f64, power: f64, log_power: f64) -> Self {
        WeightSegment { lo, hi, coef, power, log_power, log_offset: 1.0 }
    }

    pub fn eval(&self, s: f64) -> f64 {
        let mut v = self.coef;
        if self.power != 0.0 {
            v *= s.powf(self.power);
        }
        if self.log_power != 0.0 {
            v *= (self.log_offset + s.ln().abs()).powf(self.log_power);
        }
        v
    }

    pub fn is_constant(&self) -> bool {
        self.power == 0.0 && self.log_power == 0.0
    }

    pub fn is_pure_power(&self) -> bool {
        self.log_power == 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeight", into = "RawWeight")]
pub struct Weight {
    segments: Vec<WeightSegment>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawWeight {
    segments: Vec<WeightSegment>,
}

impl TryFrom<RawWeight> for Weight {
    type Error = Error;
    fn try_from(r: RawWeight) -> Result<Self> {
        Weight::new(r.segments)
    }
}

impl From<Weight> for RawWeight {
    fn from(w: Weight) -> Self {
        RawWeight { segments: w.segments }
    }
}

impl Weight {
    pub fn new(segments: Vec<WeightSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Inadmissible("weight needs at least one segment".into()));
        }
        if segments[0].lo != 0.0 {
            return Err(Error::Inadmissible("weight segments must start at 0".into()));
        }
        for (i, g) in segments.iter().enumerate() {
            let finite = [g.coef, g.power, g.log_power, g.log_offset].iter().all(|x| x.is_finite());
            if !finite || !(g.coef > 0.0) || !(g.hi > g.lo) {
                return Err(Error::Inadmissible(format!("weight segment {i} is not positive on a nonempty interval")));
            }
            if g.log_power != 0.0 && !(g.log_offset > 0.0) {
                return Err(Error::Inadmissible("log offset must be positive".into()));
            }
            if i > 0 && segments[i - 1].hi != g.lo {
                return Err(Error::Inadmissible("weight segments must be contiguous".into()));
            }
        }
        Ok(Weight { segments })
    }

    /// `w ≡ 1` on `(0, inf)`.
    pub fn unit() -> Self {
        Weight { segments: vec![WeightSegment::new(0.0, f64::INFINITY, 1.0, 0.0, 0.0)] }
    }

    /// `w(s) = s^a` on `(0, inf)`.
    pub fn power(a: f64) -> Self {
        Weight { segments: vec![WeightSegment::new(0.0, f64::INFINITY, 1.0, a, 0.0)] }
    }

    /// Two segments split at `s = 1`.
    pub fn split_at_one(below: WeightSegment, above: WeightSegment) -> Self {
        let b = WeightSegment { lo: 0.0, hi: 1.0, ..below };
        let a = WeightSegment { lo: 1.0, hi: f64::INFINITY, ..above };
        Weight { segments: vec![b, a] }
    }

    pub fn segments(&self) -> &[WeightSegment] {
        &self.segments
    }

    /// Right end of the covered interval.
    pub fn end(&self) -> f64 {
        self.segments.last().unwrap().hi
    }

    pub fn covers(&self, l: f64) -> bool {
        self.end() >= l
    }

    pub fn eval(&self, s: f64) -> f64 {
        for g in &self.segments {
            if s < g.hi {
                return g.eval(s);
            }
        }
        f64::NAN
    }

    pub fn is_unit(&self) -> bool {
        self.segments.iter().all(|g| g.is_constant() && g.coef == 1.0)
    }

    pub fn leading_at_zero(&self) -> Leading {
        let g = &self.segments[0];
        Leading { c: g.coef, e: g.power, b: g.log_power }
    }

    pub fn leading_at_infinity(&self) -> Leading {
        let g = self.segments.last().unwrap();
        Leading { c: g.coef, e: g.power, b: g.log_power }
    }

    /// The weight restricted to `(0, l)`.
    pub fn truncate(&self, l: f64) -> Self {
        let mut segs: Vec<WeightSegment> = self.segments.iter().filter(|g| g.lo < l).cloned().collect();
        if let Some(last) = segs.last_mut() {
            last.hi = last.hi.min(l);
        }
        Weight { segments: segs }
    }

    /// `w^r` segmentwise.
    pub fn pow(&self, r: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|g| WeightSegment {
                coef: g.coef.powf(r),
                power: g.power * r,
                log_power: g.log_power * r,
                ..*g
            })
            .collect();
        Weight { segments }
    }

    /// `w(s) * s^e`.
    pub fn times_power(&self, e: f64) -> Self {
        let segments = self.segments.iter().map(|g| WeightSegment { power: g.power + e, ..*g }).collect();
        Weight { segments }
    }

    /// ∫_lo^hi w(s) ds.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let mut total = 0.0;
        for g in &self.segments {
            let a = g.lo.max(lo);
            let b = g.hi.min(hi);
            if !(b > a) {
                continue;
            }
            total += segment_integral(g, a, b);
            if total.is_infinite() {
                return total;
            }
        }
        total
    }

    /// Largest ratio `w(t)/w(s)` over `s < t` on a log grid of `(0, l)`:
    /// finite exactly when `w` is equivalent to a non-increasing function.
    pub fn increase_ratio(&self, l: f64) -> f64 {
        let top = if l.is_finite() { l.ln() } else { 8.0 * std::f64::consts::LN_10 };
        let bot = -8.0 * std::f64::consts::LN_10;
        let n = 800;
        let mut min_so_far = f64::INFINITY;
        let mut worst: f64 = 1.0;
        for i in 0..=n {
            let s = (bot + (top - bot) * i as f64 / n as f64).exp();
            let v = self.eval(s.min(l * (1.0 - 1e-12)));
            if v < min_so_far {
                min_so_far = v;
            }
            worst = worst.max(v / min_so_far);
        }
        // Asymptotic direction decides the open ends.
        let z = self.leading_at_zero();
        if z.e > 0.0 || (z.e == 0.0 && z.b < 0.0) {
            return f64::INFINITY;
        }
        if l.is_infinite() {
            let w = self.leading_at_infinity();
            if w.e > 0.0 || (w.e == 0.0 && w.b > 0.0) {
                return f64::INFINITY;
            }
        }
        worst
    }
}

/// ∫_a^b of one segment, exact without a log factor.
pub fn segment_integral(g: &WeightSegment, a: f64, b: f64) -> f64 {
    if g.is_pure_power() {
        return crate::quad::power_integral(g.coef, g.power, a, b);
    }
    if a == 0.0 && !crate::quad::integrable_at_zero(g.power, g.log_power) {
        return f64::INFINITY;
    }
    if b.is_infinite() && !crate::quad::integrable_at_infinity(g.power, g.log_power) {
        return f64::INFINITY;
    }
    if a < 1.0 && b > 1.0 {
        return crate::quad::integrate(|s| g.eval(s), a, 1.0) + crate::quad::integrate(|s| g.eval(s), 1.0, b);
    }
    crate::quad::integrate(|s| g.eval(s), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_gaps_and_nonpositive() {
        let a = WeightSegment::new(0.0, 1.0, 1.0, 0.0, 0.0);
        let b = WeightSegment::new(2.0, f64::INFINITY, 1.0, 0.0, 0.0);
        assert!(Weight::new(vec![a, b]).is_err());
        assert!(Weight::new(vec![WeightSegment::new(0.0, 1.0, 0.0, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn integrals_and_monotonicity() {
        let w = Weight::split_at_one(
            WeightSegment::new(0.0, 1.0, 1.0, -0.5, 0.0),
            WeightSegment::new(1.0, f64::INFINITY, 1.0, -2.0, 0.0),
        );
        assert!((w.integral(0.0, f64::INFINITY) - 3.0).abs() < 1e-12);
        assert!(w.increase_ratio(f64::INFINITY) <= 1.0 + 1e-12);
        assert!(Weight::power(0.2).increase_ratio(1.0).is_infinite());
        let lg = Weight::new(vec![WeightSegment::new(0.0, 1.0, 1.0, -1.0, -2.0)]).unwrap();
        // ∫_0^1 s^{-1}(1 + ln 1/s)^{-2} ds = 1
        assert!((lg.integral(0.0, 1.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn serde_roundtrip() {
        let w = Weight::split_at_one(
            WeightSegment { log_offset: 2f64.ln(), ..WeightSegment::new(0.0, 1.0, 1.0, -0.5, -1.0) },
            WeightSegment::new(1.0, f64::INFINITY, 1.0, 0.1, 0.0),
        );
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.contains("\"inf\""));
        let back: Weight = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }
}
