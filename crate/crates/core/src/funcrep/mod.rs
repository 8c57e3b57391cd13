//! Piecewise representation of measurable functions on `(0, inf)`.
//!
//! A [`GridFn`] is a step function on `[b_0, b_N)` together with optional
//! analytic tails on `(0, b_0)` and `[b_N, inf)`. Outside the steps and
//! without a tail the function is zero.

mod maximal;
mod rearrange;

pub use maximal::{maximal, maximal_at};
pub use rearrange::{level_measure, rearrange};

use crate::error::{Error, Result};
use crate::quad;
use crate::tail::{Monotone, TailSpec};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGridFn", into = "RawGridFn")]
pub struct GridFn {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    left_tail: Option<TailSpec>,
    right_tail: Option<TailSpec>,
    extended: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawGridFn {
    breakpoints: Vec<f64>,
    #[serde(with = "crate::extf64::vec")]
    values: Vec<f64>,
    #[serde(default)]
    left_tail: Option<TailSpec>,
    #[serde(default)]
    right_tail: Option<TailSpec>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    extended: bool,
}

impl TryFrom<RawGridFn> for GridFn {
    type Error = Error;
    fn try_from(r: RawGridFn) -> Result<Self> {
        GridFn::build(r.breakpoints, r.values, r.left_tail, r.right_tail, r.extended)
    }
}

impl From<GridFn> for RawGridFn {
    fn from(g: GridFn) -> Self {
        RawGridFn {
            breakpoints: g.breakpoints,
            values: g.values,
            left_tail: g.left_tail,
            right_tail: g.right_tail,
            extended: g.extended,
        }
    }
}

/// One constant or analytic piece of a [`GridFn`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Cell { lo: f64, hi: f64, v: f64 },
    Tail { lo: f64, hi: f64, t: TailSpec },
}

impl Piece {
    pub fn lo(&self) -> f64 {
        match self {
            Piece::Cell { lo, .. } | Piece::Tail { lo, .. } => *lo,
        }
    }
    pub fn hi(&self) -> f64 {
        match self {
            Piece::Cell { hi, .. } | Piece::Tail { hi, .. } => *hi,
        }
    }
    pub fn value(&self, s: f64) -> f64 {
        match self {
            Piece::Cell { v, .. } => *v,
            Piece::Tail { t, .. } => t.value(s),
        }
    }
    /// The same piece clipped to `(lo, hi)`, if nonempty.
    pub fn clip(&self, lo: f64, hi: f64) -> Option<Piece> {
        let a = self.lo().max(lo);
        let b = self.hi().min(hi);
        if !(b > a) {
            return None;
        }
        Some(match *self {
            Piece::Cell { v, .. } => Piece::Cell { lo: a, hi: b, v },
            Piece::Tail { t, .. } => Piece::Tail { lo: a, hi: b, t },
        })
    }
}

fn check_tail(t: &TailSpec, lo: f64, hi: f64, left: bool) -> Result<()> {
    let fields = [t.coef, t.power, t.log_power, t.shift, t.scale, t.offset];
    if fields.iter().any(|x| !x.is_finite()) || t.scale <= 0.0 {
        return Err(Error::InvalidGridFn("tail parameters must be finite with scale > 0".into()));
    }
    if t.x(lo) < 0.0 || (t.x(lo) == 0.0 && lo > 0.0) {
        return Err(Error::InvalidGridFn("tail argument leaves (0, inf)".into()));
    }
    let mono = t.monotonicity(lo, hi);
    let (v_lo, v_hi) = if left {
        (t.limit_at_zero(), t.value(hi))
    } else {
        (t.value(lo), t.limit_at_infinity())
    };
    if v_lo < 0.0 || v_hi < 0.0 || v_lo.is_nan() || v_hi.is_nan() {
        return Err(Error::InvalidGridFn("tail takes negative values".into()));
    }
    match (left, mono) {
        (true, Monotone::NonIncreasing) => Ok(()),
        (true, _) => Err(Error::InvalidGridFn("left tail must be non-increasing".into())),
        (false, Monotone::Neither) => Err(Error::InvalidGridFn("right tail must be monotone".into())),
        (false, _) => Ok(()),
    }
}

/// ∫_lo^hi of a tail term, exact when there is no log factor.
pub fn tail_integral(t: &TailSpec, lo: f64, hi: f64) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let off = if t.offset == 0.0 { 0.0 } else { t.offset * (hi - lo) };
    if t.coef == 0.0 {
        return off;
    }
    if t.log_power == 0.0 {
        let c = t.coef * t.scale.powf(-t.power);
        let lo2 = lo + t.shift;
        let hi2 = hi + t.shift;
        return off + quad::power_integral(c, t.power, lo2, hi2);
    }
    if lo == 0.0 && t.shift == 0.0 && !quad::integrable_at_zero(t.power, t.log_power) {
        return f64::INFINITY;
    }
    if hi.is_infinite() && !quad::integrable_at_infinity(t.power, t.log_power) {
        return f64::INFINITY;
    }
    let term = TailSpec { offset: 0.0, ..*t };
    off + quad::integrate(|s| term.value(s), lo, hi)
}

/// ∫ over a piece.
pub fn piece_integral(p: &Piece) -> f64 {
    match *p {
        Piece::Cell { lo, hi, v } => {
            if v == 0.0 {
                0.0
            } else {
                v * (hi - lo)
            }
        }
        Piece::Tail { lo, hi, t } => tail_integral(&t, lo, hi),
    }
}

/// Cells with exact averages of a tail over `(lo, hi)`, `0 < lo < hi < inf`.
pub fn discretize_tail(t: &TailSpec, lo: f64, hi: f64, per_decade: f64) -> (Vec<f64>, Vec<f64>) {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade).ceil().max(1.0) as usize;
    let mut br = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let s = if i == 0 {
            lo
        } else if i == n {
            hi
        } else {
            lo * (hi / lo).powf(i as f64 / n as f64)
        };
        br.push(s);
    }
    let vals = br.windows(2).map(|w| tail_integral(t, w[0], w[1]) / (w[1] - w[0])).collect();
    (br, vals)
}

impl GridFn {
    pub fn build(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        left_tail: Option<TailSpec>,
        right_tail: Option<TailSpec>,
        extended: bool,
    ) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidGridFn("at least one breakpoint is required".into()));
        }
        if breakpoints.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(Error::InvalidGridFn("breakpoints must be finite and positive".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGridFn("breakpoints must be strictly increasing".into()));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidGridFn(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            )));
        }
        for v in &values {
            if v.is_nan() || *v < 0.0 {
                return Err(Error::InvalidGridFn("values must be nonnegative".into()));
            }
            if v.is_infinite() && !extended {
                return Err(Error::InvalidGridFn("infinite value requires extended = true".into()));
            }
        }
        let b0 = breakpoints[0];
        let bn = *breakpoints.last().unwrap();
        if let Some(t) = &left_tail {
            check_tail(t, 0.0, b0, true)?;
        }
        if let Some(t) = &right_tail {
            check_tail(t, bn, f64::INFINITY, false)?;
        }
        Ok(GridFn { breakpoints, values, left_tail, right_tail, extended })
    }

    pub fn steps(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        GridFn::build(breakpoints, values, None, None, false)
    }

    pub fn zero() -> Self {
        GridFn { breakpoints: vec![1.0], values: vec![], left_tail: None, right_tail: None, extended: false }
    }

    /// `c * χ_(0,b)`.
    pub fn indicator(b: f64, c: f64) -> Self {
        GridFn {
            breakpoints: vec![b],
            values: vec![],
            left_tail: Some(TailSpec::constant(c)),
            right_tail: None,
            extended: false,
        }
    }

    pub fn with_tails(mut self, left: Option<TailSpec>, right: Option<TailSpec>) -> Result<Self> {
        self.left_tail = left;
        self.right_tail = right;
        GridFn::build(self.breakpoints, self.values, self.left_tail, self.right_tail, self.extended)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn left_tail(&self) -> Option<&TailSpec> {
        self.left_tail.as_ref()
    }
    pub fn right_tail(&self) -> Option<&TailSpec> {
        self.right_tail.as_ref()
    }
    pub fn is_extended(&self) -> bool {
        self.extended
    }
    pub fn first_break(&self) -> f64 {
        self.breakpoints[0]
    }
    pub fn last_break(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }
    pub fn has_tails(&self) -> bool {
        self.left_tail.is_some() || self.right_tail.is_some()
    }

    pub fn eval(&self, s: f64) -> f64 {
        if !(s > 0.0) {
            return f64::NAN;
        }
        if s < self.first_break() {
            return self.left_tail.map_or(0.0, |t| t.value(s));
        }
        if s >= self.last_break() {
            return self.right_tail.map_or(0.0, |t| t.value(s));
        }
        let i = self.breakpoints.partition_point(|b| *b <= s);
        self.values[i - 1]
    }

    /// Pieces in increasing order of position.
    pub fn pieces(&self) -> Vec<Piece> {
        let mut out = Vec::with_capacity(self.values.len() + 2);
        if let Some(t) = self.left_tail {
            out.push(Piece::Tail { lo: 0.0, hi: self.first_break(), t });
        }
        for (i, v) in self.values.iter().enumerate() {
            out.push(Piece::Cell { lo: self.breakpoints[i], hi: self.breakpoints[i + 1], v: *v });
        }
        if let Some(t) = self.right_tail {
            out.push(Piece::Tail { lo: self.last_break(), hi: f64::INFINITY, t });
        }
        out
    }

    /// ∫_lo^hi f.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let mut total = 0.0;
        for p in self.pieces() {
            if let Some(c) = p.clip(lo, hi) {
                total += piece_integral(&c);
            }
        }
        total
    }

    /// Supremum of the function.
    pub fn sup(&self) -> f64 {
        let mut m = self.values.iter().cloned().fold(0.0, f64::max);
        if let Some(t) = self.left_tail {
            m = m.max(t.limit_at_zero());
        }
        if let Some(t) = self.right_tail {
            m = m.max(t.value(self.last_break())).max(t.limit_at_infinity());
        }
        m
    }

    pub fn scaled(&self, c: f64) -> Self {
        assert!(c >= 0.0 && c.is_finite());
        GridFn {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| if *v == 0.0 { 0.0 } else { v * c }).collect(),
            left_tail: self.left_tail.map(|t| t.scaled(c)),
            right_tail: self.right_tail.map(|t| t.scaled(c)),
            extended: self.extended,
        }
    }

    /// `E_λ f(s) = f(s/λ)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        assert!(lambda > 0.0 && lambda.is_finite());
        GridFn {
            breakpoints: self.breakpoints.iter().map(|b| b * lambda).collect(),
            values: self.values.clone(),
            left_tail: self.left_tail.map(|t| t.dilate(lambda)),
            right_tail: self.right_tail.map(|t| t.dilate(lambda)),
            extended: self.extended,
        }
    }

    /// Pointwise `min(f, k)`. Only defined when the tails stay below `k`.
    pub fn min_const(&self, k: f64) -> Result<Self> {
        let over = |t: &TailSpec, lo: f64, hi: f64| {
            let a = if lo == 0.0 { t.limit_at_zero() } else { t.value(lo) };
            let b = if hi.is_infinite() { t.limit_at_infinity() } else { t.value(hi) };
            a.max(b) > k
        };
        if let Some(t) = &self.left_tail {
            if over(t, 0.0, self.first_break()) {
                return Err(Error::Unsupported("truncation of a tail above the level".into()));
            }
        }
        if let Some(t) = &self.right_tail {
            if over(t, self.last_break(), f64::INFINITY) {
                return Err(Error::Unsupported("truncation of a tail above the level".into()));
            }
        }
        let mut g = self.clone();
        g.values.iter_mut().for_each(|v| *v = v.min(k));
        g.extended = g.values.iter().any(|v| v.is_infinite());
        Ok(g)
    }

    /// `f * χ_(lo,hi)`. Tail portions that no longer touch 0 or infinity are
    /// replaced by cells carrying their exact averages.
    pub fn restrict(&self, lo: f64, hi: f64) -> Self {
        let mut br: Vec<f64> = Vec::new();
        let mut vals: Vec<f64> = Vec::new();
        let mut left = None;
        let mut right = None;
        let push_cell = |br: &mut Vec<f64>, vals: &mut Vec<f64>, a: f64, b: f64, v: f64| {
            if br.is_empty() {
                br.push(a);
            } else if *br.last().unwrap() < a {
                vals.push(0.0);
                br.push(a);
            }
            vals.push(v);
            br.push(b);
        };
        for p in self.pieces() {
            let Some(c) = p.clip(lo, hi) else { continue };
            match c {
                Piece::Cell { lo: a, hi: b, v } => push_cell(&mut br, &mut vals, a, b, v),
                Piece::Tail { lo: a, hi: b, t } => {
                    if a == 0.0 {
                        left = Some((t, b));
                    } else if b.is_infinite() {
                        right = Some((t, a));
                    } else {
                        let (tb, tv) = discretize_tail(&t, a, b, 40.0);
                        for (w, v) in tb.windows(2).zip(tv) {
                            push_cell(&mut br, &mut vals, w[0], w[1], v);
                        }
                    }
                }
            }
        }
        if let Some((_, b)) = left {
            if br.is_empty() {
                br.push(b);
            }
        }
        if let Some((_, a)) = right {
            if br.is_empty() {
                br.push(a);
            } else if *br.last().unwrap() < a {
                vals.push(0.0);
                br.push(a);
            }
        }
        if br.is_empty() {
            return GridFn::zero();
        }
        GridFn {
            breakpoints: br,
            values: vals.clone(),
            left_tail: left.map(|x| x.0),
            right_tail: right.map(|x| x.0),
            extended: vals.iter().any(|v| v.is_infinite()),
        }
    }

    /// Breakpoints of `self` merged with `extra`.
    fn refined(&self, extra: &[f64]) -> Vec<f64> {
        let mut all: Vec<f64> = self.breakpoints.iter().chain(extra.iter()).cloned().collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        all.dedup();
        all
    }

    /// Pointwise sum. Tails on the same side must share their shape and
    /// domain, or be absent in one of the summands.
    pub fn add(&self, other: &GridFn) -> Result<Self> {
        let combine = |a: Option<TailSpec>, b: Option<TailSpec>, same_domain: bool| -> Result<Option<TailSpec>> {
            match (a, b) {
                (None, None) => Ok(None),
                (Some(x), Some(y)) => {
                    let same = x.power == y.power
                        && x.log_power == y.log_power
                        && x.shift == y.shift
                        && x.scale == y.scale;
                    if !same || !same_domain {
                        return Err(Error::Unsupported("sum of tails with different shapes".into()));
                    }
                    Ok(Some(TailSpec { coef: x.coef + y.coef, offset: x.offset + y.offset, ..x }))
                }
                _ => Err(Error::Unsupported("sum of a tail with a step region".into())),
            }
        };
        let (lt, rt) = {
            let left = match (self.left_tail, other.left_tail) {
                (None, None) => None,
                (a, b) => combine(a, b, self.first_break() == other.first_break())?,
            };
            let right = match (self.right_tail, other.right_tail) {
                (None, None) => None,
                (a, b) => combine(a, b, self.last_break() == other.last_break())?,
            };
            (left, right)
        };
        let br = self.refined(&other.breakpoints);
        let br: Vec<f64> = br
            .into_iter()
            .filter(|b| {
                (lt.is_none() || *b >= self.first_break()) && (rt.is_none() || *b <= self.last_break())
            })
            .collect();
        let vals: Vec<f64> = br
            .windows(2)
            .map(|w| {
                let m = 0.5 * (w[0] + w[1]);
                self.eval(m) + other.eval(m)
            })
            .collect();
        GridFn::build(br, vals.clone(), lt, rt, vals.iter().any(|v| v.is_infinite()))
    }

    /// True when the function is non-increasing on `(0, inf)`.
    pub fn is_nonincreasing(&self) -> bool {
        let mut prev = f64::INFINITY;
        for p in self.pieces() {
            let (a, b) = match p {
                Piece::Cell { v, .. } => (v, v),
                Piece::Tail { lo, hi, t } => {
                    if t.monotonicity(lo, hi) != Monotone::NonIncreasing {
                        return false;
                    }
                    let a = if lo == 0.0 { t.limit_at_zero() } else { t.value(lo) };
                    let b = if hi.is_infinite() { t.limit_at_infinity() } else { t.value(hi) };
                    (a, b)
                }
            };
            if a > prev * (1.0 + 1e-12) {
                return false;
            }
            prev = b;
        }
        if self.left_tail.is_none() && self.sup() > 0.0 {
            return false;
        }
        true
    }
}
