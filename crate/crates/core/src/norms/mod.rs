//! Rearrangement-invariant function norms on `(0, L)` with `L ∈ {1, inf}`.

mod admissible;
mod associate;
mod eval;
mod weight;

pub use admissible::{check_lambda_admissible, AdmissibilityVerdict};
pub use associate::{associate_lower_bound, associate_norm, associate_space, hoelder_check, AssociateValue, HoelderOutcome, TrialBudget};
pub use eval::{luxemburg, pairing, weighted_lq};
pub use weight::{segment_integral, Weight, WeightSegment};

use crate::error::{Error, Result};
use crate::funcrep::{rearrange, GridFn};
use crate::young::YoungFn;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SpaceSpec {
    Lebesgue {
        #[serde(with = "crate::extf64")]
        p: f64,
    },
    Lorentz {
        #[serde(with = "crate::extf64")]
        p: f64,
        #[serde(with = "crate::extf64")]
        q: f64,
    },
    Orlicz {
        young: YoungFn,
    },
    LambdaQ {
        #[serde(with = "crate::extf64")]
        q: f64,
        weight: Weight,
    },
    LambdaA {
        young: YoungFn,
        weight: Weight,
    },
    Intersect {
        left: Box<SpaceSpec>,
        right: Box<SpaceSpec>,
    },
    /// The norm `‖f‖ = ‖f*‖_{Z(0,1)}` built from a base space, `n` and `m`.
    SobolevLocal {
        base: Box<SpaceSpec>,
        n: u32,
        m: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interval {
    Unit,
    HalfLine,
}

impl Interval {
    pub fn end(self) -> f64 {
        match self {
            Interval::Unit => 1.0,
            Interval::HalfLine => f64::INFINITY,
        }
    }
}

/// Lorentz index pairs that give a rearrangement-invariant norm up to equivalence.
pub fn lorentz_admissible(p: f64, q: f64) -> bool {
    (p == 1.0 && q == 1.0) || (p > 1.0 && p.is_finite() && q >= 1.0) || (p.is_infinite() && q.is_infinite())
}

fn weight_cache() -> &'static Mutex<HashMap<String, bool>> {
    static CACHE: OnceLock<Mutex<HashMap<String, bool>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn lambda_ok(q: f64, w: &Weight) -> bool {
    let key = format!("{q}|{}", serde_json::to_string(w).unwrap_or_default());
    if let Some(v) = weight_cache().lock().unwrap().get(&key) {
        return *v;
    }
    let v = check_lambda_admissible(q, w, w.end()).holds;
    weight_cache().lock().unwrap().insert(key, v);
    v
}

impl SpaceSpec {
    pub fn lebesgue(p: f64) -> Self {
        SpaceSpec::Lebesgue { p }
    }
    pub fn linf() -> Self {
        SpaceSpec::Lebesgue { p: f64::INFINITY }
    }
    pub fn lorentz(p: f64, q: f64) -> Self {
        SpaceSpec::Lorentz { p, q }
    }
    pub fn orlicz(young: YoungFn) -> Self {
        SpaceSpec::Orlicz { young }
    }
    pub fn intersect(left: SpaceSpec, right: SpaceSpec) -> Self {
        SpaceSpec::Intersect { left: Box::new(left), right: Box::new(right) }
    }

    /// Checks that the functional is equivalent to a rearrangement-invariant norm.
    pub fn check_admissible(&self) -> Result<()> {
        match self {
            SpaceSpec::Lebesgue { p } => {
                if *p >= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Inadmissible(format!("L^p needs p >= 1, got {p}")))
                }
            }
            SpaceSpec::Lorentz { p, q } => {
                if lorentz_admissible(*p, *q) {
                    Ok(())
                } else {
                    Err(Error::Inadmissible(format!(
                        "L^(p,q) with p = {p}, q = {q} is not equivalent to a rearrangement-invariant norm"
                    )))
                }
            }
            SpaceSpec::Orlicz { .. } => Ok(()),
            SpaceSpec::LambdaQ { q, weight } => {
                if lambda_ok(*q, weight) {
                    Ok(())
                } else {
                    Err(Error::Inadmissible(format!("weight fails the Lambda^{q} condition")))
                }
            }
            SpaceSpec::LambdaA { weight, .. } => {
                if weight.increase_ratio(weight.end()).is_finite() {
                    Ok(())
                } else {
                    Err(Error::Inadmissible("Lambda^A weight is not equivalent to a non-increasing function".into()))
                }
            }
            SpaceSpec::Intersect { left, right } => {
                left.check_admissible()?;
                right.check_admissible()
            }
            SpaceSpec::SobolevLocal { base, n, m } => {
                if *n < 2 || *m < 1 {
                    return Err(Error::Precondition("n >= 2 and m >= 1 are required".into()));
                }
                base.check_admissible()
            }
        }
    }

    /// Largest interval end on which the space is defined.
    pub fn domain_end(&self) -> f64 {
        match self {
            SpaceSpec::LambdaQ { weight, .. } | SpaceSpec::LambdaA { weight, .. } => weight.end(),
            SpaceSpec::Intersect { left, right } => left.domain_end().min(right.domain_end()),
            _ => f64::INFINITY,
        }
    }
}

/// `‖f‖_X` on `(0, inf)`.
pub fn norm(space: &SpaceSpec, f: &GridFn) -> Result<f64> {
    norm_on(space, f, Interval::HalfLine)
}

/// `‖f‖_{X(0,L)}`: `f` is restricted to the interval and rearranged there.
pub fn norm_on(space: &SpaceSpec, f: &GridFn, iv: Interval) -> Result<f64> {
    space.check_admissible()?;
    let l = iv.end();
    let g = if l.is_finite() { f.restrict(0.0, l) } else { f.clone() };
    let fs = rearrange(&g)?;
    norm_rearranged(space, &fs, l)
}

/// The norm read off a function that is already non-increasing on `(0, l)`.
/// No admissibility check is made.
pub fn norm_rearranged(space: &SpaceSpec, fs: &GridFn, l: f64) -> Result<f64> {
    match space {
        SpaceSpec::Lebesgue { p } => Ok(weighted_lq(fs, &Weight::unit(), *p, l)),
        SpaceSpec::Lorentz { p, q } => {
            if p.is_infinite() {
                return Ok(weighted_lq(fs, &Weight::unit(), f64::INFINITY, l));
            }
            Ok(weighted_lq(fs, &Weight::power(1.0 / p - 1.0 / q), *q, l))
        }
        SpaceSpec::LambdaQ { q, weight } => {
            if !weight.covers(l) {
                return Err(Error::Inadmissible("weight does not cover the interval".into()));
            }
            Ok(weighted_lq(fs, weight, *q, l))
        }
        SpaceSpec::Orlicz { young } => luxemburg(fs, &Weight::unit(), young, l),
        SpaceSpec::LambdaA { young, weight } => {
            if !weight.covers(l) {
                return Err(Error::Inadmissible("weight does not cover the interval".into()));
            }
            luxemburg(fs, weight, young, l)
        }
        SpaceSpec::Intersect { left, right } => Ok(norm_rearranged(left, fs, l)? + norm_rearranged(right, fs, l)?),
        SpaceSpec::SobolevLocal { base, n, m } => Ok(crate::optimal::xm_norm(base, *n, *m, fs)?.value),
    }
}

/// `φ_X(s) = ‖χ_(0,s)‖_X`.
pub fn fundamental_function(space: &SpaceSpec, s: f64) -> Result<f64> {
    norm(space, &GridFn::indicator(s, 1.0))
}

/// `‖f̃‖_{X(0,inf)}` for `f` supported in `(0, 1)`, with `f̃` its zero extension.
pub fn localized_norm(space: &SpaceSpec, f: &GridFn) -> Result<f64> {
    for p in f.pieces() {
        if let Some(c) = p.clip(1.0, f64::INFINITY) {
            let positive = match c {
                crate::funcrep::Piece::Cell { v, .. } => v > 0.0,
                crate::funcrep::Piece::Tail { t, .. } => t.value(c.lo()) > 0.0 || t.limit_at_infinity() > 0.0,
            };
            if positive {
                return Err(Error::SupportViolation);
            }
        }
    }
    norm(space, f)
}

#[cfg(test)]
mod tests;
