use super::{Regime, YoungFn};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeScope {
    NearZero,
    NearInfinity,
    Global,
}

/// Whether `B(t) <= A(c t)` holds in a regime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationVerdict {
    pub holds: bool,
    pub scope: RegimeScope,
    /// Smallest sampled constant that works, when the verdict holds.
    #[serde(with = "crate::extf64::opt")]
    pub witness_c: Option<f64>,
    /// Points where the required constant keeps growing, when it fails.
    pub witness_t: Vec<f64>,
    /// Whether the numerical scan agrees with the analytic verdict; `None`
    /// when the scan was inconclusive.
    pub numeric_agrees: Option<bool>,
}

const C_BOUND: f64 = 1048576.0; // 2^20
const PER_DECADE: usize = 64;
const DECADES: usize = 6;

fn lex_le(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > 1e-12 {
            return x < y;
        }
    }
    true
}

fn analytic_inf(a: &Regime, b: &Regime) -> bool {
    match (a, b) {
        (Regime::InfiniteCap { .. }, _) => true,
        (_, Regime::InfiniteCap { .. }) => false,
        (Regime::PowerLog { p: pa, alpha: aa, gamma: ga }, Regime::PowerLog { p: pb, alpha: ab, gamma: gb }) => {
            lex_le(&[*pb, *ab, *gb], &[*pa, *aa, *ga])
        }
        (Regime::ExpPower { beta: x }, Regime::ExpPower { beta: y })
        | (Regime::DoubleExpPower { beta: x }, Regime::DoubleExpPower { beta: y }) => y <= x,
        _ => b.growth_rank() < a.growth_rank(),
    }
}

fn analytic_zero(a: &Regime, b: &Regime) -> bool {
    match (a, b) {
        (Regime::PowerLog { p: pa, alpha: aa, .. }, Regime::PowerLog { p: pb, alpha: ab, .. }) => {
            lex_le(&[-pb, *ab], &[-pa, *aa])
        }
        _ => false,
    }
}

/// Required constant `c(t) = A^{-1}(B(t)) / t`.
fn required_c(a: &YoungFn, b: &YoungFn, t: f64) -> Option<f64> {
    let lb = b.ln_eval_log(t.ln());
    if !lb.is_finite() {
        return if lb == f64::NEG_INFINITY { Some(0.0) } else { None };
    }
    a.generalized_inverse_ln(lb).ok().map(|x| x / t)
}

struct Scan {
    c_max: f64,
    growth: f64,
    rising: bool,
    points: Vec<f64>,
}

fn scan(a: &YoungFn, b: &YoungFn, near_zero: bool) -> Option<Scan> {
    let n = PER_DECADE * DECADES;
    let mut cs = Vec::with_capacity(n + 1);
    let mut ts = Vec::with_capacity(n + 1);
    for i in 0..=n {
        // Six decades away from the splice region [0.1, 10].
        let e = if near_zero { -2.0 - i as f64 / PER_DECADE as f64 } else { 2.0 + i as f64 / PER_DECADE as f64 };
        let t = 10f64.powf(e);
        if let Some(c) = required_c(a, b, t) {
            cs.push(c);
            ts.push(t);
        }
    }
    if cs.len() < n / 2 {
        return None;
    }
    let q = cs.len() / 4;
    let head = cs[..q].iter().cloned().fold(0.0, f64::max);
    let tail = cs[cs.len() - q..].iter().cloned().fold(0.0, f64::max);
    let growth = if head > 0.0 { tail / head } else if tail > 0.0 { f64::INFINITY } else { 1.0 };
    let half = &cs[cs.len() / 2..];
    let rising = half.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    let c_max = cs.iter().cloned().fold(0.0, f64::max);
    let points = ts[ts.len() - q..].iter().step_by((q / 8).max(1)).cloned().collect();
    Some(Scan { c_max, growth, rising, points })
}

fn numeric_one(a: &YoungFn, b: &YoungFn, near_zero: bool) -> Result<(bool, f64, Vec<f64>)> {
    let s = scan(a, b, near_zero).ok_or_else(|| Error::Inconclusive("too few finite samples".into()))?;
    if s.c_max > C_BOUND || (s.growth > 1.1 && s.rising) {
        return Ok((false, s.c_max, s.points));
    }
    if s.growth <= 1.02 {
        return Ok((true, s.c_max, vec![]));
    }
    Err(Error::Inconclusive(format!("required constant grows by {:.3} without a clear trend", s.growth)))
}

/// Numerical verdict from the bounded-constant scan with growth detection.
pub fn dominates_numeric(a: &YoungFn, b: &YoungFn, scope: RegimeScope) -> Result<DominationVerdict> {
    let parts: Vec<bool> = match scope {
        RegimeScope::NearZero => vec![true],
        RegimeScope::NearInfinity => vec![false],
        RegimeScope::Global => vec![true, false],
    };
    let mut holds = true;
    let mut c = 0.0f64;
    let mut wt = Vec::new();
    for nz in parts {
        let (h, cm, pts) = numeric_one(a, b, nz)?;
        holds &= h;
        c = c.max(cm);
        if !h {
            wt = pts;
        }
    }
    Ok(DominationVerdict {
        holds,
        scope,
        witness_c: if holds { Some(c.max(f64::MIN_POSITIVE)) } else { None },
        witness_t: wt,
        numeric_agrees: Some(true),
    })
}

/// Does `A` dominate `B` (`B(t) <= A(ct)`) in the given regime? The verdict
/// comes from the regime descriptors; a numerical scan is recorded as a
/// cross-check.
pub fn dominates(a: &YoungFn, b: &YoungFn, scope: RegimeScope) -> Result<DominationVerdict> {
    let z = analytic_zero(&a.near_zero(), &b.near_zero());
    let i = analytic_inf(&a.near_infinity(), &b.near_infinity());
    let holds = match scope {
        RegimeScope::NearZero => z,
        RegimeScope::NearInfinity => i,
        RegimeScope::Global => z && i,
    };
    let num = dominates_numeric(a, b, scope);
    let (agrees, c, wt) = match &num {
        Ok(v) => (Some(v.holds == holds), v.witness_c, v.witness_t.clone()),
        Err(_) => (None, None, vec![]),
    };
    let witness_t = if holds {
        vec![]
    } else if !wt.is_empty() {
        wt
    } else {
        let base: f64 = if scope == RegimeScope::NearZero { 1e-2 } else { 1e2 };
        let step: f64 = if scope == RegimeScope::NearZero { 1e-1 } else { 10.0 };
        (0..6).map(|k| base * step.powi(k)).collect()
    };
    Ok(DominationVerdict {
        holds,
        scope,
        witness_c: if holds { c.or(Some(1.0)) } else { None },
        witness_t,
        numeric_agrees: agrees,
    })
}

/// Mutual domination.
pub fn equivalent(a: &YoungFn, b: &YoungFn, scope: RegimeScope) -> Result<bool> {
    Ok(dominates(a, b, scope)?.holds && dominates(b, a, scope)?.holds)
}
