//! Optimal rearrangement-invariant targets for `W^m X(ℝⁿ)`.

mod z;
mod zygmund;

pub use z::{xm_norm, z_norm, z_norm_generic, ZMethod, ZValue};
pub use zygmund::{zygmund_table, ZygmundE, ZygmundRow};

use crate::error::{Error, Result};
use crate::funcrep::GridFn;
use crate::norms::{associate_lower_bound, SpaceSpec, TrialBudget, Weight, WeightSegment};
use crate::young::{a_hat_construct, converges_at_infinity, orlicz_sobolev_conjugate, Regime, YoungFn};
use serde::{Deserialize, Serialize};
use z::{check_nm, same};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    Generic,
    LorentzClosedForm,
    OrliczOrliczTarget,
    OrliczRiTarget,
    Supercritical,
    ZygmundTable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetResult {
    pub space: SpaceSpec,
    pub construction: Construction,
    pub n: u32,
    pub m: u32,
    pub input: SpaceSpec,
    /// Normalizations applied to the input, e.g. a replaced near-zero regime.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Human-readable derivation steps.
    pub trace: Vec<String>,
}

/// Whether `s^{-1+m/n} χ_(0,1)` lies in `X'`, i.e. the local part of the
/// optimal target is `L^∞`.
pub fn supercritical_check(x: &SpaceSpec, n: u32, m: u32) -> Result<bool> {
    check_nm(n, m)?;
    if m >= n {
        return Ok(true);
    }
    let r = n as f64 / m as f64;
    let k = m as f64 / (n - m) as f64;
    match x {
        SpaceSpec::Lebesgue { p } => Ok(*p > r && !same(*p, r)),
        SpaceSpec::Lorentz { p, q } => Ok((*p > r && !same(*p, r)) || (same(*p, r) && *q == 1.0)),
        SpaceSpec::Orlicz { young } => Ok(converges_at_infinity(&young.near_infinity(), k)),
        SpaceSpec::Intersect { left, right } => {
            // Locally the intersection is the smaller of the two spaces.
            let l = supercritical_check(left, n, m);
            let rr = supercritical_check(right, n, m);
            match (l, rr) {
                (Ok(true), _) | (_, Ok(true)) => Ok(true),
                (Ok(false), Ok(false)) => Ok(false),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        }
        _ => numeric_supercritical(x, n, m),
    }
}

/// Lower bounds of `‖s^{-1+m/n} χ_(ε,1)‖_{X'}` as `ε -> 0`.
fn numeric_supercritical(x: &SpaceSpec, n: u32, m: u32) -> Result<bool> {
    let e = -1.0 + m as f64 / n as f64;
    let mut vals = Vec::new();
    for eps in [1e-4f64, 1e-8] {
        let cells = (-eps.log10() * 10.0).round() as usize;
        let pts: Vec<f64> = (0..=cells).map(|i| eps * 10f64.powf(i as f64 / 10.0)).collect();
        let vals_h: Vec<f64> = pts.windows(2).map(|w| (w[0] * w[1]).sqrt().powf(e)).collect();
        let g = GridFn::steps(pts, vals_h)?;
        vals.push(associate_lower_bound(x, &g, TrialBudget { count: 40, seed: 7 })?);
    }
    let growth = vals[1] / vals[0];
    if !vals[1].is_finite() || growth > 1.5 {
        Ok(false)
    } else if growth < 1.02 {
        Ok(true)
    } else {
        Err(Error::Inconclusive(format!("associate lower bound grew by a factor {growth:.3} over 4 decades")))
    }
}

fn result(space: SpaceSpec, construction: Construction, x: &SpaceSpec, n: u32, m: u32, trace: Vec<String>) -> TargetResult {
    TargetResult { space, construction, n, m, input: x.clone(), notes: Vec::new(), trace }
}

fn lorentz_target(p: f64, q: f64, n: u32, m: u32, x: &SpaceSpec, sup: bool) -> TargetResult {
    let theta = m as f64 / n as f64;
    let r = 1.0 / theta;
    if sup {
        let w = Weight::split_at_one(
            WeightSegment::new(0.0, 1.0, 1.0, 0.0, 0.0),
            WeightSegment::new(1.0, f64::INFINITY, 1.0, 1.0 / p - 1.0 / q, 0.0),
        );
        let e = if q.is_finite() { YoungFn::new(Regime::power(q), Regime::InfiniteCap { t0: 1.0 }).ok() } else { None };
        if let Some(e) = e {
            let sp = SpaceSpec::LambdaA { young: e, weight: w };
            if sp.check_admissible().is_ok() {
                return result(
                    sp,
                    Construction::LorentzClosedForm,
                    x,
                    n,
                    m,
                    vec!["supercritical Lorentz case: Lambda^E(w) with E = t^q capped at 1".into()],
                );
            }
        }
        return result(
            SpaceSpec::intersect(SpaceSpec::linf(), x.clone()),
            Construction::Supercritical,
            x,
            n,
            m,
            vec!["supercritical Lorentz case: weight increases beyond 1, using the equivalent L^inf & X".into()],
        );
    }
    if p < r && !same(p, r) {
        let w = Weight::split_at_one(
            WeightSegment::new(0.0, 1.0, 1.0, 1.0 / p - 1.0 / q - theta, 0.0),
            WeightSegment::new(1.0, f64::INFINITY, 1.0, 1.0 / p - 1.0 / q, 0.0),
        );
        return result(
            SpaceSpec::LambdaQ { q, weight: w },
            Construction::LorentzClosedForm,
            x,
            n,
            m,
            vec![format!("subcritical Lorentz case p = {p} < n/m = {r}")],
        );
    }
    let w = Weight::split_at_one(
        WeightSegment::new(0.0, 1.0, 1.0, -1.0 / q, -1.0),
        WeightSegment::new(1.0, f64::INFINITY, 1.0, theta - 1.0 / q, 0.0),
    );
    result(
        SpaceSpec::LambdaQ { q, weight: w },
        Construction::LorentzClosedForm,
        x,
        n,
        m,
        vec![format!("limiting Lorentz case p = n/m = {r}, q = {q}")],
    )
}

/// The optimal rearrangement-invariant target of `W^m X(ℝⁿ)`.
pub fn optimal_target(x: &SpaceSpec, n: u32, m: u32) -> Result<TargetResult> {
    check_nm(n, m)?;
    x.check_admissible()?;
    let sup = supercritical_check(x, n, m);
    let r = n as f64 / m as f64;
    match x {
        SpaceSpec::Lorentz { p, q } => return Ok(lorentz_target(*p, *q, n, m, x, matches!(sup, Ok(true)))),
        SpaceSpec::Lebesgue { p } if !matches!(sup, Ok(true)) => {
            if *p < r && !same(*p, r) {
                let s = n as f64 * p / (n as f64 - m as f64 * p);
                let mut t = result(
                    SpaceSpec::intersect(SpaceSpec::lorentz(s, *p), x.clone()),
                    Construction::LorentzClosedForm,
                    x,
                    n,
                    m,
                    vec![format!("subcritical Lebesgue case p = {p} < n/m = {r}: L^(np/(n-mp), p) & L^p")],
                );
                t.trace.push(format!("np/(n-mp) = {s}"));
                return Ok(t);
            }
            return Ok(lorentz_target(*p, *p, n, m, x, false));
        }
        _ => {}
    }
    if matches!(sup, Ok(true)) {
        return Ok(result(
            SpaceSpec::intersect(SpaceSpec::linf(), x.clone()),
            Construction::Supercritical,
            x,
            n,
            m,
            vec![if m >= n {
                format!("m = {m} >= n = {n}: always supercritical")
            } else {
                "s^(-1+m/n) chi_(0,1) lies in X': local target is L^inf".into()
            }],
        ));
    }
    if let SpaceSpec::Orlicz { young } = x {
        let ahat = a_hat_construct(young, n, m)?;
        let e = YoungFn::new(young.near_zero(), ahat.young.near_infinity())?;
        let theta = m as f64 / n as f64;
        let v = Weight::split_at_one(
            WeightSegment::new(0.0, 1.0, 1.0, -theta, 0.0),
            WeightSegment::new(1.0, f64::INFINITY, 1.0, 0.0, 0.0),
        );
        let mut t = result(
            SpaceSpec::LambdaA { young: e, weight: v },
            Construction::OrliczRiTarget,
            x,
            n,
            m,
            vec![
                "divergent case: Lambda^E(v), E = A near 0 and A-hat near infinity".into(),
                format!("A-hat near infinity: {}", ahat.young.near_infinity().describe()),
            ],
        );
        t.notes.extend(young.notes().iter().cloned());
        t.notes.extend(ahat.notes);
        return Ok(t);
    }
    let mut trace = vec!["no closed form: generic X^m & X".to_string()];
    if let Err(e) = sup {
        trace.push(format!("supercritical test: {e}"));
    }
    Ok(result(
        SpaceSpec::intersect(SpaceSpec::SobolevLocal { base: Box::new(x.clone()), n, m }, x.clone()),
        Construction::Generic,
        x,
        n,
        m,
        trace,
    ))
}

/// The optimal Orlicz target: `A` near 0 and `A_{n/m}` near infinity.
pub fn optimal_orlicz_target(a: &YoungFn, n: u32, m: u32) -> Result<YoungFn> {
    check_nm(n, m)?;
    if m >= n {
        let mut out = YoungFn::new(a.near_zero(), Regime::InfiniteCap { t0: 1.0 })?;
        out.push_note("m >= n: target is L^inf & L^A");
        return Ok(out);
    }
    let c = orlicz_sobolev_conjugate(a, n, m)?;
    let mut out = YoungFn::new(a.near_zero(), c.near_infinity())?;
    for note in c.notes() {
        out.push_note(note.clone());
    }
    Ok(out)
}

/// `H` equal to `G` near zero and `F` near infinity, so that
/// `‖f*‖_{L^F(0,1)} + ‖f*‖_{L^G(0,∞)}` is equivalent to `‖f*‖_{L^H(0,∞)}`.
pub fn splice_intersection(f: &YoungFn, g: &YoungFn) -> Result<YoungFn> {
    YoungFn::new(g.near_zero(), f.near_infinity())
}

/// Target of the non-homogeneous first-order space `W¹(X, Y)`: the local
/// part built from `Y`, intersected with `X`.
pub fn nonhomogeneous_first_order_target(x: &SpaceSpec, y: &SpaceSpec, n: u32) -> Result<TargetResult> {
    let t = optimal_target(y, n, 1)?;
    let local = match &t.space {
        SpaceSpec::Intersect { left, right } if **right == *y => (**left).clone(),
        other => other.clone(),
    };
    let mut trace = t.trace.clone();
    trace.push("intersected the local part with X".into());
    Ok(TargetResult {
        space: SpaceSpec::intersect(local, x.clone()),
        construction: t.construction,
        n,
        m: 1,
        input: x.clone(),
        notes: t.notes,
        trace,
    })
}

#[cfg(test)]
mod tests;
