//! Associate norms: analytic for Lebesgue and Lorentz spaces, certified
//! lower bounds from trial families otherwise.

use super::eval::pairing;
use super::{norm, norm_rearranged, SpaceSpec};
use crate::error::Result;
use crate::funcrep::{rearrange, GridFn};
use crate::tail::TailSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialBudget {
    /// Number of random refinement steps after the structured trials.
    pub count: usize,
    pub seed: u64,
}

impl Default for TrialBudget {
    fn default() -> Self {
        TrialBudget { count: 200, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssociateValue {
    #[serde(with = "crate::extf64")]
    pub value: f64,
    /// True when `value` is only a lower bound for the associate norm.
    pub lower_bound: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoelderOutcome {
    pub holds: bool,
    pub ratio: f64,
}

pub(crate) fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// The associate space when it has a closed form.
pub fn associate_space(space: &SpaceSpec) -> Option<SpaceSpec> {
    match *space {
        SpaceSpec::Lebesgue { p } => Some(SpaceSpec::Lebesgue { p: conjugate(p) }),
        SpaceSpec::Lorentz { p, q } => {
            if p == q {
                Some(SpaceSpec::Lebesgue { p: conjugate(p) })
            } else {
                Some(SpaceSpec::Lorentz { p: conjugate(p), q: conjugate(q) })
            }
        }
        _ => None,
    }
}

/// `‖g‖_{X'}`. Lorentz spaces use `L^{p',q'}`, which equals the associate
/// norm up to a constant and satisfies Hölder's inequality with constant 1.
pub fn associate_norm(space: &SpaceSpec, g: &GridFn, budget: TrialBudget) -> Result<AssociateValue> {
    space.check_admissible()?;
    if let Some(dual) = associate_space(space) {
        return Ok(AssociateValue { value: norm(&dual, g)?, lower_bound: false });
    }
    Ok(AssociateValue { value: associate_lower_bound(space, g, budget)?, lower_bound: true })
}

fn layered(breaks: &[f64], c: &[f64]) -> Result<GridFn> {
    // Σ c_j χ_(0,b_j): constant c_0 + ... + c_{K-1} on (0, b_0).
    let k = breaks.len();
    let mut vals = vec![0.0; k.saturating_sub(1)];
    let mut acc = 0.0;
    for j in (1..k).rev() {
        acc += c[j];
        vals[j - 1] = acc;
    }
    let top = acc + c[0];
    GridFn::build(breaks.to_vec(), vals, Some(TailSpec::constant(top)), None, false)
}

fn ratio(space: &SpaceSpec, f: &GridFn, gs: &GridFn, l: f64) -> f64 {
    let num = pairing(f, gs);
    match norm_rearranged(space, f, l) {
        Ok(d) if d > 0.0 && d.is_finite() => num / d,
        _ => 0.0,
    }
}

/// Largest `∫ f g / ‖f‖_X` over non-increasing trial functions `f`:
/// indicators, power profiles of `g*`, and randomly refined layer sums.
pub fn associate_lower_bound(space: &SpaceSpec, g: &GridFn, budget: TrialBudget) -> Result<f64> {
    let l = space.domain_end();
    let g = if l.is_finite() { g.restrict(0.0, l) } else { g.clone() };
    let gs = rearrange(&g)?;
    if gs.sup() == 0.0 {
        return Ok(0.0);
    }
    let lo_cut = gs.first_break().min(1.0) * 1e-8;
    let hi_cut = (gs.last_break().max(1.0) * 1e8).min(l);
    let d = gs.restrict(lo_cut, hi_cut);

    // Layer positions: jumps of the discretized g*, thinned to at most 48.
    let (db, dv) = (d.breakpoints(), d.values());
    let mut breaks: Vec<f64> = vec![db[0]];
    for i in 1..db.len() {
        if i == db.len() - 1 || dv[i] != dv[i - 1] {
            breaks.push(db[i]);
        }
    }
    if breaks.len() > 48 {
        let step = breaks.len() as f64 / 48.0;
        let mut t: Vec<f64> = (0..48).map(|i| breaks[(i as f64 * step) as usize]).collect();
        t.push(*breaks.last().unwrap());
        t.dedup();
        breaks = t;
    }
    let k = breaks.len();
    let mut best = 0.0f64;
    let mut best_c = vec![0.0; k];

    for j in 0..k {
        let mut c = vec![0.0; k];
        c[j] = 1.0;
        let r = ratio(space, &layered(&breaks, &c)?, &gs, l);
        if r > best {
            best = r;
            best_c = c;
        }
    }
    // Profiles v^r s^{-γ} of the discretized g*.
    let mids: Vec<f64> = breaks.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
    let gv: Vec<f64> = mids.iter().map(|&s| gs.eval(s)).collect();
    for r in [0.25, 0.5, 1.0, 2.0, 4.0] {
        for gamma in [0.0, 0.2, 0.4, 0.6, 0.8] {
            let prof: Vec<f64> = gv.iter().zip(&mids).map(|(v, s)| v.powf(r) * s.powf(-gamma)).collect();
            let mut c = vec![0.0; k];
            for j in 0..k - 1 {
                let next = if j + 1 < k - 1 { prof[j + 1] } else { 0.0 };
                c[j + 1] = (prof[j] - next).max(0.0);
            }
            c[0] = 0.0;
            if c.iter().all(|x| *x == 0.0) || c.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let r = ratio(space, &layered(&breaks, &c)?, &gs, l);
            if r > best {
                best = r;
                best_c = c;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let scale = best_c.iter().cloned().fold(0.0, f64::max);
    for _ in 0..budget.count {
        let mut c = best_c.clone();
        let j = rng.gen_range(0..k);
        if rng.gen_bool(0.5) {
            c[j] *= (rng.gen_range(-1.0..1.0f64)).exp();
        } else {
            c[j] += scale * rng.gen_range(0.0..0.5);
        }
        let r = ratio(space, &layered(&breaks, &c)?, &gs, l);
        if r > best {
            best = r;
            best_c = c;
        }
    }
    Ok(best)
}

/// Evaluates `∫ f g <= ‖f‖_X ‖g‖_{X'}` with relative tolerance 1e-9.
pub fn hoelder_check(space: &SpaceSpec, f: &GridFn, g: &GridFn) -> Result<HoelderOutcome> {
    let lhs = pairing(f, g);
    let rhs = norm(space, f)? * associate_norm(space, g, TrialBudget::default())?.value;
    if lhs == 0.0 {
        return Ok(HoelderOutcome { holds: true, ratio: 0.0 });
    }
    let r = lhs / rhs;
    Ok(HoelderOutcome { holds: r <= 1.0 + 1e-9, ratio: r })
}
