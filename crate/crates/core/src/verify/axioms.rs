//! Batch checks of the function-norm axioms on random step functions.

use super::with_thread_cap;
use crate::error::Result;
use crate::funcrep::{rearrange, GridFn};
use crate::norms::{fundamental_function, norm, SpaceSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const HOMOGENEITY_TOL: f64 = 1e-10;
const TOL: f64 = 1e-9;
const REARRANGE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub trials: usize,
    pub passed: usize,
    /// Smallest relative slack seen; negative values are violations.
    pub worst_slack: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub space: SpaceSpec,
    pub seed: u64,
    pub trials: usize,
    pub results: Vec<AxiomResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.passed == r.trials)
    }
}

const AXIOMS: [(&str, f64); 7] = [
    ("P1 homogeneity", HOMOGENEITY_TOL),
    ("P1 triangle", TOL),
    ("P2 lattice", TOL),
    ("P3 monotone limits", TOL),
    ("P4 finite indicators", 0.0),
    ("P5 local integrability", TOL),
    ("P6 rearrangement invariance", REARRANGE_TOL),
];

/// A random step function, not necessarily monotone, with some zero cells.
pub(crate) fn random_steps(rng: &mut ChaCha8Rng) -> GridFn {
    let k = rng.gen_range(1..=8);
    let mut br: Vec<f64> = (0..=k).map(|_| 10f64.powf(rng.gen_range(-3.0..3.0))).collect();
    br.sort_by(|a, b| a.partial_cmp(b).unwrap());
    br.dedup();
    if br.len() < 2 {
        br.push(br[0] * 3.0);
    }
    let vals = (1..br.len())
        .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(-2.0..2.0f64).exp() })
        .collect();
    GridFn::steps(br, vals).expect("valid steps")
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Slack of each axiom on one random triple, NaN when not applicable.
fn trial(space: &SpaceSpec, rng: &mut ChaCha8Rng) -> Result<[f64; 7]> {
    let f = random_steps(rng);
    let g = random_steps(rng);
    let h = random_steps(rng);
    let nf = norm(space, &f)?;
    let ng = norm(space, &g)?;
    let mut out = [f64::NAN; 7];

    let lambda = 10f64.powf(rng.gen_range(-3.0..3.0));
    out[0] = -rel(norm(space, &f.scaled(lambda))?, lambda * nf);

    let nsum = norm(space, &f.add(&g)?)?;
    out[1] = (nf + ng - nsum) / (nf + ng);

    let bigger = f.add(&h)?;
    let nb = norm(space, &bigger)?;
    out[2] = if nb > 0.0 { (nb - nf) / nb } else { 0.0 };

    if nf > 0.0 {
        let steps = 6;
        let (top, end) = (f.sup(), f.last_break());
        let mut prev = 0.0;
        let mut worst = f64::INFINITY;
        for j in 1..=steps {
            let t = j as f64 / steps as f64;
            let fk = f.min_const(top * t)?.restrict(0.0, end * t.powi(2).max(1e-3));
            let fk = if j == steps { f.clone() } else { fk };
            let v = norm(space, &fk)?;
            worst = worst.min((v - prev) / nf);
            prev = v;
        }
        out[3] = worst.min(-rel(prev, nf));
    }

    let b = 10f64.powf(rng.gen_range(-4.0..4.0));
    let phi = fundamental_function(space, b)?;
    out[4] = if phi.is_finite() && phi > 0.0 { 0.0 } else { -1.0 };

    let lo = 10f64.powf(rng.gen_range(-3.0..2.0));
    let hi = lo * 10f64.powf(rng.gen_range(0.1..3.0));
    let len = hi - lo;
    let c = len / fundamental_function(space, len)?;
    let lhs = f.integral(lo, hi);
    let rhs = c * nf;
    out[5] = if rhs > 0.0 { (rhs - lhs) / rhs } else if lhs == 0.0 { 0.0 } else { -1.0 };

    out[6] = -rel(norm(space, &rearrange(&f)?)?, nf);
    Ok(out)
}

/// (P1)–(P6) on `trials` random triples.
pub fn axiom_suite_with(space: &SpaceSpec, seed: u64, trials: usize) -> Result<SuiteReport> {
    space.check_admissible()?;
    let rows: Vec<Result<[f64; 7]>> = with_thread_cap(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                trial(space, &mut rng)
            })
            .collect()
    });
    let rows: Vec<[f64; 7]> = rows.into_iter().collect::<Result<_>>()?;
    let results = AXIOMS
        .iter()
        .enumerate()
        .map(|(k, (name, tol))| {
            let vals: Vec<f64> = rows.iter().map(|r| r[k]).filter(|v| !v.is_nan()).collect();
            AxiomResult {
                axiom: name.to_string(),
                trials: vals.len(),
                passed: vals.iter().filter(|&&v| v >= -tol).count(),
                worst_slack: vals.iter().cloned().fold(f64::INFINITY, f64::min),
                tolerance: *tol,
            }
        })
        .collect();
    Ok(SuiteReport { space: space.clone(), seed, trials, results })
}

pub fn axiom_suite(space: &SpaceSpec, seed: u64) -> Result<SuiteReport> {
    axiom_suite_with(space, seed, 200)
}
