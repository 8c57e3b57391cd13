//! Budgeted numerical checks of the one-dimensional inequalities behind the
//! Sobolev embeddings, attacks on candidate targets, and norm axiom suites.
//!
//! A `Holds` verdict only means that no trial function in the family broke
//! the inequality; it is falsifiable, not a proof.

mod axioms;
mod family;
mod hardy;

pub use axioms::{axiom_suite, axiom_suite_with, AxiomResult, SuiteReport};
pub use family::{critical_exponents, unit_ball_volume, FamilyKind, TrialFamily};
pub use hardy::{hardy_at, hardy_local};

use crate::error::{Error, Result};
use crate::funcrep::{rearrange, GridFn};
use crate::norms::{norm, SpaceSpec};
use crate::young::{dominates, RegimeScope, YoungFn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

pub const HOLDS_NOTE: &str = "budgeted verdict: no member of the trial family violated the inequality; this is not a proof";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Ratios above this count as blow-up.
    pub threshold: f64,
    /// Largest relative growth of the running supremum over the last
    /// doubling of the family that still counts as stabilized.
    pub stabilization: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { threshold: 1e3, stabilization: 0.02 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    Holds {
        #[serde(with = "crate::extf64")]
        constant: f64,
    },
    Fails {
        witness: GridFn,
        #[serde(with = "crate::extf64")]
        ratio: f64,
        index: usize,
    },
    Indeterminate {
        reason: String,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }
    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub size: usize,
    #[serde(with = "crate::extf64")]
    pub sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub inequality: String,
    /// Supremum of the ratio over the family.
    #[serde(with = "crate::extf64")]
    pub constant: f64,
    pub family: TrialFamily,
    pub trace: Vec<TracePoint>,
    pub verdict: Verdict,
    /// Members whose ratio was defined.
    pub evaluated: usize,
    /// Members skipped because the right-hand side was zero or infinite.
    pub skipped: usize,
    pub options: CheckOptions,
    pub wall_ms: f64,
    pub note: String,
}

/// Runs `f` on a pool capped by `RIEMBED_THREADS` when it is set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var("RIEMBED_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&k| k > 0);
    match cap.and_then(|k| rayon::ThreadPoolBuilder::new().num_threads(k).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn trace_sizes(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = [n / 8, n / 4, n / 2, n].into_iter().filter(|&k| k > 0).collect();
    v.dedup();
    v
}

fn running_sup(ratios: &[f64], k: usize) -> f64 {
    ratios[..k].iter().filter(|r| !r.is_nan()).fold(0.0, |a, &b| a.max(b))
}

/// Builds a report from per-member ratios (NaN marks an undefined ratio).
fn assemble(
    inequality: &str,
    family: &TrialFamily,
    ratios: &[f64],
    opts: CheckOptions,
    start: Instant,
) -> EmbeddingReport {
    let n = ratios.len();
    let trace: Vec<TracePoint> = trace_sizes(n).into_iter().map(|k| TracePoint { size: k, sup: running_sup(ratios, k) }).collect();
    let evaluated = ratios.iter().filter(|r| !r.is_nan()).count();
    let constant = running_sup(ratios, n);
    let mut best: Option<(usize, f64)> = None;
    for (i, &r) in ratios.iter().enumerate() {
        if !r.is_nan() && best.map_or(true, |(_, b)| r > b) {
            best = Some((i, r));
        }
    }
    let verdict = if evaluated == 0 {
        Verdict::Indeterminate { reason: "no member of the trial family gave a defined ratio".into() }
    } else if let Some((i, r)) = best.filter(|b| b.1 > opts.threshold) {
        Verdict::Fails { witness: family.member(i), ratio: r, index: i }
    } else {
        let half = running_sup(ratios, n / 2);
        if n >= 2 && half > 0.0 && constant <= half * (1.0 + opts.stabilization) {
            Verdict::Holds { constant }
        } else if n >= 2 && half == 0.0 && constant == 0.0 {
            Verdict::Holds { constant }
        } else {
            Verdict::Indeterminate {
                reason: format!("running supremum grew from {half:.6e} to {constant:.6e} over the last doubling"),
            }
        }
    };
    let note = match verdict {
        Verdict::Holds { .. } => HOLDS_NOTE.into(),
        Verdict::Fails { .. } => format!("ratio exceeded the blow-up threshold {:e}", opts.threshold),
        Verdict::Indeterminate { .. } => "neither stabilization nor blow-up within the budget".into(),
    };
    EmbeddingReport {
        inequality: inequality.into(),
        constant,
        family: family.clone(),
        trace,
        verdict,
        evaluated,
        skipped: n - evaluated,
        options: opts,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        note,
    }
}

fn quotient(num: Result<f64>, den: Result<f64>) -> f64 {
    match (num, den) {
        (Ok(a), Ok(b)) if b > 0.0 && b.is_finite() && !a.is_nan() => a / b,
        _ => f64::NAN,
    }
}

/// `‖H f‖_Y / ‖χ_(0,1) f‖_X` for the local Hardy operator `H` of order `m/n`.
pub fn local_ratio(x: &SpaceSpec, y: &SpaceSpec, n: u32, m: u32, f: &GridFn) -> f64 {
    let f1 = f.restrict(0.0, 1.0);
    quotient(norm(y, &hardy_local(&f1, n, m)), norm(x, &f1))
}

/// `‖χ_(1,∞) f*‖_Y / ‖f*‖_X`.
pub fn far_ratio(x: &SpaceSpec, y: &SpaceSpec, f: &GridFn) -> f64 {
    let Ok(fs) = rearrange(f) else { return f64::NAN };
    quotient(norm(y, &fs.restrict(1.0, f64::INFINITY)), norm(x, &fs))
}

fn evaluate(family: &TrialFamily, ratio: impl Fn(&GridFn) -> f64 + Sync) -> Vec<f64> {
    with_thread_cap(|| (0..family.count).into_par_iter().map(|i| ratio(&family.member(i))).collect())
}

/// Both one-dimensional inequalities for `W^m X -> Y`: the local Hardy
/// inequality on `(0,1)` and the far-field comparison on `(1,∞)`.
pub fn reduction_check(
    x: &SpaceSpec,
    y: &SpaceSpec,
    n: u32,
    m: u32,
    family: &TrialFamily,
    opts: CheckOptions,
) -> Result<(EmbeddingReport, EmbeddingReport)> {
    if n < 2 || m < 1 {
        return Err(Error::Precondition(format!("need n >= 2 and m >= 1, got n = {n}, m = {m}")));
    }
    x.check_admissible()?;
    y.check_admissible()?;
    let start = Instant::now();
    let r2 = evaluate(family, |f| local_ratio(x, y, n, m, f));
    let local = assemble("R2", family, &r2, opts, start);
    let start = Instant::now();
    let r3 = evaluate(family, |f| far_ratio(x, y, f));
    let far = assemble("R3", family, &r3, opts, start);
    Ok((local, far))
}

/// Orlicz form: the Hardy inequality on `(0,1)` in Luxemburg norms, and
/// domination of `B` by `A` near zero.
pub fn orlicz_reduction_check(
    a: &YoungFn,
    b: &YoungFn,
    n: u32,
    m: u32,
    family: &TrialFamily,
    opts: CheckOptions,
) -> Result<(EmbeddingReport, EmbeddingReport)> {
    let xa = SpaceSpec::orlicz(a.clone());
    let yb = SpaceSpec::orlicz(b.clone());
    let start = Instant::now();
    let r = evaluate(family, |f| local_ratio(&xa, &yb, n, m, f));
    let local = assemble("orlicz-local", family, &r, opts, start);

    let start = Instant::now();
    let d = dominates(a, b, RegimeScope::NearZero)?;
    let verdict = match (d.holds, d.witness_c) {
        (true, Some(c)) => Verdict::Holds { constant: c },
        (true, None) => Verdict::Holds { constant: f64::NAN },
        (false, _) => match d.witness_t.last() {
            Some(&t) => {
                // t χ_(0,r) with ‖·‖_B = 1 while ‖·‖_A stays small.
                let r = (1.0 / b.eval(t)).min(1e300);
                let w = GridFn::indicator(r, t);
                let ratio = quotient(norm(&yb, &w), norm(&xa, &w));
                Verdict::Fails { witness: w, ratio, index: 0 }
            }
            None => Verdict::Indeterminate { reason: "domination failed without a sampled witness".into() },
        },
    };
    let constant = match &verdict {
        Verdict::Holds { constant } => *constant,
        Verdict::Fails { ratio, .. } => *ratio,
        Verdict::Indeterminate { .. } => f64::NAN,
    };
    let note = match verdict {
        Verdict::Holds { .. } => "A dominates B near zero; constant is the smallest sampled c".to_string(),
        _ => "B is not dominated by A near zero".to_string(),
    };
    let dom = EmbeddingReport {
        inequality: "orlicz-domination".into(),
        constant,
        family: family.with_count(0),
        trace: Vec::new(),
        verdict,
        evaluated: d.witness_t.len(),
        skipped: 0,
        options: opts,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        note,
    };
    Ok((local, dom))
}

/// Tries to refute `candidate` as a target of `W^m X`. Returns the first
/// failing report, or a combined report when neither inequality fails.
pub fn optimality_attack(
    x: &SpaceSpec,
    n: u32,
    m: u32,
    candidate: &SpaceSpec,
    family: &TrialFamily,
    opts: CheckOptions,
) -> Result<EmbeddingReport> {
    let (local, far) = reduction_check(x, candidate, n, m, family, opts)?;
    if local.verdict.fails() {
        return Ok(local);
    }
    if far.verdict.fails() {
        return Ok(far);
    }
    if !local.verdict.holds() {
        return Ok(local);
    }
    if !far.verdict.holds() {
        return Ok(far);
    }
    let constant = local.constant.max(far.constant);
    let trace = local
        .trace
        .iter()
        .zip(&far.trace)
        .map(|(a, b)| TracePoint { size: a.size, sup: a.sup.max(b.sup) })
        .collect();
    Ok(EmbeddingReport {
        inequality: "R2+R3".into(),
        constant,
        family: family.clone(),
        trace,
        verdict: Verdict::Holds { constant },
        evaluated: local.evaluated.min(far.evaluated),
        skipped: local.skipped.max(far.skipped),
        options: opts,
        wall_ms: local.wall_ms + far.wall_ms,
        note: format!("candidate not refuted at this budget; {HOLDS_NOTE}"),
    })
}
