//! Seeded trial families of nonnegative functions on `(0, inf)`.

use super::hardy::hardy_profile;
use crate::funcrep::GridFn;
use crate::norms::SpaceSpec;
use crate::tail::{ell, TailSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FamilyKind {
    /// Non-increasing step functions with breakpoints in `10^[-decades, decades]`.
    Steps { max_cells: usize, decades: f64 },
    /// `c s^{-a} (1+|ln s|)^{-β}` near 0 and near infinity, with `a` drawn from
    /// `critical` half of the time.
    PowerLogProfiles { critical: Vec<f64>, beta_min: f64, beta_max: f64 },
    /// Layer sums `Σ a_i χ_(0,b_i)`.
    Indicators { b_min: f64, b_max: f64, max_terms: usize },
    /// Profiles `∫_t^∞ f(s) s^{m/n-1} ds` of indicator sums on balls of
    /// radius `r`, i.e. `b = ω_n r^n`.
    RadialExtremals { n: u32, m: u32 },
    /// Cycles through the other kinds.
    Mixed { n: u32, m: u32, critical: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialFamily {
    #[serde(flatten)]
    pub kind: FamilyKind,
    pub seed: u64,
    pub count: usize,
}

/// Volume of the unit ball in ℝⁿ.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

/// Exponents `a` at which `s^{-a}` sits on the boundary of `X`.
pub fn critical_exponents(x: &SpaceSpec) -> Vec<f64> {
    let mut out = match x {
        SpaceSpec::Lebesgue { p } | SpaceSpec::Lorentz { p, .. } if p.is_finite() => vec![1.0 / p],
        SpaceSpec::Intersect { left, right } => {
            let mut v = critical_exponents(left);
            v.extend(critical_exponents(right));
            v
        }
        SpaceSpec::SobolevLocal { base, .. } => critical_exponents(base),
        _ => vec![],
    };
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    if out.is_empty() {
        out.push(0.5);
    }
    out
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

/// `Σ a_i χ_(0,b_i)` from unsorted `(b_i, a_i)`.
fn layers(mut terms: Vec<(f64, f64)>) -> GridFn {
    terms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    terms.dedup_by(|a, b| {
        if a.0 == b.0 {
            b.1 += a.1;
            true
        } else {
            false
        }
    });
    let br: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let mut vals = vec![0.0; br.len() - 1];
    let mut acc = 0.0;
    for j in (1..br.len()).rev() {
        acc += terms[j].1;
        vals[j - 1] = acc;
    }
    let top = acc + terms[0].1;
    GridFn::build(br, vals, Some(TailSpec::constant(top)), None, false).expect("layer sums are valid")
}

impl TrialFamily {
    pub fn new(kind: FamilyKind, seed: u64, count: usize) -> Self {
        TrialFamily { kind, seed, count }
    }

    pub fn steps(seed: u64, count: usize) -> Self {
        TrialFamily::new(FamilyKind::Steps { max_cells: 12, decades: 8.0 }, seed, count)
    }

    pub fn indicators(seed: u64, count: usize) -> Self {
        TrialFamily::new(FamilyKind::Indicators { b_min: 1e-12, b_max: 1e6, max_terms: 4 }, seed, count)
    }

    pub fn power_log(critical: Vec<f64>, seed: u64, count: usize) -> Self {
        TrialFamily::new(FamilyKind::PowerLogProfiles { critical, beta_min: -1.0, beta_max: 2.0 }, seed, count)
    }

    pub fn radial(n: u32, m: u32, seed: u64, count: usize) -> Self {
        TrialFamily::new(FamilyKind::RadialExtremals { n, m }, seed, count)
    }

    pub fn mixed(n: u32, m: u32, critical: Vec<f64>, seed: u64, count: usize) -> Self {
        TrialFamily::new(FamilyKind::Mixed { n, m, critical }, seed, count)
    }

    /// Same kind and seed with another size. Members are prefix-stable.
    pub fn with_count(&self, count: usize) -> Self {
        TrialFamily { count, ..self.clone() }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Steps { .. } => "steps",
            FamilyKind::PowerLogProfiles { .. } => "powerlog",
            FamilyKind::Indicators { .. } => "indicators",
            FamilyKind::RadialExtremals { .. } => "radial",
            FamilyKind::Mixed { .. } => "mixed",
        }
    }

    /// Member `i`. Depends only on the kind, the seed and `i`.
    pub fn member(&self, i: usize) -> GridFn {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64);
        match &self.kind {
            FamilyKind::Steps { max_cells, decades } => gen_steps(&mut rng, *max_cells, *decades),
            FamilyKind::PowerLogProfiles { critical, beta_min, beta_max } => {
                gen_power_log(&mut rng, critical, *beta_min, *beta_max)
            }
            FamilyKind::Indicators { b_min, b_max, max_terms } => gen_indicators(&mut rng, *b_min, *b_max, *max_terms),
            FamilyKind::RadialExtremals { n, m } => gen_radial(&mut rng, *n, *m),
            FamilyKind::Mixed { n, m, critical } => match i % 4 {
                0 => gen_power_log(&mut rng, critical, -1.0, 2.0),
                1 => gen_indicators(&mut rng, 1e-12, 1e6, 4),
                2 => gen_steps(&mut rng, 12, 8.0),
                _ => gen_radial(&mut rng, *n, *m),
            },
        }
    }

    pub fn generate(&self) -> Vec<GridFn> {
        (0..self.count).map(|i| self.member(i)).collect()
    }
}

fn gen_steps(rng: &mut ChaCha8Rng, max_cells: usize, decades: f64) -> GridFn {
    let k = rng.gen_range(1..=max_cells.max(1));
    let mut br: Vec<f64> = (0..=k).map(|_| 10f64.powf(rng.gen_range(-decades..=decades))).collect();
    br.sort_by(|a, b| a.partial_cmp(b).unwrap());
    br.dedup();
    if br.len() < 2 {
        br.push(br[0] * 2.0);
    }
    let mut v = rng.gen_range(-3.0..3.0f64).exp();
    let mut vals = Vec::with_capacity(br.len() - 1);
    for _ in 1..br.len() {
        vals.push(v);
        v *= rng.gen_range(0.05..1.0);
    }
    let g = GridFn::steps(br, vals).expect("valid steps");
    if rng.gen_bool(0.5) {
        // Fill (0, b_0) so that the function is non-increasing on (0, inf).
        let top = g.values()[0];
        g.with_tails(Some(TailSpec::constant(top)), None).expect("constant tail")
    } else {
        let b0 = g.first_break();
        let top = g.values()[0];
        let mut br = vec![b0 * rng.gen_range(0.01..0.9)];
        br.extend_from_slice(g.breakpoints());
        let mut vals = vec![top];
        vals.extend_from_slice(g.values());
        GridFn::build(br, vals, Some(TailSpec::constant(top * rng.gen_range(1.0..5.0))), None, false).expect("valid")
    }
}

fn gen_indicators(rng: &mut ChaCha8Rng, b_min: f64, b_max: f64, max_terms: usize) -> GridFn {
    let k = rng.gen_range(1..=max_terms.max(1));
    let terms = (0..k).map(|_| (log_uniform(rng, b_min, b_max), rng.gen_range(-2.0..2.0f64).exp())).collect();
    layers(terms)
}

fn gen_power_log(rng: &mut ChaCha8Rng, critical: &[f64], beta_min: f64, beta_max: f64) -> GridFn {
    let pick = |rng: &mut ChaCha8Rng, hi: f64| -> (f64, f64) {
        let a = if !critical.is_empty() && rng.gen_bool(0.5) {
            critical[rng.gen_range(0..critical.len())]
        } else {
            rng.gen_range(0.0..hi)
        };
        (a, rng.gen_range(beta_min..=beta_max))
    };
    // Near zero: s^{-a} ℓ^{-β} is non-increasing where ℓ >= β/a.
    let (a, mut beta) = pick(rng, 0.95);
    if a <= 0.0 && beta > 0.0 {
        beta = 0.0;
    }
    let mut b = log_uniform(rng, 1e-3, 1.0);
    if beta > 0.0 {
        let edge = (1.0 - beta / a).exp();
        if edge < 1e-100 {
            beta = 0.0;
        } else {
            b = b.min(edge);
        }
    }
    let left = TailSpec::power_log(rng.gen_range(-1.0..1.0f64).exp(), -a, -beta);
    let lv = left.value(b);

    // Near infinity: s^{-a} ℓ^{-β} is non-increasing where a ℓ >= -β.
    let (a2, mut beta2) = pick(rng, 2.0);
    let a2 = a2.max(0.05);
    if beta2 < 0.0 && a2 < 1e-9 {
        beta2 = 0.0;
    }
    let mut big = log_uniform(rng, 1.0, 1e3);
    if beta2 < 0.0 {
        big = big.max((-beta2 / a2 - 1.0).exp());
    }
    let mid = lv * rng.gen_range(0.2..1.0);
    let target = mid * rng.gen_range(0.2..1.0);
    let shape = big.powf(-a2) * ell(big).powf(-beta2);
    let right = TailSpec::power_log(target / shape, -a2, -beta2);
    let (br, vals) = if big > b { (vec![b, big], vec![mid]) } else { (vec![b], vec![]) };
    GridFn::build(br, vals, Some(left), Some(right), false).unwrap_or_else(|_| GridFn::indicator(b, lv))
}

fn gen_radial(rng: &mut ChaCha8Rng, n: u32, m: u32) -> GridFn {
    let omega = unit_ball_volume(n);
    let k = rng.gen_range(1..=3);
    let terms: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let r = log_uniform(rng, 1e-3, 1e2);
            (omega * r.powi(n as i32), rng.gen_range(-2.0..2.0f64).exp())
        })
        .collect();
    let f = layers(terms);
    hardy_profile(&f, m as f64 / n as f64, f.last_break())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn members_are_deterministic_and_non_increasing() {
        let fams = [
            TrialFamily::steps(3, 40),
            TrialFamily::indicators(3, 40),
            TrialFamily::power_log(vec![0.5], 3, 40),
            TrialFamily::radial(3, 1, 3, 40),
            TrialFamily::mixed(3, 1, vec![0.5], 3, 40),
        ];
        for fam in &fams {
            let a = fam.generate();
            assert_eq!(a, fam.generate());
            assert_eq!(&a[..10], &fam.with_count(10).generate()[..]);
            for (i, f) in a.iter().enumerate() {
                assert!(f.is_nonincreasing(), "{} member {i}: {f:?}", fam.name());
                assert!(f.sup() > 0.0);
            }
        }
    }

    #[test]
    fn critical_exponents_of_lebesgue() {
        let x = SpaceSpec::intersect(SpaceSpec::lorentz(6.0, 2.0), SpaceSpec::lebesgue(2.0));
        assert_eq!(critical_exponents(&x), vec![1.0 / 6.0, 0.5]);
        assert_eq!(critical_exponents(&SpaceSpec::linf()), vec![0.5]);
    }
}
