//! The local norm `‖f‖_{Z(0,1)}`: closed forms where they exist and a
//! duality lower bound against `‖g‖_{Z'(0,1)} = ‖s^{m/n} g**(s)‖_{X'(0,1)}`.

use super::supercritical_check;
use crate::error::{Error, Result};
use crate::funcrep::{rearrange, GridFn};
use crate::norms::{associate_lower_bound, associate_space, luxemburg, norm_rearranged, weighted_lq, SpaceSpec, TrialBudget, Weight, WeightSegment};
use crate::quad;
use crate::young::a_hat_construct;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZMethod {
    LorentzSubcritical,
    LorentzLimiting,
    Supercritical,
    OrliczHat,
    GenericDuality,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZValue {
    #[serde(with = "crate::extf64")]
    pub value: f64,
    /// True when `value` is a certified lower bound rather than a closed form.
    pub lower_bound: bool,
    pub method: ZMethod,
}

pub(crate) fn check_nm(n: u32, m: u32) -> Result<()> {
    if n < 2 || m < 1 {
        return Err(Error::Precondition(format!("need n >= 2 and m >= 1, got n = {n}, m = {m}")));
    }
    Ok(())
}

/// Lorentz indices of Lebesgue and Lorentz spaces.
pub(crate) fn lorentz_indices(x: &SpaceSpec) -> Option<(f64, f64)> {
    match *x {
        SpaceSpec::Lebesgue { p } => Some((p, p)),
        SpaceSpec::Lorentz { p, q } => Some((p, q)),
        _ => None,
    }
}

pub(crate) fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

fn unit_weight(seg: WeightSegment) -> Weight {
    Weight::new(vec![WeightSegment { lo: 0.0, hi: 1.0, ..seg }]).unwrap()
}

/// `‖f‖_{Z(0,1)}` for the local part of the optimal target of `W^m X`.
pub fn z_norm(x: &SpaceSpec, n: u32, m: u32, f: &GridFn) -> Result<ZValue> {
    check_nm(n, m)?;
    let fs = rearrange(&f.restrict(0.0, 1.0))?;
    let theta = m as f64 / n as f64;
    let r = 1.0 / theta;
    if matches!(supercritical_check(x, n, m), Ok(true)) {
        let v = weighted_lq(&fs, &Weight::unit(), f64::INFINITY, 1.0);
        return Ok(ZValue { value: v, lower_bound: false, method: ZMethod::Supercritical });
    }
    if let Some((p, q)) = lorentz_indices(x) {
        if p < r && !same(p, r) {
            let w = unit_weight(WeightSegment::new(0.0, 1.0, 1.0, 1.0 / p - theta - 1.0 / q, 0.0));
            return Ok(ZValue { value: weighted_lq(&fs, &w, q, 1.0), lower_bound: false, method: ZMethod::LorentzSubcritical });
        }
        if same(p, r) {
            let seg = WeightSegment { log_offset: 2f64.ln(), ..WeightSegment::new(0.0, 1.0, 1.0, -1.0 / q, -1.0) };
            let w = unit_weight(seg);
            return Ok(ZValue { value: weighted_lq(&fs, &w, q, 1.0), lower_bound: false, method: ZMethod::LorentzLimiting });
        }
    }
    if let SpaceSpec::Orlicz { young } = x {
        let ahat = a_hat_construct(young, n, m)?;
        let w = unit_weight(WeightSegment::new(0.0, 1.0, 1.0, -theta, 0.0));
        let v = luxemburg(&fs, &w, &ahat.young, 1.0)?;
        return Ok(ZValue { value: v, lower_bound: false, method: ZMethod::OrliczHat });
    }
    z_norm_generic(x, n, m, f, TrialBudget::default())
}

/// `‖f‖_{X^m(0,inf)} = ‖f*‖_{Z(0,1)}`.
pub fn xm_norm(x: &SpaceSpec, n: u32, m: u32, f: &GridFn) -> Result<ZValue> {
    let fs = rearrange(f)?;
    z_norm(x, n, m, &fs.restrict(0.0, 1.0))
}

fn layers(fs: &GridFn) -> Vec<f64> {
    let mut b: Vec<f64> = (0..=40).map(|k| 10f64.powf(-(k as f64) / 4.0)).collect();
    b.extend(fs.breakpoints().iter().cloned().filter(|x| *x > 1e-10 && *x < 1.0));
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    b
}

/// Gram matrix of `s^θ χ_(0,b)**(s)` in `L²(0,1)`.
fn gram(b: &[f64], theta: f64) -> Vec<Vec<f64>> {
    let t = 2.0 * theta;
    let k = b.len();
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let (bi, bj) = (b[i], b[j]);
            let mut v = bi.powf(t + 1.0) / (t + 1.0) + bi * (bj.powf(t) - bi.powf(t)) / t;
            v += if (t - 1.0).abs() < 1e-14 {
                bi * bj * (1.0 / bj).ln()
            } else {
                bi * bj * (1.0 - bj.powf(t - 1.0)) / (t - 1.0)
            };
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    g
}

/// `sup_{c >= 0} F·c / sqrt(cᵀ G c)` by projected coordinate descent on
/// `F·c - ½ cᵀ G c`.
fn quadratic_sup(fv: &[f64], g: &[Vec<f64>]) -> f64 {
    let k = fv.len();
    let mut c = vec![0.0; k];
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..k {
            let mut s = fv[i];
            for j in 0..k {
                if j != i {
                    s -= g[i][j] * c[j];
                }
            }
            let new = (s / g[i][i]).max(0.0);
            delta = delta.max((new - c[i]).abs());
            c[i] = new;
        }
        let scale = c.iter().cloned().fold(0.0, f64::max);
        if delta <= 1e-13 * scale.max(1e-300) {
            break;
        }
    }
    let num: f64 = fv.iter().zip(&c).map(|(a, b)| a * b).sum();
    let mut den = 0.0;
    for i in 0..k {
        for j in 0..k {
            den += c[i] * g[i][j] * c[j];
        }
    }
    if den > 0.0 {
        num / den.sqrt()
    } else {
        0.0
    }
}

/// `h(s) = s^θ Σ c_j min(1, b_j/s)` as `s^θ (A + B/s)` on each layer gap.
fn segments(b: &[f64], c: &[f64]) -> Vec<(f64, f64, f64, f64)> {
    let k = b.len();
    let mut out = Vec::with_capacity(k + 1);
    let mut a_sum: f64 = c.iter().sum();
    let mut b_sum = 0.0;
    let mut lo = 0.0;
    for j in 0..k {
        out.push((lo, b[j], a_sum, b_sum));
        a_sum -= c[j];
        b_sum += c[j] * b[j];
        lo = b[j];
    }
    if lo < 1.0 {
        out.push((lo, 1.0, a_sum.max(0.0), b_sum));
    }
    out
}

fn lebesgue_dual(b: &[f64], c: &[f64], theta: f64, r: f64) -> f64 {
    let segs = segments(b, c);
    if r.is_infinite() {
        let mut m: f64 = 0.0;
        for &(lo, hi, a, bb) in &segs {
            let h = |s: f64| s.powf(theta) * (a + bb / s);
            m = m.max(h(hi));
            if lo > 0.0 {
                m = m.max(h(lo));
            }
            if a > 0.0 && bb > 0.0 {
                let s = bb * (1.0 - theta) / (a * theta);
                if s > lo && s < hi {
                    m = m.max(h(s));
                }
            }
        }
        return m;
    }
    let mut total = 0.0;
    for &(lo, hi, a, bb) in &segs {
        if a == 0.0 && bb == 0.0 {
            continue;
        }
        if lo == 0.0 {
            total += a.powf(r) * quad::power_integral(1.0, theta * r, 0.0, hi);
        } else {
            total += quad::integrate(|s| (s.powf(theta) * (a + bb / s)).powf(r), lo, hi);
        }
    }
    total.powf(1.0 / r)
}

/// `h` sampled on a log grid of `(1e-12, 1)` as a step function.
fn discretized(b: &[f64], c: &[f64], theta: f64) -> Result<GridFn> {
    let mut pts: Vec<f64> = (0..=240).map(|i| 10f64.powf(-12.0 + i as f64 / 20.0)).collect();
    pts.extend_from_slice(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    let segs = segments(b, c);
    let h = |s: f64| {
        let (_, _, a, bb) = segs.iter().find(|g| s < g.1).copied().unwrap_or(*segs.last().unwrap());
        s.powf(theta) * (a + bb / s)
    };
    let vals: Vec<f64> = pts.windows(2).map(|w| h((w[0] * w[1]).sqrt())).collect();
    GridFn::steps(pts, vals)
}

/// Duality lower bound for `‖f‖_{Z(0,1)}` over layered trial functions
/// `g = Σ c_j χ_(0,b_j)`.
pub fn z_norm_generic(x: &SpaceSpec, n: u32, m: u32, f: &GridFn, budget: TrialBudget) -> Result<ZValue> {
    check_nm(n, m)?;
    let fs = rearrange(&f.restrict(0.0, 1.0))?;
    let out = |v: f64, lb: bool| Ok(ZValue { value: v, lower_bound: lb, method: ZMethod::GenericDuality });
    if fs.sup() == 0.0 {
        return out(0.0, true);
    }
    let theta = (m as f64 / n as f64).min(1.0);
    let b = layers(&fs);
    let fv: Vec<f64> = b.iter().map(|&bj| fs.integral(0.0, bj)).collect();
    if fv.iter().any(|v| v.is_infinite()) {
        return out(f64::INFINITY, true);
    }
    let dual = associate_space(x);
    if let Some(SpaceSpec::Lebesgue { p: r }) = dual {
        if r == 2.0 {
            return out(quadratic_sup(&fv, &gram(&b, theta)), true);
        }
    }
    let exact_dual = matches!(dual, Some(SpaceSpec::Lebesgue { .. }));
    let dnorm = |c: &[f64]| -> f64 {
        match &dual {
            Some(SpaceSpec::Lebesgue { p: r }) => lebesgue_dual(&b, c, theta, *r),
            Some(d) => discretized(&b, c, theta)
                .and_then(|h| rearrange(&h))
                .and_then(|hs| norm_rearranged(d, &hs, f64::INFINITY))
                .unwrap_or(f64::NAN),
            None => discretized(&b, c, theta)
                .and_then(|h| associate_lower_bound(x, &h, TrialBudget { count: 20, seed: budget.seed }))
                .unwrap_or(f64::NAN),
        }
    };
    let ratio = |c: &[f64]| -> f64 {
        let num: f64 = fv.iter().zip(c).map(|(a, b)| a * b).sum();
        let d = dnorm(c);
        if d > 0.0 && d.is_finite() {
            num / d
        } else {
            0.0
        }
    };
    let k = b.len();
    let mut best = 0.0;
    let mut best_c = vec![0.0; k];
    for j in 0..k {
        let mut c = vec![0.0; k];
        c[j] = 1.0;
        let r = ratio(&c);
        if r > best {
            best = r;
            best_c = c;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.count {
        let mut c = best_c.clone();
        let scale = c.iter().cloned().fold(0.0, f64::max);
        let j = rng.gen_range(0..k);
        if rng.gen_bool(0.5) {
            c[j] *= rng.gen_range(-1.0..1.0f64).exp();
        } else {
            c[j] += scale * rng.gen_range(0.0..0.5);
        }
        let r = ratio(&c);
        if r > best {
            best = r;
            best_c = c;
        }
    }
    out(best, exact_dual)
}
