//! Quadrature on logarithmic panels.
//!
//! Integrals over `(lo, hi)` with `0 <= lo < hi <= inf` are taken in the
//! variable `u = ln s` with 10-point Gauss-Legendre panels. Infinite ends
//! are marched until the panel contributions become negligible, and a
//! geometric or algebraic tail estimate closes the march.

const GL_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

pub const U_LIMIT: f64 = 700.0;
const U_LIMIT_RIGHT: f64 = 500.0;
const PANEL: f64 = 0.5;

/// Nodes and weights of the 10-point rule mapped to `[a, b]`.
pub fn gl_nodes(a: f64, b: f64) -> [(f64, f64); 10] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 10];
    for i in 0..5 {
        out[2 * i] = (c - h * GL_X[i], h * GL_W[i]);
        out[2 * i + 1] = (c + h * GL_X[i], h * GL_W[i]);
    }
    out
}

pub fn gl<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    gl_nodes(a, b).iter().map(|&(x, w)| w * f(x)).sum()
}

/// `ln(e^a + e^b)` without overflow.
pub fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a == f64::INFINITY || b == f64::INFINITY {
        return f64::INFINITY;
    }
    let (m, o) = if a > b { (a, b) } else { (b, a) };
    m + (o - m).exp().ln_1p()
}

/// `ln ∫_a^b e^{h(u)} du` by Gauss-Legendre in log space.
pub fn ln_gl<F: FnMut(f64) -> f64>(mut h: F, a: f64, b: f64) -> f64 {
    let mut acc = f64::NEG_INFINITY;
    for (x, w) in gl_nodes(a, b) {
        acc = ln_add(acc, w.ln() + h(x));
    }
    acc
}

/// ∫_{ua}^{ub} g(u) du over finite `u` limits with panels of width at most 0.5.
pub fn integrate_u<F: FnMut(f64) -> f64>(mut g: F, ua: f64, ub: f64) -> f64 {
    if ub <= ua {
        return 0.0;
    }
    let n = ((ub - ua) / PANEL).ceil().max(1.0) as usize;
    let h = (ub - ua) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let a = ua + h * i as f64;
        total += gl(&mut g, a, a + h);
        if total.is_infinite() || total.is_nan() {
            return f64::INFINITY;
        }
    }
    total
}

/// Marches panels of width 1 from `u0` in direction `dir` (+1 or -1).
fn march<F: FnMut(f64) -> f64>(g: &mut F, u0: f64, dir: f64) -> f64 {
    let mut total = 0.0;
    let mut prev = f64::NAN;
    let mut last = 0.0;
    let mut u = u0;
    let mut k = 0usize;
    // Large s overflows products of powers well before u = 700.
    let limit = if dir > 0.0 { U_LIMIT_RIGHT } else { U_LIMIT };
    while u.abs() < limit || k < 4 {
        let next = u + dir;
        let (a, b) = if dir > 0.0 { (u, next) } else { (next, u) };
        let c = gl(&mut *g, a, b);
        if c.is_nan() || c.is_infinite() {
            return f64::INFINITY;
        }
        total += c;
        k += 1;
        if k >= 4 && c.abs() <= 1e-17 * total.abs() && prev.abs() <= 1e-16 * total.abs() {
            return total;
        }
        if total == 0.0 && k > 2000 {
            return 0.0;
        }
        prev = last;
        last = c;
        u = next;
        if k > 4000 {
            break;
        }
    }
    if last == 0.0 {
        return total;
    }
    let r = last / prev;
    if !(r.is_finite()) || r >= 1.0 - 1e-9 {
        return f64::INFINITY;
    }
    if r < 0.9 {
        return total + last * r / (1.0 - r);
    }
    // Still contributing at the march limit: the decay is algebraic in u, as for
    // log factors at a critical power. Fit C (|u| + a)^b through three points.
    algebraic_tail(g, u, dir).map_or(f64::INFINITY, |t| total + t)
}

/// `∫_{|u|>U} C (|u| + a)^b du` for the model fitted at `U - 100, U - 50, U`.
fn algebraic_tail<F: FnMut(f64) -> f64>(g: &mut F, u_end: f64, dir: f64) -> Option<f64> {
    let big_u = u_end.abs();
    let xs = [big_u - 100.0, big_u - 50.0, big_u];
    let gs: Vec<f64> = xs.iter().map(|x| g(dir * x)).collect();
    if gs.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return None;
    }
    let (l12, l23) = ((gs[0] / gs[1]).ln(), (gs[1] / gs[2]).ln());
    let b_of = |a: f64| l12 / ((xs[0] + a) / (xs[1] + a)).ln();
    let resid = |a: f64| b_of(a) - l23 / ((xs[1] + a) / (xs[2] + a)).ln();
    let (mut lo, mut hi) = (-xs[0] + 1.0, 1e6);
    let a = if resid(lo).signum() != resid(hi).signum() {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if resid(mid).signum() == resid(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    } else {
        0.0
    };
    let b = b_of(a);
    if !(b < -1.0 - 1e-3) {
        return None;
    }
    let c = gs[2] / (big_u + a).powf(b);
    Some(c * (big_u + a).powf(b + 1.0) / (-b - 1.0))
}

/// ∫_lo^hi f(s) ds with `0 <= lo < hi <= inf`. Returns `+inf` when the march
/// detects divergence.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let mut g = |u: f64| {
        let s = u.exp();
        let v = f(s);
        if v == 0.0 {
            0.0
        } else {
            v * s
        }
    };
    if lo > 0.0 && hi.is_finite() {
        return integrate_u(&mut g, lo.ln(), hi.ln());
    }
    if lo == 0.0 && hi.is_finite() {
        return march(&mut g, hi.ln(), -1.0);
    }
    if lo > 0.0 {
        return march(&mut g, lo.ln(), 1.0);
    }
    march(&mut g, 0.0, -1.0) + march(&mut g, 0.0, 1.0)
}

/// ∫_lo^hi c s^e ds in closed form, `+inf` when divergent.
pub fn power_integral(c: f64, e: f64, lo: f64, hi: f64) -> f64 {
    if c == 0.0 || !(hi > lo) {
        return 0.0;
    }
    if (e + 1.0).abs() < 1e-14 {
        if lo == 0.0 || hi.is_infinite() {
            return f64::INFINITY;
        }
        return c * (hi.ln() - lo.ln());
    }
    let e1 = e + 1.0;
    if lo == 0.0 && e1 < 0.0 {
        return f64::INFINITY;
    }
    if hi.is_infinite() && e1 > 0.0 {
        return f64::INFINITY;
    }
    let top = if hi.is_infinite() { 0.0 } else { hi.powf(e1) };
    let bot = if lo == 0.0 { 0.0 } else { lo.powf(e1) };
    c * (top - bot) / e1
}

/// Is `s^e (1+|ln s|)^b` integrable at 0?
pub fn integrable_at_zero(e: f64, b: f64) -> bool {
    if (e + 1.0).abs() < 1e-12 {
        b < -1.0 - 1e-12
    } else {
        e > -1.0
    }
}

/// Is `s^e (1+|ln s|)^b` integrable at infinity?
pub fn integrable_at_infinity(e: f64, b: f64) -> bool {
    if (e + 1.0).abs() < 1e-12 {
        b < -1.0 - 1e-12
    } else {
        e < -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_polynomial() {
        let v = integrate(|s| s * s, 0.5, 3.0);
        assert!((v - (27.0 - 0.125) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn half_line_integrals() {
        let v = integrate(|s| (-s).exp(), 0.0, f64::INFINITY);
        assert!((v - 1.0).abs() < 1e-10, "{v}");
        let v = integrate(|s| s.powf(-0.5), 0.0, 4.0);
        assert!((v - 4.0).abs() < 1e-9, "{v}");
        let v = integrate(|s| s.powf(-2.0), 2.0, f64::INFINITY);
        assert!((v - 0.5).abs() < 1e-9, "{v}");
    }

    #[test]
    fn divergent_detected() {
        assert!(integrate(|s| 1.0 / s, 1.0, f64::INFINITY).is_infinite());
        assert!(integrate(|s| s.powf(-1.2), 0.0, 1.0).is_infinite());
    }

    #[test]
    fn log_space_rule() {
        let v = ln_gl(|u| 2.0 * u, 0.0, 1.0);
        assert!((v.exp() - (2f64.exp() - 1.0) / 2.0).abs() < 1e-12);
        assert!((ln_add(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn critical_log_tails() {
        // ∫_0^1 s^{-1}(1+ln 1/s)^{-2} ds = 1 and ∫_1^inf s^{-1}(1+ln s)^{-3} ds = 1/2.
        let v = integrate(|s: f64| 1.0 / (s * (1.0 - s.ln()).powi(2)), 0.0, 1.0);
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        let v = integrate(|s: f64| 1.0 / (s * (1.0 + s.ln()).powi(3)), 1.0, f64::INFINITY);
        assert!((v - 0.5).abs() < 1e-7, "{v}");
        assert!(integrate(|s: f64| 1.0 / (s * (1.0 - s.ln())), 0.0, 1.0).is_infinite());
    }

    #[test]
    fn closed_form_powers() {
        assert_eq!(power_integral(1.0, -2.0, 0.0, 1.0), f64::INFINITY);
        assert!((power_integral(2.0, 1.0, 0.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((power_integral(1.0, -1.0, 1.0, std::f64::consts::E) - 1.0).abs() < 1e-15);
    }
}
