use super::classify::{classify_growth, FitReport};
use super::{Regime, YoungFn};
use crate::error::{Error, Result};
use crate::quad::{ln_add, ln_gl};

const U_BOTTOM: f64 = -700.0;
const U_TOP: f64 = 1e300;
// Beyond this the parametric chain for Â loses all relative precision, and
// the fitting window is reached well before it.
const U_TOP_AHAT: f64 = 300.0;
const WINDOW_TOP: f64 = 1e8;
const WINDOW_DECADES: f64 = 4.0;
const WINDOW_SAMPLES: usize = 200;

/// A monotone function tabulated as `ln F` against `ln t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tabulated {
    pub ln_t: Vec<f64>,
    pub ln_v: Vec<f64>,
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        let s = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        return ys[0] + s * (x - xs[0]);
    }
    if x >= xs[n - 1] {
        let s = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
        return ys[n - 1] + s * (x - xs[n - 1]);
    }
    let i = xs.partition_point(|v| *v <= x).min(n - 1);
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    if x1 == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

impl Tabulated {
    pub fn ln_eval(&self, ln_t: f64) -> f64 {
        interp(&self.ln_t, &self.ln_v, ln_t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        self.ln_eval(t.ln()).exp()
    }

    /// `ln t` at which `ln F = ln_y`, by interpolation of the inverse table.
    pub fn ln_inverse(&self, ln_y: f64) -> f64 {
        interp(&self.ln_v, &self.ln_t, ln_y)
    }
}

/// `H_{n/m}` with its convergence flag at infinity.
#[derive(Clone, Debug)]
pub struct HFunction {
    pub table: Tabulated,
    /// Whether `∫^∞ (t/A(t))^{m/(n-m)} dt` converges.
    pub converges_at_infinity: bool,
    /// `lim H(τ)` when finite.
    pub limit: Option<f64>,
    /// The Young function actually integrated, after near-zero normalization.
    pub normalized: YoungFn,
    pub notes: Vec<String>,
}

fn u_grid(top: f64) -> Vec<f64> {
    let mut g = Vec::with_capacity(20000);
    let mut u = U_BOTTOM;
    while u < 40.0f64.min(top) {
        g.push(u);
        u += 0.25;
    }
    while u < top {
        g.push(u);
        u *= 1.05;
    }
    g.push(top);
    g
}

/// Snaps a linear coefficient that should vanish exactly.
fn lin(c: f64) -> f64 {
    if c.abs() < 1e-12 {
        0.0
    } else {
        c
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

/// Symbolic integrability of `∫ (t/A)^k` at 0 for the near-zero regime.
fn converges_at_zero(r: &Regime, k: f64) -> bool {
    match *r {
        Regime::PowerLog { p, alpha, .. } => {
            let e = (1.0 - p) * k;
            e > -1.0 + 1e-12 || (near(e, -1.0) && alpha * k > 1.0 + 1e-12)
        }
        _ => true,
    }
}

/// Symbolic integrability of `∫^∞ (t/A)^k`.
pub fn converges_at_infinity(r: &Regime, k: f64) -> bool {
    match *r {
        Regime::PowerLog { p, alpha, gamma } => {
            let e = (1.0 - p) * k;
            if near(e, -1.0) {
                let ak = alpha * k;
                ak > 1.0 + 1e-12 || (near(ak, 1.0) && gamma * k > 1.0 + 1e-12)
            } else {
                e < -1.0
            }
        }
        _ => true,
    }
}

/// Replaces the near-zero regime by `t` when `∫_0 (t/A)^k` diverges; this
/// keeps the class of `A` near infinity.
fn normalize(a: &YoungFn, k: f64) -> Result<(YoungFn, Vec<String>)> {
    if converges_at_zero(&a.near_zero(), k) {
        return Ok((a.clone(), vec![]));
    }
    let mut b = YoungFn::with_splice(Regime::power(1.0), a.near_infinity(), a.splice_point())?;
    let note = format!(
        "near-zero regime {} replaced by t^1 so that the integral at 0 converges; the class near infinity is unchanged",
        a.near_zero().describe()
    );
    b.push_note(note.clone());
    Ok((b, vec![note]))
}

fn check_dims(n: u32, m: u32) -> Result<f64> {
    if n < 2 || m < 1 || m >= n {
        return Err(Error::Precondition(format!("need n >= 2 and 1 <= m < n, got n = {n}, m = {m}")));
    }
    Ok(m as f64 / (n - m) as f64)
}

/// Cumulative `ln ∫_{-inf}^{u_j} e^{h}` on the grid, with an exponential
/// estimate for the part below the grid.
fn cumulative<F: Fn(f64) -> f64>(grid: &[f64], h: &F) -> Vec<f64> {
    let u0 = grid[0];
    let h0 = h(u0);
    let slope = h0 - h(u0 - 1.0);
    let mut acc = if slope > 0.0 && h0.is_finite() { h0 - slope.ln() } else { f64::NEG_INFINITY };
    let mut out = Vec::with_capacity(grid.len());
    out.push(acc);
    for w in grid.windows(2) {
        acc = ln_add(acc, ln_gl(h, w[0], w[1]));
        out.push(acc);
    }
    out
}

/// Cubic Hermite interpolation of a smooth function from values and slopes.
struct Hermite<'a> {
    x: &'a [f64],
    v: &'a [f64],
    d: &'a [f64],
}

impl Hermite<'_> {
    fn eval(&self, x: f64) -> f64 {
        let n = self.x.len();
        let i = self.x.partition_point(|t| *t <= x).clamp(1, n - 1);
        let (x0, x1) = (self.x[i - 1], self.x[i]);
        let h = x1 - x0;
        let t = ((x - x0) / h).clamp(0.0, 1.0);
        let (v0, v1, d0, d1) = (self.v[i - 1], self.v[i], self.d[i - 1] * h, self.d[i] * h);
        if !(v0.is_finite() && v1.is_finite() && d0.is_finite() && d1.is_finite()) {
            return v0 + (v1 - v0) * t;
        }
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * v0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * v1 + (t3 - t2) * d1
    }
}

/// `H_{n/m}(τ) = (∫_0^τ (t/A(t))^{m/(n-m)} dt)^{(n-m)/n}`.
pub fn h_construct(a: &YoungFn, n: u32, m: u32) -> Result<HFunction> {
    let k = check_dims(n, m)?;
    let (a, notes) = normalize(a, k)?;
    let grid = u_grid(U_TOP);
    let h = |u: f64| {
        let (sl, rest) = a.ln_eval_parts(u);
        lin(1.0 + k * (1.0 - sl)) * u - k * rest
    };
    let ln_i = cumulative(&grid, &h);
    let e = (n - m) as f64 / n as f64;
    let ln_v: Vec<f64> = ln_i.iter().map(|v| e * v).collect();
    let conv = converges_at_infinity(&a.near_infinity(), k);
    let limit = if conv { Some(ln_v.last().unwrap().exp()) } else { None };
    Ok(HFunction { table: Tabulated { ln_t: grid, ln_v }, converges_at_infinity: conv, limit, normalized: a, notes })
}

/// Lower edge of the fitting window: clear of the splice region.
fn floor_u(a: &YoungFn) -> f64 {
    (10.0 * a.splice_point().max(1.0)).ln() + 2.0
}

/// Resamples `(x, y)` uniformly in `x` over the top four decades below
/// `min(1e8, reachable)`, staying above `x_floor`.
fn window(xs: &[f64], ys: &[f64], x_floor: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let x_max = xs.iter().cloned().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let hi = WINDOW_TOP.ln().min(x_max);
    let lo = (hi - WINDOW_DECADES * 10f64.ln()).max(x_floor);
    if !(hi > lo + 0.5) {
        return Err(Error::ClassificationAmbiguous(format!("fitting window too narrow: [{lo:.2}, {hi:.2}]")));
    }
    let pairs: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(x, y)| x.is_finite() && y.is_finite()).map(|(x, y)| (*x, *y)).collect();
    let px: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let py: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let wx: Vec<f64> = (0..WINDOW_SAMPLES).map(|i| lo + (hi - lo) * i as f64 / (WINDOW_SAMPLES - 1) as f64).collect();
    let wy: Vec<f64> = wx.iter().map(|x| interp(&px, &py, *x)).collect();
    Ok((wx, wy))
}

/// `A_{n/m} = A ∘ H_{n/m}^{-1}`, classified near infinity. When `H` has a
/// finite limit the result is `+inf` beyond it.
pub fn orlicz_sobolev_conjugate(a: &YoungFn, n: u32, m: u32) -> Result<YoungFn> {
    let h = h_construct(a, n, m)?;
    let near_inf = if let Some(lim) = h.limit {
        Regime::InfiniteCap { t0: lim }
    } else {
        let xs = &h.table.ln_v;
        let ys: Vec<f64> = h.table.ln_t.iter().map(|u| h.normalized.ln_eval_log(*u)).collect();
        let x_floor = interp(&h.table.ln_t, &h.table.ln_v, floor_u(&h.normalized));
        let (wx, wy) = window(xs, &ys, x_floor)?;
        classify_growth(&wx, &wy)?.0
    };
    let mut out = YoungFn::new(h.normalized.near_zero(), near_inf)?;
    for note in h.notes {
        out.push_note(note);
    }
    Ok(out)
}

/// `Â` with its tabulation and fit diagnostics.
#[derive(Clone, Debug)]
pub struct AHat {
    pub young: YoungFn,
    pub table: Tabulated,
    pub fit: FitReport,
    pub notes: Vec<String>,
}

/// Builds `Â` from `â^{-1}(s) = K(a^{-1}(s))^{-m/(n-m)}` in parametric form:
/// with `x(r) = K(r)^{-m/(n-m)}`, `â(x(r)) = a(r)` and
/// `Â(x(R)) = ∫_0^R a(r) x'(r) dr`.
pub fn a_hat_construct(a: &YoungFn, n: u32, m: u32) -> Result<AHat> {
    let k = check_dims(n, m)?;
    let (a, notes) = normalize(a, k)?;
    if converges_at_infinity(&a.near_infinity(), k) {
        return Err(Error::Precondition(
            "the integral of (t/A(t))^{m/(n-m)} converges at infinity; use the supercritical target".into(),
        ));
    }
    let nm = n as f64 / m as f64;
    let nnm = n as f64 / (n - m) as f64;
    let grid = u_grid(U_TOP_AHAT);
    let la = |u: f64| a.ln_density_log(u);

    let hj = |u: f64| {
        let (sl, rest) = a.ln_density_parts(u);
        lin(1.0 - k * sl) * u - k * rest
    };
    let ln_j = cumulative(&grid, &hj);
    let dj: Vec<f64> = grid.iter().zip(&ln_j).map(|(u, lj)| (hj(*u) - lj).exp()).collect();
    let jh = Hermite { x: &grid, v: &ln_j, d: &dj };

    let hk = |u: f64| -nm * jh.eval(u) - nnm * la(u) + u;
    let nn = grid.len();
    let mut ln_k = vec![f64::NEG_INFINITY; nn];
    let top = grid[nn - 1];
    let g_top = hk(top);
    let slope = g_top - hk(top * 0.999);
    if slope < 0.0 && g_top.is_finite() {
        ln_k[nn - 1] = g_top - (-slope / (top * 0.001)).ln();
    }
    for j in (0..nn - 1).rev() {
        ln_k[j] = ln_add(ln_k[j + 1], ln_gl(&hk, grid[j], grid[j + 1]));
    }
    let dk: Vec<f64> = grid.iter().zip(&ln_k).map(|(u, lk)| -(hk(*u) - lk).exp()).collect();
    let kh = Hermite { x: &grid, v: &ln_k, d: &dk };

    let hint = |u: f64| la(u) + k.ln() - (k + 1.0) * kh.eval(u) + hk(u);
    let ln_ahat = cumulative(&grid, &hint);
    let ln_x: Vec<f64> = ln_k.iter().map(|v| -k * v).collect();
    let table = Tabulated { ln_t: ln_x.clone(), ln_v: ln_ahat.clone() };

    let x_floor = interp(&grid, &ln_x, floor_u(&a));
    let (wx, wy) = window(&ln_x, &ln_ahat, x_floor)?;
    let (reg, fit) = classify_growth(&wx, &wy)?;
    let mut young = YoungFn::new(a.near_zero(), reg)?;
    for note in &notes {
        young.push_note(note.clone());
    }
    Ok(AHat { young, table, fit, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_for_square() {
        let a = YoungFn::power(2.0).unwrap();
        let h = h_construct(&a, 3, 1).unwrap();
        assert!(!h.converges_at_infinity);
        for tau in [1e-6, 0.3, 1.0, 50.0, 1e9] {
            let want = (2.0 * f64::sqrt(tau)).powf(2.0 / 3.0);
            let got = h.table.eval(tau);
            assert!((got / want - 1.0).abs() < 1e-6, "tau = {tau}: {got} vs {want}");
        }
    }

    #[test]
    fn convergence_flags() {
        let k = 0.5;
        assert!(converges_at_infinity(&Regime::power(4.0), k));
        assert!(!converges_at_infinity(&Regime::power(3.0), k));
        assert!(converges_at_infinity(&Regime::power_log(3.0, 2.5), k));
        assert!(!converges_at_infinity(&Regime::power_log(3.0, 2.0), k));
        assert!(converges_at_infinity(&Regime::PowerLog { p: 3.0, alpha: 2.0, gamma: 3.0 }, k));
        let h = h_construct(&YoungFn::power(4.0).unwrap(), 3, 1).unwrap();
        assert!(h.converges_at_infinity && h.limit.unwrap().is_finite());
    }

    #[test]
    fn conjugate_of_square_is_sixth_power() {
        let c = orlicz_sobolev_conjugate(&YoungFn::power(2.0).unwrap(), 3, 1).unwrap();
        match c.near_infinity() {
            Regime::PowerLog { p, alpha, .. } => {
                assert!((p - 6.0).abs() < 0.02, "p = {p}");
                assert!(alpha.abs() < 0.05, "alpha = {alpha}");
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn conjugate_at_critical_power_is_exponential() {
        let c = orlicz_sobolev_conjugate(&YoungFn::power(3.0).unwrap(), 3, 1).unwrap();
        assert!(matches!(c.near_infinity(), Regime::ExpPower { beta } if (beta - 1.5).abs() < 0.05), "{:?}", c.near_infinity());
    }

    #[test]
    fn conjugate_with_critical_log_is_double_exponential() {
        let a = YoungFn::new(Regime::power(3.0), Regime::power_log(3.0, 2.0)).unwrap();
        let c = orlicz_sobolev_conjugate(&a, 3, 1).unwrap();
        assert!(
            matches!(c.near_infinity(), Regime::DoubleExpPower { beta } if (beta - 1.5).abs() < 0.1),
            "{:?}",
            c.near_infinity()
        );
    }

    #[test]
    fn supercritical_conjugate_is_capped() {
        let c = orlicz_sobolev_conjugate(&YoungFn::power(4.0).unwrap(), 3, 1).unwrap();
        assert!(matches!(c.near_infinity(), Regime::InfiniteCap { .. }));
    }

    /// For `A = t^p` the chain is explicit: `J = p^{-k} t^e / e` with
    /// `e = 1 - (p-1)k`, `K(r) = e^{n/m} r^{1-n/m} / (n/m - 1)`, so
    /// `x = r / C` with `C = (e^{n/m} / (n/m - 1))^k` and `Â(x) = C^{p-1} x^p`.
    #[test]
    fn a_hat_identity_chain() {
        let (n, m) = (3u32, 1u32);
        for p in [1.5, 2.0, 2.5] {
            let a = YoungFn::power(p).unwrap();
            let ah = a_hat_construct(&a, n, m).unwrap();
            let k = 0.5;
            let nm = 3.0;
            let e = 1.0 - (p - 1.0) * k;
            let c = (e.powf(nm) / (nm - 1.0)).powf(k);
            for x in [1e-3f64, 0.5, 2.0, 1e4] {
                let want = c.powf(p - 1.0) * x.powf(p);
                let got = ah.table.eval(x);
                assert!((got / want - 1.0).abs() < 1e-5, "p={p} x={x}: {got} vs {want}");
            }
            match ah.young.near_infinity() {
                Regime::PowerLog { p: q, .. } => assert!((q - p).abs() < 0.02),
                r => panic!("{r:?}"),
            }
        }
    }

    #[test]
    fn a_hat_at_critical_power_with_log() {
        let a = YoungFn::new(Regime::power(3.0), Regime::power_log(3.0, 1.0)).unwrap();
        let ah = a_hat_construct(&a, 3, 1).unwrap();
        match ah.young.near_infinity() {
            Regime::PowerLog { p, alpha, .. } => {
                assert!((p - 3.0).abs() < 0.05, "p = {p}");
                // x ~ r log^{3/2} r feeds log log corrections into the fitted
                // log power over the finite window.
                assert!((alpha + 2.0).abs() < 1.0, "alpha = {alpha}");
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn a_hat_rejects_convergent_case() {
        assert!(matches!(a_hat_construct(&YoungFn::power(4.0).unwrap(), 3, 1), Err(Error::Precondition(_))));
    }
}
