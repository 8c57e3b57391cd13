//! Young functions described by their regimes near 0 and near infinity.

mod classify;
mod construct;
mod domination;
mod regime;

pub use construct::{a_hat_construct, converges_at_infinity, h_construct, orlicz_sobolev_conjugate, AHat, HFunction, Tabulated};

pub use classify::{classify_growth, FitReport};

pub use domination::{dominates, dominates_numeric, equivalent, DominationVerdict, RegimeScope};
pub use regime::Regime;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const SCAN_STEP: f64 = 0.01;
const SCAN_SPAN: f64 = 60.0;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    /// `κ φ∞` beyond the splice point.
    Multiplicative { kappa: f64 },
    /// `φ0(s0) + φ∞(t) - φ∞(s0)` beyond the splice point.
    Offset,
    /// `φ0` up to `z`, its tangent line up to `t1`, then the tangent plus the
    /// convex excess of `φ∞` over its own tangent at `t1`.
    Tangent { z: f64, t1: f64 },
    /// Base shape (`φ0`, then its tangent line beyond `z`) capped at `t0`.
    Cap { z: f64, t0: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct YoungSpec {
    near_zero: Regime,
    near_infinity: Regime,
    #[serde(default = "one")]
    splice_point: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

fn one() -> f64 {
    1.0
}

/// A Young function `A`: convex, `A(0) = 0`, left-continuous with values in
/// `[0, inf]`, assembled from a regime near 0 and one near infinity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "YoungSpec", into = "YoungSpec")]
pub struct YoungFn {
    near_zero: Regime,
    near_infinity: Regime,
    splice_point: f64,
    notes: Vec<String>,
    shape: Shape,
    // Cached values at the splice construction points.
    z_val: f64,
    z_der: f64,
    t1_val: f64,
    t1_der: f64,
}

impl PartialEq for YoungFn {
    fn eq(&self, o: &Self) -> bool {
        self.near_zero == o.near_zero && self.near_infinity == o.near_infinity && self.splice_point == o.splice_point
    }
}

impl TryFrom<YoungSpec> for YoungFn {
    type Error = Error;
    fn try_from(s: YoungSpec) -> Result<Self> {
        let mut y = YoungFn::with_splice(s.near_zero, s.near_infinity, s.splice_point)?;
        y.notes = s.notes;
        Ok(y)
    }
}

impl From<YoungFn> for YoungSpec {
    fn from(y: YoungFn) -> Self {
        YoungSpec {
            near_zero: y.near_zero,
            near_infinity: y.near_infinity,
            splice_point: y.splice_point,
            notes: y.notes,
        }
    }
}

fn validate_zero(r: &Regime) -> Result<()> {
    match *r {
        Regime::PowerLog { p, alpha, gamma } => {
            if !(p.is_finite() && alpha.is_finite()) || gamma != 0.0 {
                return Err(Error::InvalidYoung("near-zero regime needs finite p, alpha and gamma = 0".into()));
            }
            if p < 1.0 || (p == 1.0 && alpha > 0.0) {
                return Err(Error::InvalidYoung(format!(
                    "t^{p} log^{alpha} near 0 is not the germ of a convex function vanishing at 0"
                )));
            }
            Ok(())
        }
        _ => Err(Error::InvalidYoung("near-zero regime must be PowerLog".into())),
    }
}

fn validate_inf(r: &Regime) -> Result<()> {
    match *r {
        Regime::PowerLog { p, alpha, gamma } => {
            if !(p.is_finite() && alpha.is_finite() && gamma.is_finite()) {
                return Err(Error::InvalidYoung("non-finite PowerLog parameters".into()));
            }
            let ok = p > 1.0 || (p == 1.0 && (alpha > 0.0 || (alpha == 0.0 && gamma >= 0.0)));
            if !ok {
                return Err(Error::InvalidYoung(format!("t^{p} log^{alpha} grows slower than t near infinity")));
            }
            Ok(())
        }
        Regime::ExpPower { beta } | Regime::DoubleExpPower { beta } => {
            if beta > 0.0 && beta.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidYoung("exponential regimes need beta > 0".into()))
            }
        }
        Regime::InfiniteCap { t0 } => {
            if t0 > 0.0 && t0.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidYoung("cap point must be positive and finite".into()))
            }
        }
    }
}

/// End of the convex region of `φ0` below `s0`, scanning `ln φ0'`.
fn convex_end(r: &Regime, s0: f64) -> f64 {
    let top = s0.ln();
    let n = (SCAN_SPAN / SCAN_STEP) as usize;
    let mut prev = r.ln_basis_density(top - SCAN_SPAN, true);
    for i in (0..n).rev() {
        let u = top - SCAN_STEP * i as f64;
        let g = r.ln_basis_density(u, true);
        if !(g >= prev - 1e-12) || g == f64::NEG_INFINITY {
            return (u - SCAN_STEP).exp();
        }
        prev = g;
    }
    s0
}

/// Start of the convex region of `φ∞` above `s0`.
fn convex_start(r: &Regime, s0: f64) -> Result<f64> {
    let bottom = s0.ln();
    let n = (SCAN_SPAN / SCAN_STEP) as usize;
    let mut prev = r.ln_basis_density(bottom + SCAN_SPAN, false);
    for i in (0..n).rev() {
        let u = bottom + SCAN_STEP * i as f64;
        let g = r.ln_basis_density(u, false);
        if !(g <= prev + 1e-12) || g == f64::NEG_INFINITY {
            if i + 1 >= n {
                return Err(Error::InvalidYoung("near-infinity regime is not eventually convex".into()));
            }
            return Ok((u + SCAN_STEP).exp());
        }
        prev = g;
    }
    Ok(s0)
}

impl YoungFn {
    pub fn new(near_zero: Regime, near_infinity: Regime) -> Result<Self> {
        YoungFn::with_splice(near_zero, near_infinity, 1.0)
    }

    /// `t^p` on all of `(0, inf)`.
    pub fn power(p: f64) -> Result<Self> {
        YoungFn::new(Regime::power(p), Regime::power(p))
    }

    pub fn with_splice(near_zero: Regime, near_infinity: Regime, s0: f64) -> Result<Self> {
        validate_zero(&near_zero)?;
        validate_inf(&near_infinity)?;
        if !(s0 > 0.0 && s0.is_finite()) {
            return Err(Error::InvalidYoung("splice point must be positive".into()));
        }
        let z = convex_end(&near_zero, s0);
        let f0 = |t: f64| near_zero.basis(t, true);
        let d0 = |t: f64| near_zero.basis_density(t, true);
        let mut y = YoungFn {
            near_zero,
            near_infinity,
            splice_point: s0,
            notes: Vec::new(),
            shape: Shape::Offset,
            z_val: 0.0,
            z_der: 0.0,
            t1_val: 0.0,
            t1_der: 0.0,
        };
        if let Regime::InfiniteCap { t0 } = near_infinity {
            y.shape = Shape::Cap { z, t0 };
            y.z_val = f0(z);
            y.z_der = d0(z);
            return Ok(y);
        }
        let t1 = convex_start(&near_infinity, s0)?;
        let fi = |t: f64| near_infinity.basis(t, false);
        let di = |t: f64| near_infinity.basis_density(t, false);
        let at_splice = z >= s0 * (1.0 - 1e-12) && t1 <= s0 * (1.0 + 1e-12);
        y.z_val = f0(s0.min(z));
        y.z_der = d0(s0.min(z));
        match near_infinity {
            Regime::PowerLog { .. } => {
                let l0 = near_zero.log_slope(s0.ln(), true);
                let li = near_infinity.log_slope(s0.ln(), false);
                if at_splice && l0 <= li + 1e-12 {
                    y.shape = Shape::Multiplicative { kappa: f0(s0) / fi(s0) };
                    y.z_val = f0(s0);
                    return Ok(y);
                }
            }
            _ => {
                if at_splice && di(s0) >= d0(s0) {
                    y.shape = Shape::Offset;
                    y.z_val = f0(s0);
                    y.t1_val = fi(s0);
                    return Ok(y);
                }
            }
        }
        let t1 = t1.max(z);
        y.shape = Shape::Tangent { z, t1 };
        y.z_val = f0(z);
        y.z_der = d0(z);
        y.t1_val = fi(t1);
        y.t1_der = di(t1);
        Ok(y)
    }

    pub fn near_zero(&self) -> Regime {
        self.near_zero
    }
    pub fn near_infinity(&self) -> Regime {
        self.near_infinity
    }
    pub fn splice_point(&self) -> f64 {
        self.splice_point
    }
    pub fn notes(&self) -> &[String] {
        &self.notes
    }
    pub fn push_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Point beyond which the value is `+inf`, if any.
    pub fn cap(&self) -> Option<f64> {
        match self.shape {
            Shape::Cap { t0, .. } => Some(t0),
            _ => None,
        }
    }

    /// Point up to which `A` coincides with its near-zero basis.
    fn zero_end(&self) -> f64 {
        match self.shape {
            Shape::Multiplicative { .. } | Shape::Offset => self.splice_point,
            Shape::Tangent { z, .. } => z,
            Shape::Cap { z, t0 } => z.min(t0),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        if let Some(t0) = self.cap() {
            if t > t0 {
                return f64::INFINITY;
            }
        }
        let ze = self.zero_end();
        if t <= ze {
            return self.near_zero.basis(t, true);
        }
        let fi = |t: f64| self.near_infinity.basis(t, false);
        match self.shape {
            Shape::Multiplicative { kappa } => kappa * fi(t),
            Shape::Offset => self.z_val + (fi(t) - self.t1_val),
            Shape::Tangent { z, t1 } => {
                let lin = self.z_val + self.z_der * (t - z);
                if t <= t1 {
                    lin
                } else {
                    lin + (fi(t) - self.t1_val - self.t1_der * (t - t1))
                }
            }
            Shape::Cap { z, .. } => self.z_val + self.z_der * (t - z),
        }
    }

    /// Right-continuous density `a = A'`.
    pub fn density(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        if let Some(t0) = self.cap() {
            if t >= t0 {
                return f64::INFINITY;
            }
        }
        let ze = self.zero_end();
        if t < ze {
            return self.near_zero.basis_density(t, true);
        }
        let di = |t: f64| self.near_infinity.basis_density(t, false);
        match self.shape {
            Shape::Multiplicative { kappa } => kappa * di(t),
            Shape::Offset => di(t),
            Shape::Tangent { t1, .. } => {
                if t < t1 {
                    self.z_der
                } else {
                    self.z_der + (di(t) - self.t1_der)
                }
            }
            Shape::Cap { .. } => self.z_der,
        }
    }

    /// `ln A(e^u)` without overflow.
    pub fn ln_eval_log(&self, u: f64) -> f64 {
        if let Some(t0) = self.cap() {
            if u > t0.ln() {
                return f64::INFINITY;
            }
        }
        if u <= self.zero_end().ln() {
            return self.near_zero.ln_basis(u, true);
        }
        let li = self.near_infinity.ln_basis(u, false);
        let far = match self.shape {
            Shape::Multiplicative { kappa } => kappa.ln() + li,
            Shape::Cap { .. } => f64::NAN,
            _ => li,
        };
        if far > 600.0 {
            return far;
        }
        self.eval(u.exp()).ln()
    }

    /// `ln A(e^u) = slope * u + rest` with the linear part kept apart.
    pub fn ln_eval_parts(&self, u: f64) -> (f64, f64) {
        if u <= self.zero_end().ln() {
            return self.near_zero.ln_basis_parts(u, true);
        }
        let (sl, rest) = self.near_infinity.ln_basis_parts(u, false);
        let far = sl * u + rest;
        match self.shape {
            Shape::Multiplicative { kappa } => (sl, rest + kappa.ln()),
            Shape::Cap { .. } => (0.0, self.ln_eval_log(u)),
            _ if far > 600.0 => (sl, rest),
            _ => (0.0, self.ln_eval_log(u)),
        }
    }

    /// `ln a(e^u) = slope * u + rest` with the linear part kept apart.
    pub fn ln_density_parts(&self, u: f64) -> (f64, f64) {
        let nz = u < self.zero_end().ln();
        let reg = if nz { self.near_zero } else { self.near_infinity };
        let (sl, rest) = reg.ln_basis_parts(u, nz);
        let k = reg.log_slope(u, nz);
        let far = (sl - 1.0) * u + rest + k.ln();
        if nz {
            return (sl - 1.0, rest + k.ln());
        }
        match self.shape {
            Shape::Multiplicative { kappa } if k > 0.0 => (sl - 1.0, rest + k.ln() + kappa.ln()),
            Shape::Cap { .. } => (0.0, self.ln_density_log(u)),
            _ if far > 600.0 && k > 0.0 => (sl - 1.0, rest + k.ln()),
            _ => (0.0, self.ln_density_log(u)),
        }
    }

    /// `ln a(e^u)` without overflow.
    pub fn ln_density_log(&self, u: f64) -> f64 {
        if let Some(t0) = self.cap() {
            if u >= t0.ln() {
                return f64::INFINITY;
            }
        }
        if u < self.zero_end().ln() {
            return self.near_zero.ln_basis_density(u, true);
        }
        let li = self.near_infinity.ln_basis_density(u, false);
        let far = match self.shape {
            Shape::Multiplicative { kappa } => kappa.ln() + li,
            Shape::Cap { .. } => f64::NAN,
            _ => li,
        };
        if far > 600.0 {
            return far;
        }
        self.density(u.exp()).ln()
    }

    /// `A^{-1}(y) = inf{t >= 0 : A(t) >= y}`. For capped functions values
    /// above `sup A` map to the cap point.
    pub fn generalized_inverse(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Ok(0.0);
        }
        self.generalized_inverse_ln(y.ln()).map_err(|_| Error::UnboundedInverse(y))
    }

    /// `A^{-1}(e^{ly})`, for arguments beyond the range of `f64`.
    pub fn generalized_inverse_ln(&self, ly: f64) -> Result<f64> {
        if ly == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let (mut a, mut b) = (-745.0, 745.0);
        if let Some(t0) = self.cap() {
            b = t0.ln();
            if !(self.eval(t0).ln() >= ly) {
                return Ok(t0);
            }
        } else if !(self.ln_eval_log(b) >= ly) {
            return Err(Error::UnboundedInverse(ly.exp()));
        }
        if self.ln_eval_log(a) >= ly {
            return Ok(a.exp());
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if self.ln_eval_log(m) >= ly {
                b = m;
            } else {
                a = m;
            }
            if b - a < 1e-15 {
                break;
            }
        }
        Ok(match self.cap() {
            Some(t0) => b.exp().min(t0),
            None => b.exp(),
        })
    }

    pub fn describe(&self) -> String {
        format!(
            "{} near 0, {} near inf (splice {})",
            self.near_zero.describe(),
            self.near_infinity.describe(),
            self.splice_point
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_power() {
        let a = YoungFn::power(2.0).unwrap();
        assert!((a.eval(3.0) - 9.0).abs() < 1e-12);
        assert!((a.eval(0.5) - 0.25).abs() < 1e-15);
        assert!((a.generalized_inverse(16.0).unwrap() - 4.0).abs() < 1e-12);
        assert!((a.ln_eval_log(1000.0) - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn multiplicative_splice() {
        let a = YoungFn::new(Regime::power(2.0), Regime::power(3.0)).unwrap();
        assert!((a.eval(0.5) - 0.25).abs() < 1e-15);
        assert!((a.eval(2.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_offset() {
        let a = YoungFn::new(Regime::power(2.0), Regime::ExpPower { beta: 1.5 }).unwrap();
        let want = 1.0 + 2f64.powf(1.5).exp() - 1f64.exp();
        assert!((a.eval(2.0) - want).abs() < 1e-12 * want);
        assert!(a.ln_eval_log(10.0).is_finite());
        assert!((a.ln_eval_log(10.0) - (1.5f64 * 10.0).exp()).abs() < 1e-6);
    }

    #[test]
    fn capped() {
        let a = YoungFn::new(Regime::power(2.0), Regime::InfiniteCap { t0: 3.0 }).unwrap();
        assert_eq!(a.eval(3.5), f64::INFINITY);
        assert!(a.eval(3.0).is_finite());
        assert_eq!(a.generalized_inverse(1e9).unwrap(), 3.0);
    }

    #[test]
    fn unbounded_inverse() {
        let a = YoungFn::power(1.0).unwrap();
        assert!(matches!(a.generalized_inverse(f64::INFINITY), Err(Error::UnboundedInverse(_))));
    }

    #[test]
    fn rejects_concave_germ() {
        assert!(YoungFn::new(Regime::power_log(1.0, 1.0), Regime::power(2.0)).is_err());
        assert!(YoungFn::new(Regime::power(0.5), Regime::power(2.0)).is_err());
    }

    #[test]
    fn convexity_of_spliced_shapes() {
        let cases = [
            YoungFn::new(Regime::power_log(2.0, 3.0), Regime::power_log(1.5, -0.5)).unwrap(),
            YoungFn::new(Regime::power_log(1.0, -1.0), Regime::power_log(3.0, -2.0)).unwrap(),
            YoungFn::new(Regime::power(4.0), Regime::ExpPower { beta: 0.5 }).unwrap(),
            YoungFn::new(Regime::power(2.0), Regime::DoubleExpPower { beta: 1.0 }).unwrap(),
        ];
        for a in &cases {
            let mut prev = 0.0;
            for i in 1..400 {
                let t = 0.02 * i as f64;
                let d = a.density(t);
                assert!(d >= prev * (1.0 - 1e-9), "{}: density drops at {t}", a.describe());
                prev = d;
            }
        }
    }

    #[test]
    fn serde_roundtrip() {
        let a = YoungFn::new(Regime::power_log(2.0, 1.0), Regime::ExpPower { beta: 2.0 }).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let b: YoungFn = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
