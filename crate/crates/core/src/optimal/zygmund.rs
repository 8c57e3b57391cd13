//! Closed-form targets for Zygmund spaces `L^p (log L)^α`.

use super::z::{check_nm, same};
use crate::error::{Error, Result};
use crate::norms::SpaceSpec;
use crate::young::{Regime, YoungFn};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ZygmundE {
    /// Kernel of the optimal `Λ^E(v)` target.
    Young { young: YoungFn },
    /// No Orlicz-Lorentz kernel: the target is `L^∞ & L^p (log L)^α`.
    Supercritical { target: SpaceSpec },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZygmundRow {
    pub p: f64,
    pub alpha: f64,
    pub n: u32,
    pub m: u32,
    /// Optimal Orlicz target.
    pub g: YoungFn,
    pub e: ZygmundE,
    /// Which case of the table applies.
    pub case: String,
}

/// `G` and `E` for `A(t) ≈ t^p (1 + log⁺ t)^α`.
pub fn zygmund_table(p: f64, alpha: f64, n: u32, m: u32) -> Result<ZygmundRow> {
    check_nm(n, m)?;
    if m >= n {
        return Err(Error::Precondition("the Zygmund table needs m < n".into()));
    }
    if !((p == 1.0 && alpha >= 0.0) || p > 1.0) || !p.is_finite() || !alpha.is_finite() {
        return Err(Error::Inadmissible(format!("L^p (log L)^alpha needs p = 1, alpha >= 0 or p > 1; got p = {p}, alpha = {alpha}")));
    }
    let (nf, mf) = (n as f64, m as f64);
    let r = nf / mf;
    let near0 = Regime::power(p);
    let a = YoungFn::new(near0, Regime::power_log(p, alpha))?;
    let (g_inf, e, case) = if p < r && !same(p, r) {
        let d = nf - mf * p;
        (
            Regime::power_log(nf * p / d, nf * alpha / d),
            Some(Regime::power_log(p, alpha)),
            "1 <= p < n/m",
        )
    } else if same(p, r) && alpha < r - 1.0 && !same(alpha, r - 1.0) {
        (
            Regime::ExpPower { beta: nf / (nf - mf - alpha * mf) },
            Some(Regime::power_log(r, alpha - r)),
            "p = n/m, alpha < n/m - 1",
        )
    } else if same(p, r) && same(alpha, r - 1.0) {
        (
            Regime::DoubleExpPower { beta: nf / (nf - mf) },
            Some(Regime::PowerLog { p: r, alpha: -1.0, gamma: -r }),
            "p = n/m, alpha = n/m - 1",
        )
    } else {
        (Regime::InfiniteCap { t0: 1.0 }, None, "otherwise (supercritical)")
    };
    let g = YoungFn::new(near0, g_inf)?;
    let e = match e {
        Some(reg) => ZygmundE::Young { young: YoungFn::new(near0, reg)? },
        None => ZygmundE::Supercritical { target: SpaceSpec::intersect(SpaceSpec::linf(), SpaceSpec::orlicz(a)) },
    };
    Ok(ZygmundRow { p, alpha, n, m, g, e, case: case.into() })
}
