use crate::extf64;
use serde::{Deserialize, Serialize};

/// Growth regime of a Young function near 0 or near infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Regime {
    /// `t^p (1+log t)^alpha (1+log(1+log t))^gamma`, with `log(1/t)` in
    /// place of `log t` near 0.
    PowerLog {
        p: f64,
        #[serde(default)]
        alpha: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        gamma: f64,
    },
    /// `e^{t^beta}`.
    ExpPower { beta: f64 },
    /// `e^{e^{t^beta}}`.
    DoubleExpPower { beta: f64 },
    /// `+inf` beyond `t0`.
    InfiniteCap {
        #[serde(with = "extf64")]
        t0: f64,
    },
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl Regime {
    pub fn power(p: f64) -> Self {
        Regime::PowerLog { p, alpha: 0.0, gamma: 0.0 }
    }

    pub fn power_log(p: f64, alpha: f64) -> Self {
        Regime::PowerLog { p, alpha, gamma: 0.0 }
    }

    /// Rank used to order regimes near infinity.
    pub fn growth_rank(&self) -> u8 {
        match self {
            Regime::PowerLog { .. } => 0,
            Regime::ExpPower { .. } => 1,
            Regime::DoubleExpPower { .. } => 2,
            Regime::InfiniteCap { .. } => 3,
        }
    }

    /// `ln φ(e^u)` for the basis function of this regime.
    pub fn ln_basis(&self, u: f64, near_zero: bool) -> f64 {
        match *self {
            Regime::PowerLog { p, alpha, gamma } => {
                let lg = if near_zero { (-u).max(0.0) } else { u.max(0.0) };
                let l1 = 1.0 + lg;
                let mut v = p * u;
                if alpha != 0.0 {
                    v += alpha * l1.ln();
                }
                if gamma != 0.0 {
                    v += gamma * (1.0 + l1.ln()).ln();
                }
                v
            }
            Regime::ExpPower { beta } => (beta * u).exp(),
            Regime::DoubleExpPower { beta } => (beta * u).exp().exp(),
            Regime::InfiniteCap { t0 } => {
                if u > t0.ln() {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `ln φ(e^u)` split as `slope * u + rest`, so that callers can cancel
    /// the linear part exactly for huge `u`.
    pub fn ln_basis_parts(&self, u: f64, near_zero: bool) -> (f64, f64) {
        match *self {
            Regime::PowerLog { p, alpha, gamma } => {
                let rest = Regime::PowerLog { p: 0.0, alpha, gamma }.ln_basis(u, near_zero);
                (p, rest)
            }
            _ => (0.0, self.ln_basis(u, near_zero)),
        }
    }

    /// `d ln φ / d ln t` at `t = e^u`.
    pub fn log_slope(&self, u: f64, near_zero: bool) -> f64 {
        match *self {
            Regime::PowerLog { p, alpha, gamma } => {
                let lg = if near_zero { (-u).max(0.0) } else { u.max(0.0) };
                if lg == 0.0 && u != 0.0 {
                    return p;
                }
                let l1 = 1.0 + lg;
                let l2 = 1.0 + l1.ln();
                let sgn = if near_zero { -1.0 } else { 1.0 };
                p + sgn * (alpha / l1 + gamma / (l1 * l2))
            }
            Regime::ExpPower { beta } => beta * (beta * u).exp(),
            Regime::DoubleExpPower { beta } => {
                let tb = (beta * u).exp();
                beta * tb * tb.exp()
            }
            Regime::InfiniteCap { .. } => f64::NAN,
        }
    }

    /// `ln φ'(e^u)`.
    pub fn ln_basis_density(&self, u: f64, near_zero: bool) -> f64 {
        let k = self.log_slope(u, near_zero);
        if !(k > 0.0) {
            return f64::NEG_INFINITY;
        }
        self.ln_basis(u, near_zero) + k.ln() - u
    }

    pub fn basis(&self, t: f64, near_zero: bool) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.ln_basis(t.ln(), near_zero).exp()
    }

    pub fn basis_density(&self, t: f64, near_zero: bool) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.ln_basis_density(t.ln(), near_zero).exp()
    }

    pub fn describe(&self) -> String {
        match *self {
            Regime::PowerLog { p, alpha, gamma } => {
                let mut s = format!("t^{p}");
                if alpha != 0.0 {
                    s += &format!(" log^{alpha}");
                }
                if gamma != 0.0 {
                    s += &format!(" loglog^{gamma}");
                }
                s
            }
            Regime::ExpPower { beta } => format!("exp(t^{beta})"),
            Regime::DoubleExpPower { beta } => format!("exp(exp(t^{beta}))"),
            Regime::InfiniteCap { t0 } => format!("inf beyond {t0}"),
        }
    }
}
