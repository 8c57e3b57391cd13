use super::Regime;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Outcome of fitting a regime to tabulated growth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub level: u8,
    pub relative_residual: f64,
    pub window: (f64, f64),
}

pub const RESIDUAL_TOL: f64 = 0.05;

/// Least squares with a small design matrix via normal equations.
fn lstsq(cols: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let k = cols.len();
    let mut m = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
        }
        m[i][k] = cols[i].iter().zip(y).map(|(a, b)| a * b).sum();
    }
    for c in 0..k {
        let p = (c..k).max_by(|a, b| m[*a][c].abs().partial_cmp(&m[*b][c].abs()).unwrap())?;
        m.swap(c, p);
        if m[c][c].abs() < 1e-300 {
            return None;
        }
        for r in 0..k {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..=k {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..k).map(|i| m[i][k] / m[i][i]).collect();
    let mut ss = 0.0;
    for (idx, yy) in y.iter().enumerate() {
        let pred: f64 = (0..k).map(|i| coef[i] * cols[i][idx]).sum();
        ss += (yy - pred).powi(2);
    }
    Some((coef, (ss / y.len() as f64).sqrt()))
}

fn rel_resid(y: &[f64], rms: f64) -> f64 {
    let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        rms / (hi - lo)
    } else {
        f64::INFINITY
    }
}

/// Classifies growth from samples `(x, y) = (ln t, ln F(t))` by regressing
/// `y`, `ln y` and `ln ln y` in turn and accepting the first fit with
/// relative residual below 5%.
pub fn classify_growth(x: &[f64], y: &[f64]) -> Result<(Regime, FitReport)> {
    if x.len() < 8 || x.len() != y.len() {
        return Err(Error::ClassificationAmbiguous("too few samples".into()));
    }
    let ones = vec![1.0; x.len()];
    let window = (x[0], x[x.len() - 1]);
    let lx: Vec<f64> = x.iter().map(|v| (1.0 + v.max(0.0)).ln()).collect();
    let mut best = f64::INFINITY;
    if let Some((c, rms)) = lstsq(&[ones.clone(), x.to_vec(), lx], y) {
        let r = rel_resid(y, rms);
        best = best.min(r);
        if r < RESIDUAL_TOL && c[1] >= 1.0 - 0.05 {
            let regime = Regime::PowerLog { p: c[1].max(1.0), alpha: c[2], gamma: 0.0 };
            return Ok((regime, FitReport { level: 1, relative_residual: r, window }));
        }
    }
    if y.iter().all(|v| *v > 0.0) {
        let y2: Vec<f64> = y.iter().map(|v| v.ln()).collect();
        if let Some((c, rms)) = lstsq(&[ones.clone(), x.to_vec()], &y2) {
            let r = rel_resid(&y2, rms);
            best = best.min(r);
            if r < RESIDUAL_TOL && c[1] > 0.0 {
                return Ok((Regime::ExpPower { beta: c[1] }, FitReport { level: 2, relative_residual: r, window }));
            }
        }
        if y2.iter().all(|v| *v > 0.0) {
            let y3: Vec<f64> = y2.iter().map(|v| v.ln()).collect();
            if let Some((c, rms)) = lstsq(&[ones, x.to_vec()], &y3) {
                let r = rel_resid(&y3, rms);
                best = best.min(r);
                if r < RESIDUAL_TOL && c[1] > 0.0 {
                    let reg = Regime::DoubleExpPower { beta: c[1] };
                    return Ok((reg, FitReport { level: 3, relative_residual: r, window }));
                }
            }
        }
    }
    Err(Error::ClassificationAmbiguous(format!("best relative residual {best:.3} exceeds {RESIDUAL_TOL}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (0..200).map(|i| 9.0 + 9.2 * i as f64 / 199.0).collect()
    }

    #[test]
    fn recovers_power_log() {
        let x = grid();
        let y: Vec<f64> = x.iter().map(|u| 2.5 * u + 1.5 * (1.0 + u).ln()).collect();
        let (r, f) = classify_growth(&x, &y).unwrap();
        assert_eq!(f.level, 1);
        match r {
            Regime::PowerLog { p, alpha, .. } => {
                assert!((p - 2.5).abs() < 1e-8 && (alpha - 1.5).abs() < 1e-6);
            }
            _ => panic!("{r:?}"),
        }
    }

    #[test]
    fn recovers_exponentials() {
        let x: Vec<f64> = (0..200).map(|i| -2.0 + 4.0 * i as f64 / 199.0).collect();
        let y: Vec<f64> = x.iter().map(|u| (1.5 * u).exp()).collect();
        let (r, _) = classify_growth(&x, &y).unwrap();
        assert!(matches!(r, Regime::ExpPower { beta } if (beta - 1.5).abs() < 1e-8), "{r:?}");
        let y: Vec<f64> = x.iter().map(|u| (1.5 * u).exp().exp()).collect();
        let (r, _) = classify_growth(&x, &y).unwrap();
        assert!(matches!(r, Regime::DoubleExpPower { beta } if (beta - 1.5).abs() < 1e-6), "{r:?}");
    }
}
