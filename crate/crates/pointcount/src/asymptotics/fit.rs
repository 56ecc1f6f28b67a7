//! Least-squares fits of count curves against the model
//! `c * T^a * (log T)^(b-1)` and well-roundedness ratios.

use num_traits::ToPrimitive;

use crate::enumeration::{count_points, CountCurve, HeightHistogram};
use crate::pgl2::ModelConfig;
use crate::picard::Rational;
use crate::{Error, Result};

/// Fitted exponents and constant. `b_hat` is a continuous parameter; no
/// rounding to the integer prediction is applied.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FitReport {
    pub a_hat: f64,
    pub b_hat: f64,
    pub c_hat: f64,
    pub residual_norm: f64,
    pub grid: Vec<(u128, f64)>,
}

fn float_grid(curve: &CountCurve) -> Result<Vec<(u128, f64)>> {
    if curve.len() < 6 {
        return Err(Error::DegenerateGrid(format!(
            "need at least 6 grid points, got {}",
            curve.len()
        )));
    }
    let lo = curve.thresholds()[0];
    let hi = curve.thresholds()[curve.len() - 1];
    if hi < lo.saturating_mul(100) {
        return Err(Error::DegenerateGrid(
            "grid must span at least two decades".into(),
        ));
    }
    if lo < 2 {
        return Err(Error::DegenerateGrid(
            "grid thresholds must be at least 2 (log T must be positive)".into(),
        ));
    }
    curve
        .thresholds()
        .iter()
        .zip(curve.values())
        .map(|(&t, n)| {
            let n = n.to_f64().filter(|&x| x > 0.0).ok_or(Error::EmptyBall(t))?;
            Ok((t, n))
        })
        .collect()
}

/// Solves the 3x3 system `m x = rhs` by Gaussian elimination with partial
/// pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Result<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col].abs() < 1e-12 {
            return Err(Error::DegenerateGrid("singular normal equations".into()));
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = rhs[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Weighted least-squares fit of
/// `log N = a_hat * log T + (b_hat - 1) * log log T + log c_hat`
/// with weights proportional to `log T`.
pub fn exponent_probe(curve: &CountCurve) -> Result<FitReport> {
    let grid = float_grid(curve)?;
    let mut normal = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for &(t, n) in &grid {
        let lt = (t as f64).ln();
        let row = [lt, lt.ln(), 1.0];
        let y = n.ln();
        let w = lt;
        for a in 0..3 {
            for b in 0..3 {
                normal[a][b] += w * row[a] * row[b];
            }
            rhs[a] += w * row[a] * y;
        }
    }
    let [a_hat, b_minus_1, log_c] = solve3(normal, rhs)?;
    let residual_norm = grid
        .iter()
        .map(|&(t, n)| {
            let lt = (t as f64).ln();
            let pred = a_hat * lt + b_minus_1 * lt.ln() + log_c;
            (n.ln() - pred).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    Ok(FitReport {
        a_hat,
        b_hat: b_minus_1 + 1.0,
        c_hat: log_c.exp(),
        residual_norm,
        grid,
    })
}

/// Best constant for fixed exponents `(a, b)`, with relative residuals
/// `N / model - 1` per grid point.
pub fn fit_constant(curve: &CountCurve, a: Rational, b: u32) -> Result<(f64, Vec<f64>)> {
    let grid = float_grid(curve)?;
    let a = *a.numer() as f64 / *a.denom() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(t, n) in &grid {
        let lt = (t as f64).ln();
        let w = lt;
        num += w * (n.ln() - a * lt - f64::from(b - 1) * lt.ln());
        den += w;
    }
    let c_hat = (num / den).exp();
    let residuals = grid
        .iter()
        .map(|&(t, n)| {
            let lt = (t as f64).ln();
            n / (c_hat * lt.powi(i32::try_from(b - 1).unwrap()) * (t as f64).powf(a)) - 1.0
        })
        .collect();
    Ok((c_hat, residuals))
}

/// Per-threshold well-roundedness ratios `(N(kT) - N(T/k)) / N(T)` and
/// their supremum over the top half of the grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WellRoundedness {
    pub kappa: f64,
    pub ratios: Vec<(u128, f64)>,
    pub sup_top_half: f64,
}

pub fn well_roundedness(
    hist: &HeightHistogram,
    cfg: &ModelConfig,
    grid: &[u128],
    kappa: f64,
) -> Result<WellRoundedness> {
    if !(kappa > 1.0) {
        return Err(Error::InvalidConfig("kappa must exceed 1".into()));
    }
    let mut ratios = Vec::with_capacity(grid.len());
    for &t in grid {
        let up = (t as f64 * kappa).floor() as u128;
        let down = (t as f64 / kappa).floor() as u128;
        let n = count_points(hist, cfg, t)?
            .to_f64()
            .filter(|&x| x > 0.0)
            .ok_or(Error::EmptyBall(t))?;
        let n_up = count_points(hist, cfg, up)?.to_f64().unwrap_or(f64::MAX);
        let n_down = count_points(hist, cfg, down)?.to_f64().unwrap_or(0.0);
        ratios.push((t, (n_up - n_down) / n));
    }
    let half = ratios.len() / 2;
    let sup_top_half = ratios[half..]
        .iter()
        .map(|&(_, r)| r)
        .fold(0.0f64, f64::max);
    Ok(WellRoundedness {
        kappa,
        ratios,
        sup_top_half,
    })
}
