//! Convolution counts: `N(T)` and diagonal strata, exact in big integers.
//!
//! The number of tuples `(x_2, ..., x_r)` with `prod height(x_k)^{m_k} <= T`
//! factors through the height histogram: it is the iterated convolution
//! `sum over (n_2..n_r) with prod n_k^{m_k} <= T of prod h(n_k)`. Factors are
//! processed in descending exponent order so the threshold lattice is pruned
//! earliest; the last factor is a cumulative lookup.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::histogram::{integer_root, HeightHistogram};
use crate::pgl2::ModelConfig;
use crate::{Error, Result};

/// `N(T)` over a grid of thresholds, with the model it was computed for.
#[derive(Debug, Clone)]
pub struct CountCurve {
    thresholds: Vec<u128>,
    values: Vec<BigUint>,
    cfg: ModelConfig,
}

impl CountCurve {
    pub fn new(thresholds: Vec<u128>, values: Vec<BigUint>, cfg: ModelConfig) -> Result<Self> {
        if thresholds.len() != values.len() {
            return Err(Error::DimensionMismatch {
                context: "curve thresholds vs values",
                expected: thresholds.len(),
                got: values.len(),
            });
        }
        if !thresholds.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::DegenerateGrid(
                "thresholds must be strictly increasing".into(),
            ));
        }
        if !values.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::DegenerateGrid("values must be nondecreasing".into()));
        }
        Ok(Self {
            thresholds,
            values,
            cfg,
        })
    }

    pub fn thresholds(&self) -> &[u128] {
        &self.thresholds
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn cfg(&self) -> &ModelConfig {
        &self.cfg
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }
}

/// One convolution factor: exponent and an optional cap on the factor height.
#[derive(Debug, Clone, Copy)]
struct Factor {
    exponent: u32,
    cap: u64,
}

fn convolve(hist: &HeightHistogram, factors: &[Factor], budget: u128) -> BigUint {
    match factors.split_first() {
        None => BigUint::one(),
        Some((first, rest)) => {
            let limit = integer_root(budget, first.exponent).min(first.cap);
            if rest.is_empty() {
                return BigUint::from(hist.cumulative(limit));
            }
            let mut total = BigUint::zero();
            for n in 1..=limit {
                let h = hist.h(n as u32);
                if h == 0 {
                    continue;
                }
                let inner = convolve(hist, rest, budget / (n as u128).pow(first.exponent));
                total += BigUint::from(h) * inner;
            }
            total
        }
    }
}

/// Coverage check: every counted tuple must have all factor heights within
/// the histogram bound.
fn check_coverage(hist: &HeightHistogram, min_exponent: u32, t: u128) -> Result<()> {
    let required = integer_root(t, min_exponent);
    if required > hist.bound() as u64 {
        return Err(Error::HistogramTooShort {
            bound: hist.bound(),
            required: u32::try_from(required).unwrap_or(u32::MAX),
            t,
        });
    }
    Ok(())
}

fn count_with_factors(hist: &HeightHistogram, mut factors: Vec<Factor>, t: u128) -> BigUint {
    // descending exponents prune the lattice earliest
    factors.sort_by(|a, b| b.exponent.cmp(&a.exponent));
    convolve(hist, &factors, t)
}

/// Exact `N(T)`: number of rational points of the open orbit with
/// `H_L <= T`.
pub fn count_points(hist: &HeightHistogram, cfg: &ModelConfig, t: u128) -> Result<BigUint> {
    check_coverage(hist, cfg.min_degree(), t)?;
    let factors = cfg
        .degrees()
        .iter()
        .map(|&m| Factor {
            exponent: m,
            cap: u64::MAX,
        })
        .collect();
    Ok(count_with_factors(hist, factors, t))
}

/// Count of tuples in the ball with `x_i = x_j` (for `i >= 2`, via the
/// merged-degree convolution) or `x_j = e` (for `i = 1`).
pub fn count_on_small_diagonal(
    hist: &HeightHistogram,
    cfg: &ModelConfig,
    t: u128,
    i: usize,
    j: usize,
) -> Result<BigUint> {
    if i < 1 || j <= i || j > cfg.r() {
        return Err(Error::IndexOutOfRange { i, j, r: cfg.r() });
    }
    if t == 0 {
        return Err(Error::EmptyBall(t));
    }
    let mut factors = Vec::new();
    for k in 2..=cfg.r() {
        if k == j {
            continue;
        }
        let exponent = if i >= 2 && k == i {
            cfg.degree_of_factor(i) + cfg.degree_of_factor(j)
        } else {
            cfg.degree_of_factor(k)
        };
        factors.push(Factor {
            exponent,
            cap: u64::MAX,
        });
    }
    if factors.is_empty() {
        // r = 2: only the identity coset
        return Ok(BigUint::one());
    }
    let min_exp = factors.iter().map(|f| f.exponent).min().unwrap();
    check_coverage(hist, min_exp, t)?;
    Ok(count_with_factors(hist, factors, t))
}

/// `N(T)` with the height of factor `j` clamped to at most `cap`; used by
/// the saturation profile.
pub fn count_points_clamped(
    hist: &HeightHistogram,
    cfg: &ModelConfig,
    t: u128,
    j: usize,
    cap: u64,
) -> Result<BigUint> {
    if j < 2 || j > cfg.r() {
        return Err(Error::IndexOutOfRange { i: 1, j, r: cfg.r() });
    }
    check_coverage(hist, cfg.min_degree(), t)?;
    let factors = (2..=cfg.r())
        .map(|k| Factor {
            exponent: cfg.degree_of_factor(k),
            cap: if k == j { cap } else { u64::MAX },
        })
        .collect();
    Ok(count_with_factors(hist, factors, t))
}

/// Evaluates `count_points` over a threshold grid.
pub fn count_curve(hist: &HeightHistogram, cfg: &ModelConfig, grid: &[u128]) -> Result<CountCurve> {
    let values = grid
        .iter()
        .map(|&t| count_points(hist, cfg, t))
        .collect::<Result<Vec<_>>>()?;
    CountCurve::new(grid.to_vec(), values, cfg.clone())
}
