//! Monte Carlo estimation of near-diagonal fractions.
//!
//! Exact joint conditions on `height(x_i^{-1} x_j)` break the product
//! structure of the count, so the fraction of counted tuples with some pair
//! within distance `K` of the diagonal is sampled: factor heights are drawn
//! proportionally to their exact contribution to `N(T)` (the histogram is
//! the proposal), then an actual matrix of that height is drawn uniformly by
//! rejection. Deterministic given the seed.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::counting::count_points;
use super::histogram::{integer_root, HeightHistogram};
use crate::pgl2::{ModelConfig, PrimitiveMatrix};
use crate::{Error, Result};

/// Estimate with a 95% binomial confidence radius.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct NearDiagonalEstimate {
    pub fraction: f64,
    pub radius: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Counts tuples over the trailing factor list `degrees[from..]` within
/// `budget`; used for the sequential proposal weights.
fn suffix_count(hist: &HeightHistogram, degrees: &[u32], from: usize, budget: u128) -> BigUint {
    if from == degrees.len() {
        return BigUint::from(1u32);
    }
    let m = degrees[from];
    if from + 1 == degrees.len() {
        return BigUint::from(hist.cumulative(integer_root(budget, m)));
    }
    let mut total = BigUint::zero();
    for n in 1..=integer_root(budget, m) {
        let h = hist.h(n as u32);
        if h == 0 {
            continue;
        }
        total += BigUint::from(h) * suffix_count(hist, degrees, from + 1, budget / (n as u128).pow(m));
    }
    total
}

/// Uniform draw from the sign-normalized primitive nonsingular matrices of
/// height exactly `n`, by rejection from the cube.
fn sample_matrix(rng: &mut ChaCha8Rng, n: u64) -> PrimitiveMatrix {
    let n = n as i64;
    loop {
        let raw: [i64; 4] = [
            rng.gen_range(-n..=n),
            rng.gen_range(-n..=n),
            rng.gen_range(-n..=n),
            rng.gen_range(-n..=n),
        ];
        if raw.iter().map(|e| e.abs()).max() != Some(n) {
            continue;
        }
        let Ok(m) = PrimitiveMatrix::normalize(raw) else {
            continue;
        };
        // only accept primitive representatives so every class is hit by
        // exactly its two signed copies of the cube
        if m.entries().map(i64::abs) != raw.map(i64::abs) {
            continue;
        }
        return m;
    }
}

/// Monte Carlo estimate of the fraction of tuples in the ball `H_L <= T`
/// with `height(x_i^{-1} x_j) <= K` for some `i < j` (with `x_1 = e`).
pub fn near_diagonal_fraction(
    hist: &HeightHistogram,
    cfg: &ModelConfig,
    t: u128,
    k: u64,
    sample_size: u64,
    seed: u64,
) -> Result<NearDiagonalEstimate> {
    if sample_size < 1 {
        return Err(Error::InvalidConfig("sample_size must be >= 1".into()));
    }
    let total = count_points(hist, cfg, t)?;
    if total.is_zero() {
        return Err(Error::EmptyBall(t));
    }
    let degrees: Vec<u32> = cfg.degrees().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..sample_size {
        // draw factor heights sequentially with exact conditional weights
        let mut budget = t;
        let mut heights = Vec::with_capacity(degrees.len());
        for (idx, &m) in degrees.iter().enumerate() {
            let limit = integer_root(budget, m);
            let weights: Vec<f64> = (1..=limit)
                .map(|n| {
                    let h = hist.h(n as u32) as f64;
                    let rest = suffix_count(hist, &degrees, idx + 1, budget / (n as u128).pow(m));
                    h * rest.to_f64().unwrap_or(f64::MAX)
                })
                .collect();
            let sum: f64 = weights.iter().sum();
            let mut target = rng.gen::<f64>() * sum;
            let mut chosen = limit;
            for (n, w) in (1..=limit).zip(&weights) {
                target -= w;
                if target <= 0.0 {
                    chosen = n;
                    break;
                }
            }
            heights.push(chosen);
            budget /= (chosen as u128).pow(m);
        }
        // materialize the tuple, x_1 = identity
        let mut tuple = vec![PrimitiveMatrix::identity()];
        for &n in &heights {
            tuple.push(sample_matrix(&mut rng, n));
        }
        let near = tuple.iter().enumerate().any(|(a, x)| {
            tuple[a + 1..]
                .iter()
                .any(|y| x.inverse().group_op(y).map(|q| q.height() <= k).unwrap_or(false))
        });
        if near {
            hits += 1;
        }
    }
    let fraction = hits as f64 / sample_size as f64;
    let radius = 1.96 * (fraction * (1.0 - fraction) / sample_size as f64).sqrt();
    Ok(NearDiagonalEstimate {
        fraction,
        radius,
        hits,
        samples: sample_size,
    })
}
