//! Saturation profile of an unbalanced model: the exact fraction of the
//! ball carried by tuples whose witness factor has bounded height.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::enumeration::{count_points, count_points_clamped, HeightHistogram};
use crate::pgl2::{boundary_geometry, restriction_table, ModelConfig};
use crate::picard::is_balanced;
use crate::{Error, Result};

/// Height caps the fractions are evaluated at.
pub const SATURATION_CAPS: [u64; 3] = [1, 2, 4];

#[derive(Debug, Clone, serde::Serialize)]
pub struct SaturationRow {
    pub t: u128,
    /// Fraction of `N(T)` with `height(x_j) <= K` for each `K` in
    /// `SATURATION_CAPS`.
    pub fractions: [f64; 3],
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SaturationProfile {
    /// Witness pair from the failed balance check; `witness.0 == 1`, so the
    /// clamped coordinate is the single factor `witness.1`.
    pub witness: (usize, usize),
    pub caps: [u64; 3],
    pub rows: Vec<SaturationRow>,
}

fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    num.to_f64().unwrap_or(f64::MAX) / den.to_f64().unwrap_or(f64::MAX)
}

/// Exact clamped-factor fractions over `grid`. Refuses balanced models:
/// there the diagonal contributions vanish asymptotically and the sampled
/// near-diagonal fraction is the right tool.
pub fn saturation_profile(
    hist: &HeightHistogram,
    cfg: &ModelConfig,
    grid: &[u128],
) -> Result<SaturationProfile> {
    let (geom, l) = boundary_geometry(cfg);
    let table = restriction_table(cfg);
    let (balanced, witness) = is_balanced(&geom, &l, &table)?;
    if balanced {
        return Err(Error::BalancedBundle);
    }
    let (i, j) = witness.expect("unbalanced verdict carries a witness");
    if i != 1 {
        return Err(Error::WitnessNotClampable(i, j));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &t in grid {
        let total = count_points(hist, cfg, t)?;
        if total.is_zero() {
            return Err(Error::EmptyBall(t));
        }
        let mut fractions = [0.0; 3];
        for (slot, &cap) in SATURATION_CAPS.iter().enumerate() {
            let clamped = count_points_clamped(hist, cfg, t, j, cap)?;
            fractions[slot] = big_ratio(&clamped, &total);
        }
        rows.push(SaturationRow { t, fractions });
    }
    Ok(SaturationProfile {
        witness: (i, j),
        caps: SATURATION_CAPS,
        rows,
    })
}
