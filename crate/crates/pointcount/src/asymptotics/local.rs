//! Exact p-adic density strata of the boundary quadric `det = 0` and the
//! corresponding local Euler factor.
//!
//! The strata are measures of `{v_p(det) = k}` under the uniform measure on
//! primitive 4-tuples mod `p^m` (equivalently on `P^3(Z/p^m)`: the unit
//! scaling cancels). Enumeration is exact: determinant residues are counted
//! through the product-distribution array of `(a, d) mod p^m`, in `O(p^2m)`
//! time rather than `O(p^4m)`.

use num_rational::Ratio;

use crate::{Error, Result};

const MAX_MODULUS: u64 = 4096;

pub type ExactRational = Ratio<i128>;

/// Exact valuation strata at one prime.
#[derive(Debug, Clone)]
pub struct LocalDensityProfile {
    pub p: u64,
    pub depth: u32,
    /// `mu[k]` is the mass of `{v_p(det) = k}` for `k = 0 .. depth-1`.
    pub mu: Vec<ExactRational>,
    /// Mass of `{v_p(det) >= depth}`.
    pub tail: ExactRational,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distribution of `min(v_p(det), d)` over all 4-tuples mod `p^d`; entry
/// `d` is the tail stratum `v_p(det) >= d`.
fn det_valuation_counts(p: u64, d: u32) -> Vec<u128> {
    if d == 0 {
        return vec![1];
    }
    let q = p.pow(d) as usize;
    let mut prod = vec![0u64; q];
    for a in 0..q {
        for b in 0..q {
            prod[(a * b) % q] += 1;
        }
    }
    let mut val = vec![0u32; q];
    val[0] = d;
    for t in 1..q {
        let mut v = 0;
        let mut x = t as u64;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        val[t] = v;
    }
    let mut counts = vec![0u128; d as usize + 1];
    for u in 0..q {
        if prod[u] == 0 {
            continue;
        }
        for v in 0..q {
            // det residue (u - v) mod q for products ad = u, bc = v
            counts[val[(u + q - v) % q] as usize] += prod[u] as u128 * prod[v] as u128;
        }
    }
    counts
}

/// Same distribution restricted to primitive tuples: non-primitive tuples
/// are `p * x` with `x` free mod `p^(d-1)` and `det(p x) = p^2 det(x)`, so
/// their strata are the depth `d - 2` all-tuple strata shifted by 2.
fn primitive_valuation_counts(p: u64, d: u32) -> Vec<u128> {
    let mut counts = det_valuation_counts(p, d);
    let sub = det_valuation_counts(p, d - 2);
    let lift = (p as u128).pow(4);
    for (j, &c) in sub.iter().enumerate() {
        let k = (j + 2).min(d as usize);
        counts[k] -= c * lift;
    }
    counts
}

/// Exact strata masses at prime `p`, depth `m >= 2`.
pub fn local_density(p: u64, depth: u32) -> Result<LocalDensityProfile> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if depth < 2 {
        return Err(Error::InvalidConfig("depth must be at least 2".into()));
    }
    let modulus = p.checked_pow(depth).filter(|&q| q <= MAX_MODULUS).ok_or(
        Error::ResourceGuard {
            what: "p^depth",
            got: p.checked_pow(depth).map_or(u128::MAX, u128::from),
            limit: MAX_MODULUS.into(),
        },
    )?;
    let counts = primitive_valuation_counts(p, depth);
    let total = (modulus as u128).pow(4) - (p as u128).pow(4 * (depth - 1));
    debug_assert_eq!(counts.iter().sum::<u128>(), total);
    let to_ratio = |c: u128| ExactRational::new(c as i128, total as i128);
    Ok(LocalDensityProfile {
        p,
        depth,
        mu: counts[..depth as usize].iter().map(|&c| to_ratio(c)).collect(),
        tail: to_ratio(counts[depth as usize]),
    })
}

/// Local Euler factor from the strata: the boundary-measure strata are
/// twisted to group-Haar strata `nu_k = mu_k * p^(2k)` (the anticanonical
/// kappa = 2), normalized by the unit stratum `nu_0` so that the factor's
/// leading term is 1 (the mass of the maximal compact), then summed as
/// `sum_k (nu_k / nu_0) p^(-ks)`. Returns `(factor, regularized)` with
/// `regularized = factor * (1 - p^(-(s-1)))`; the regularized value is
/// `1 + O(p^-2)`.
pub fn local_factor_check(profile: &LocalDensityProfile, s: f64) -> Result<(f64, f64)> {
    // stratum terms grow like p^((1-s)k): the sum diverges at or below s = 1
    if s <= 1.0 {
        return Err(Error::BelowAbscissa { s, abscissa: 1.0 });
    }
    let p = profile.p as f64;
    let as_f64 = |x: ExactRational| *x.numer() as f64 / *x.denom() as f64;
    let nu: Vec<f64> = profile
        .mu
        .iter()
        .enumerate()
        .map(|(k, &mu)| as_f64(mu) * p.powi(2 * k as i32))
        .collect();
    let factor: f64 = nu
        .iter()
        .enumerate()
        .map(|(k, &v)| v / nu[0] * p.powf(-(k as f64) * s))
        .sum();
    let regularized = factor * (1.0 - p.powf(-(s - 1.0)));
    Ok((factor, regularized))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i128, d: i128) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn p2_depth2_unit_stratum() {
        let profile = local_density(2, 2).unwrap();
        // quadric det = 0 has (p+1)^2 = 9 of the 15 points of P^3(F_2)
        assert_eq!(profile.mu[0], rat(2, 5));
    }

    #[test]
    fn unit_stratum_formula_small_primes() {
        for p in [2i128, 3, 5, 7] {
            let profile = local_density(p as u64, 2).unwrap();
            let expected = rat(1, 1) - rat((p + 1) * (p + 1), p * p * p + p * p + p + 1);
            assert_eq!(profile.mu[0], expected, "p = {p}");
        }
    }

    #[test]
    fn strata_sum_to_one() {
        for (p, m) in [(2, 4), (3, 3), (5, 2), (13, 2)] {
            let profile = local_density(p, m).unwrap();
            let total: ExactRational = profile.mu.iter().sum::<ExactRational>() + profile.tail;
            assert_eq!(total, rat(1, 1));
            assert!(profile.mu.iter().all(|&mu| mu >= rat(0, 1) && mu <= rat(1, 1)));
        }
    }

    #[test]
    fn geometric_decay_of_deep_strata() {
        // mu_{k+1}/mu_k = 1/p for 1 <= k <= m-2 (smoothness of the quadric)
        for p in [2u64, 3] {
            let profile = local_density(p, 4).unwrap();
            for k in 1..=2usize {
                assert_eq!(
                    profile.mu[k + 1] * rat(p as i128, 1),
                    profile.mu[k],
                    "p = {p}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn regularized_factor_near_one() {
        let s = 2.5;
        for (p, m) in [(2u64, 4u32), (3, 4), (5, 3), (7, 3)] {
            let profile = local_density(p, m).unwrap();
            let (_, regularized) = local_factor_check(&profile, s).unwrap();
            let tol = 3.0 / (p * p) as f64;
            assert!(
                (regularized - 1.0).abs() <= tol,
                "p = {p}: regularized = {regularized}, tol = {tol}"
            );
        }
    }

    #[test]
    fn deviation_decreases_from_p2_to_p3() {
        let d2 = {
            let (_, r) = local_factor_check(&local_density(2, 4).unwrap(), 2.5).unwrap();
            (r - 1.0).abs()
        };
        let d3 = {
            let (_, r) = local_factor_check(&local_density(3, 4).unwrap(), 2.5).unwrap();
            (r - 1.0).abs()
        };
        assert!(d3 < d2, "p=2 dev {d2}, p=3 dev {d3}");
    }

    #[test]
    fn synthetic_geometric_profile_closed_form() {
        // mu_k = c p^{-k}: nu_k/nu_0 = p^k, factor is the geometric series
        // sum p^{-k(s-1)} and regularization cancels the pole exactly
        let p = 5u64;
        let m = 6u32;
        let c = rat(1, 2);
        let profile = LocalDensityProfile {
            p,
            depth: m,
            mu: (0..m)
                .map(|k| c / rat((p as i128).pow(k), 1))
                .collect(),
            tail: rat(0, 1),
        };
        let s = 1.5f64;
        let (factor, regularized) = local_factor_check(&profile, s).unwrap();
        let x = (p as f64).powf(-(s - 1.0));
        let closed = (1.0 - x.powi(m as i32)) / (1.0 - x);
        assert!((factor - closed).abs() < 1e-10);
        assert!((regularized - (1.0 - x.powi(m as i32))).abs() < 1e-10);
    }

    #[test]
    fn guards() {
        assert!(matches!(local_density(6, 2), Err(Error::NotPrime(6))));
        assert!(matches!(local_density(7, 1), Err(Error::InvalidConfig(_))));
        assert!(matches!(
            local_density(7, 5),
            Err(Error::ResourceGuard { .. })
        ));
        let profile = local_density(3, 2).unwrap();
        assert!(matches!(
            local_factor_check(&profile, 1.0),
            Err(Error::BelowAbscissa { .. })
        ));
    }
}
