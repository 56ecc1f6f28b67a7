//! Exact height histograms of `PGL2(Q)`.
//!
//! `h(n)` counts primitive, nonsingular, sign-normalized integer 2x2
//! matrices with `max |entry| = n`. The primary path is analytic and runs in
//! `O(B^3)`:
//!
//! 1. `cube(m)` counts *all* nonsingular matrices with max-abs <= m by
//!    summing, per row pair `(a, b) != (0, 0)`, the number of `(c, d)` off
//!    the singular line `{(c, d) = t (a, b)/gcd(a, b)}`.
//! 2. Shell counts `W(n) = cube(n) - cube(n-1)` are reduced to primitive
//!    shell counts via the content recursion `W(n) = sum_{g | n} V(n/g)`
//!    (the content of a shell-`n` matrix divides `n`).
//! 3. `h(n) = V(n) / 2` identifies `M` with `-M`.
//!
//! Two independent verification paths live alongside: a Mobius sieve over
//! cumulative raw counts (`mobius_cumulative_primitive`) using
//! divisor-representation counts, and a brute-force scan
//! (`exhaustive_histogram`) for small bounds.

use num_integer::{gcd, Roots};

use crate::{Error, Result};

/// Largest supported histogram bound; the primary algorithm is cubic in the
/// bound, so this caps runtime at roughly a minute on one core.
pub const MAX_HIST_BOUND: u32 = 4096;

/// Exact counts `h(1..B)` of `PGL2(Q)` points of height exactly `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightHistogram {
    bound: u32,
    counts: Vec<u64>,
    cumulative: Vec<u128>,
}

impl HeightHistogram {
    pub(crate) fn from_counts(counts: Vec<u64>) -> Self {
        let bound = counts.len() as u32;
        let mut cumulative = Vec::with_capacity(counts.len() + 1);
        cumulative.push(0u128);
        let mut acc = 0u128;
        for &c in &counts {
            acc += c as u128;
            cumulative.push(acc);
        }
        Self {
            bound,
            counts,
            cumulative,
        }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// `h(n)`; panics if `n` is out of range.
    pub fn h(&self, n: u32) -> u64 {
        assert!(n >= 1 && n <= self.bound, "height {n} out of range");
        self.counts[(n - 1) as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of points of height at most `n` (clamped to the bound).
    pub fn cumulative(&self, n: u64) -> u128 {
        let idx = (n.min(self.bound as u64)) as usize;
        self.cumulative[idx]
    }

    /// Truncation to a smaller bound is exact.
    pub fn truncate(&self, bound: u32) -> HeightHistogram {
        assert!(bound <= self.bound);
        Self::from_counts(self.counts[..bound as usize].to_vec())
    }
}

/// Number of `(c, d)` with `|c|, |d| <= m` on the singular line of a row
/// `(a, b) != (0, 0)`: multiples of the primitive direction `(a, b)/gcd`.
#[inline]
fn singular_line_points(a: i64, b: i64, m: i64) -> u128 {
    let g = gcd(a, b);
    let step = (a / g).abs().max((b / g).abs());
    (2 * (m / step) + 1) as u128
}

/// All (not necessarily primitive) nonsingular integer matrices with
/// max-abs <= m, counted with sign.
fn nonsingular_cube(m: i64) -> u128 {
    if m <= 0 {
        return 0;
    }
    let box_cd = ((2 * m + 1) as u128) * ((2 * m + 1) as u128);
    let mut total = 0u128;
    // quadrant symmetry: |a|, |b| determine the singular line
    for a in 0..=m {
        for b in 0..=m {
            if a == 0 && b == 0 {
                continue;
            }
            let mult: u128 = match (a, b) {
                (0, _) | (_, 0) => 2,
                _ => 4,
            };
            total += mult * (box_cd - singular_line_points(a, b, m));
        }
    }
    total
}

fn guard_bound(bound: u32) -> Result<()> {
    if bound < 1 || bound > MAX_HIST_BOUND {
        return Err(Error::ResourceGuard {
            what: "histogram bound",
            got: bound as u128,
            limit: MAX_HIST_BOUND as u128,
        });
    }
    Ok(())
}

/// Exact histogram `h(1..bound)`. Deterministic; cubic in `bound`.
pub fn height_histogram(bound: u32) -> Result<HeightHistogram> {
    guard_bound(bound)?;
    extend_counts(&[], bound)
}

/// Extends a histogram upward without recomputing lower shells.
pub fn height_histogram_extend(prev: &HeightHistogram, bound: u32) -> Result<HeightHistogram> {
    guard_bound(bound)?;
    if bound <= prev.bound {
        return Ok(prev.truncate(bound));
    }
    extend_counts(&prev.counts, bound)
}

fn extend_counts(known: &[u64], bound: u32) -> Result<HeightHistogram> {
    let mut counts: Vec<u64> = known.to_vec();
    // primitive shell counts with sign, V(n) = 2 h(n)
    let mut v: Vec<u128> = counts.iter().map(|&h| 2 * h as u128).collect();
    let start = counts.len() as u32 + 1;
    let mut cube_prev = nonsingular_cube(start as i64 - 1);
    for n in start..=bound {
        let cube = nonsingular_cube(n as i64);
        let w = cube - cube_prev;
        cube_prev = cube;
        // content recursion: W(n) = sum over divisors g of n of V(n/g)
        let mut vn = w;
        for g in 2..=n {
            if n % g == 0 {
                vn -= v[(n / g - 1) as usize];
            }
        }
        debug_assert!(vn % 2 == 0);
        v.push(vn);
        counts.push(u64::try_from(vn / 2).expect("shell count fits u64"));
    }
    Ok(HeightHistogram::from_counts(counts))
}

/// Mobius function for 1..=n.
fn mobius_sieve(n: u32) -> Vec<i8> {
    let n = n as usize;
    let mut mu = vec![1i8; n + 1];
    let mut is_comp = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            if i * p > n {
                break;
            }
            is_comp[i * p] = true;
            if i % p == 0 {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = -mu[i];
        }
    }
    mu
}

/// Number of points of `P^3(Q)` of max-norm height at most `bound`:
/// primitive integer 4-vectors with max-abs <= bound, modulo sign.
pub fn schanuel_count(bound: u32) -> Result<u128> {
    guard_bound(bound)?;
    let mu = mobius_sieve(bound);
    let mut total: i128 = 0;
    for d in 1..=bound {
        if mu[d as usize] == 0 {
            continue;
        }
        let m = (bound / d) as i128;
        let classes = ((2 * m + 1).pow(4) - 1) / 2;
        total += mu[d as usize] as i128 * classes;
    }
    Ok(total as u128)
}

/// Number of `(a, d)`-pair products: `sum_k d_m(k)^2` with
/// `d_m(k) = #{(a, d) in [1, m]^2 : a d = k}`.
fn divisor_pair_square_sum(m: usize) -> u128 {
    let mut counts = vec![0u32; m * m + 1];
    for a in 1..=m {
        for d in 1..=m {
            counts[a * d] += 1;
        }
    }
    counts.iter().map(|&c| (c as u128) * (c as u128)).sum()
}

/// Number of 4-tuples `(a, b, c, d)` in `[-m, m]^4` with `a d = b c`,
/// including the zero matrix.
fn singular_tuples(m: u32) -> u128 {
    if m == 0 {
        return 1;
    }
    let r0 = (4 * m + 1) as u128;
    r0 * r0 + 8 * divisor_pair_square_sum(m as usize)
}

/// Primitive singular sign-classes with max-abs <= bound (the `det = 0`
/// quadric points of `P^3(Q)` below the height bound). Independent of the
/// histogram path: Mobius over content of the divisor-representation count.
pub fn singular_primitive_classes(bound: u32) -> Result<u128> {
    guard_bound(bound)?;
    let mu = mobius_sieve(bound);
    let mut total: i128 = 0;
    for d in 1..=bound {
        if mu[d as usize] == 0 {
            continue;
        }
        let classes = ((singular_tuples(bound / d) - 1) / 2) as i128;
        total += mu[d as usize] as i128 * classes;
    }
    Ok(total as u128)
}

/// Verification path: cumulative primitive nonsingular sign-class counts
/// `P(1..=bound)` via a Mobius sieve over content, with raw counts derived
/// from the divisor-representation identity rather than line counting.
pub fn mobius_cumulative_primitive(bound: u32) -> Result<Vec<u128>> {
    guard_bound(bound)?;
    let mu = mobius_sieve(bound);
    // raw nonsingular sign-classes with max <= m
    let raw: Vec<i128> = (0..=bound)
        .map(|m| {
            let all = (2 * m as i128 + 1).pow(4);
            (all - singular_tuples(m) as i128) / 2
        })
        .collect();
    let mut out = Vec::with_capacity(bound as usize);
    for n in 1..=bound {
        let mut p: i128 = 0;
        for d in 1..=n {
            if mu[d as usize] != 0 {
                p += mu[d as usize] as i128 * raw[(n / d) as usize];
            }
        }
        out.push(p as u128);
    }
    Ok(out)
}

/// Brute-force reference: scans every matrix in `[-bound, bound]^4`.
/// Exponential in the bound; intended for small-bound cross-checks.
pub fn exhaustive_histogram(bound: u32) -> Result<HeightHistogram> {
    if bound < 1 || bound > 24 {
        return Err(Error::ResourceGuard {
            what: "exhaustive scan bound",
            got: bound as u128,
            limit: 24,
        });
    }
    let b = bound as i64;
    let mut counts = vec![0u64; bound as usize];
    for a in -b..=b {
        for bb in -b..=b {
            for c in -b..=b {
                for d in -b..=b {
                    // sign rule: first nonzero entry positive
                    let lead = [a, bb, c, d].into_iter().find(|&e| e != 0);
                    if lead.map_or(true, |l| l < 0) {
                        continue;
                    }
                    if a * d - bb * c == 0 {
                        continue;
                    }
                    if gcd(gcd(a, bb), gcd(c, d)) != 1 {
                        continue;
                    }
                    let h = a.abs().max(bb.abs()).max(c.abs()).max(d.abs());
                    counts[(h - 1) as usize] += 1;
                }
            }
        }
    }
    Ok(HeightHistogram::from_counts(counts))
}

/// Largest `n` with `n^k <= x`.
pub(crate) fn integer_root(x: u128, k: u32) -> u64 {
    if x == 0 {
        return 0;
    }
    let r = x.nth_root(k);
    u64::try_from(r).unwrap_or(u64::MAX)
}
