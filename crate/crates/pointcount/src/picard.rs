//! Exact combinatorics of the Picard lattice.
//!
//! Boundary divisors span the Picard group of the compactification, so a
//! line bundle `L = sum lambda_a D_a` and the anticanonical class
//! `-K = sum kappa_a D_a` determine the invariants
//!
//! ```text
//! a(L) = max_a kappa_a / lambda_a,      b(L) = #{ a achieving the max },
//! ```
//!
//! and `L` is *balanced* when every small-diagonal restriction has strictly
//! smaller `(a, b)` in the lexicographic order. Everything here is exact
//! rational arithmetic: `a` and `b` feed strict comparisons where rounding
//! would corrupt balance verdicts.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::{Error, Result};

/// Exact rational scalar used throughout the lattice combinatorics.
pub type Rational = Ratio<i64>;

/// Boundary divisors with their anticanonical coefficients `kappa_a >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorGeometry {
    labels: Vec<String>,
    kappa: Vec<Rational>,
}

impl DivisorGeometry {
    pub fn new(labels: Vec<String>, kappa: Vec<Rational>) -> Result<Self> {
        if labels.len() != kappa.len() {
            return Err(Error::DimensionMismatch {
                context: "divisor labels vs kappa",
                expected: labels.len(),
                got: kappa.len(),
            });
        }
        for (index, k) in kappa.iter().enumerate() {
            if *k < Rational::from_integer(1) {
                return Err(Error::KappaBelowOne { index });
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels, kappa })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kappa(&self) -> &[Rational] {
        &self.kappa
    }
}

/// Coefficients of a line bundle `L = sum lambda_a D_a` in the interior of
/// the effective cone (all `lambda_a > 0`), indexed like the geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleClass {
    lambda: Vec<Rational>,
}

impl LineBundleClass {
    pub fn new(lambda: Vec<Rational>) -> Result<Self> {
        for (index, l) in lambda.iter().enumerate() {
            if *l <= Rational::from_integer(0) {
                return Err(Error::NonpositiveCoefficient { index });
            }
        }
        Ok(Self { lambda })
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }
}

/// The pair `(a, b)`, lexicographically comparable.
///
/// `a = 0` is permitted only as the sentinel for a zero-dimensional
/// restriction (a point), which sits strictly below every `(a, b)` with
/// `a > 0`. The derived `Ord` is exactly the lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ManinInvariants {
    pub a: Rational,
    pub b: u32,
}

impl ManinInvariants {
    pub fn new(a: Rational, b: u32) -> Self {
        assert!(b >= 1, "b must be a positive integer");
        assert!(a >= Rational::from_integer(0));
        Self { a, b }
    }

    /// Sentinel for a point: below any `(a, b)` with `a > 0`.
    pub fn point() -> Self {
        Self {
            a: Rational::from_integer(0),
            b: 1,
        }
    }
}

impl fmt::Display for ManinInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

fn ratios(geom: &DivisorGeometry, l: &LineBundleClass) -> Result<Vec<Rational>> {
    if geom.len() != l.len() {
        return Err(Error::DimensionMismatch {
            context: "geometry vs line bundle",
            expected: geom.len(),
            got: l.len(),
        });
    }
    Ok(geom
        .kappa
        .iter()
        .zip(&l.lambda)
        .map(|(k, lam)| k / lam)
        .collect())
}

/// `a(L) = max_a kappa_a / lambda_a`, exact.
pub fn manin_a(geom: &DivisorGeometry, l: &LineBundleClass) -> Result<Rational> {
    let r = ratios(geom, l)?;
    r.into_iter()
        .max()
        .ok_or(Error::InvalidConfig("empty divisor set".into()))
}

/// `b(L)` = number of indices achieving the maximum ratio.
pub fn manin_b(geom: &DivisorGeometry, l: &LineBundleClass) -> Result<u32> {
    let r = ratios(geom, l)?;
    let max = *r
        .iter()
        .max()
        .ok_or(Error::InvalidConfig("empty divisor set".into()))?;
    Ok(r.iter().filter(|x| **x == max).count() as u32)
}

/// Both invariants in one pass.
pub fn invariants(geom: &DivisorGeometry, l: &LineBundleClass) -> Result<ManinInvariants> {
    Ok(ManinInvariants::new(manin_a(geom, l)?, manin_b(geom, l)?))
}

/// Strict lexicographic comparison.
pub fn lex_less(p: ManinInvariants, q: ManinInvariants) -> bool {
    p < q
}

/// Restriction of a line bundle to a small diagonal: either a positive
/// dimensional geometry or the degenerate point (r = 2 case).
#[derive(Debug, Clone)]
pub enum Restriction {
    /// The restriction collapses to a single rational point.
    Point,
    Proper(DivisorGeometry, LineBundleClass),
}

impl Restriction {
    pub fn invariants(&self) -> Result<ManinInvariants> {
        match self {
            Restriction::Point => Ok(ManinInvariants::point()),
            Restriction::Proper(g, l) => invariants(g, l),
        }
    }
}

/// Restriction data `L|_{Y_ij}` for every pair `1 <= i < j <= r`.
#[derive(Debug, Clone)]
pub struct RestrictionTable {
    r: usize,
    entries: BTreeMap<(usize, usize), Restriction>,
}

impl RestrictionTable {
    pub fn new(r: usize) -> Self {
        Self {
            r,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, i: usize, j: usize, restriction: Restriction) {
        self.entries.insert((i, j), restriction);
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Restriction> {
        self.entries.get(&(i, j))
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Pairs in lexicographic order; errors if any pair is missing.
    pub fn complete_pairs(&self) -> Result<Vec<((usize, usize), &Restriction)>> {
        let mut out = Vec::new();
        for i in 1..=self.r {
            for j in (i + 1)..=self.r {
                let e = self
                    .entries
                    .get(&(i, j))
                    .ok_or(Error::IncompleteRestrictionTable(i, j))?;
                out.push(((i, j), e));
            }
        }
        Ok(out)
    }
}

/// Balance verdict. `L` is balanced iff for every pair `(i, j)` the
/// invariants of `L|_{Y_ij}` are lexicographically *strictly* below those of
/// `L`; equality counts as not balanced. On failure the first violating pair
/// is returned as witness.
pub fn is_balanced(
    geom: &DivisorGeometry,
    l: &LineBundleClass,
    restrictions: &RestrictionTable,
) -> Result<(bool, Option<(usize, usize)>)> {
    let whole = invariants(geom, l)?;
    for ((i, j), restriction) in restrictions.complete_pairs()? {
        let sub = restriction.invariants()?;
        if !lex_less(sub, whole) {
            return Ok((false, Some((i, j))));
        }
    }
    Ok((true, None))
}
