//! The concrete model: `X = (P^3)^{r-1}` as an equivariant compactification
//! of `PGL2^{r-1} = H \ H^r`, with `H = PGL2` over `Q`.
//!
//! Rational points of the open orbit are tuples of `PGL2(Q)` elements,
//! represented by sign-normalized primitive integer 2x2 matrices. Heights use
//! the archimedean max-norm, which makes them integers: the finite places are
//! absorbed by primitivity. Each `P^3` factor is compactified along the
//! quadric `{det = 0}`, which has degree 2, while `-K_{P^3} = O(4)`; hence
//! `kappa = 2` per boundary divisor and `lambda = m/2` for the `O(m)` factor
//! of the line bundle.

use num_integer::Integer;

use crate::picard::{DivisorGeometry, LineBundleClass, Rational, Restriction, RestrictionTable};
use crate::{Error, Result};

/// A rational point of `PGL2(Q)`: a primitive, nonsingular, sign-normalized
/// integer matrix `(a, b; c, d)` in row-major order.
///
/// Normal form: content 1 and the first nonzero entry in order `(a, b, c, d)`
/// positive. Determinants may be negative (`PGL2(Q)` representatives need not
/// have positive det), which is why the sign rule is on entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveMatrix {
    entries: [i64; 4],
}

impl PrimitiveMatrix {
    /// Normalizes an arbitrary integer matrix to the unique representative of
    /// its projective class. Idempotent.
    pub fn normalize(raw: [i64; 4]) -> Result<Self> {
        if raw == [0; 4] {
            return Err(Error::ZeroMatrix);
        }
        let det = (raw[0] as i128) * (raw[3] as i128) - (raw[1] as i128) * (raw[2] as i128);
        if det == 0 {
            return Err(Error::SingularMatrix);
        }
        let content = raw
            .iter()
            .fold(0i64, |g, &e| g.gcd(&e));
        let mut entries = raw.map(|e| e / content);
        let lead = entries.iter().find(|&&e| e != 0).copied().unwrap();
        if lead < 0 {
            entries = entries.map(|e| -e);
        }
        Ok(Self { entries })
    }

    pub fn identity() -> Self {
        Self {
            entries: [1, 0, 0, 1],
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        self.entries
    }

    pub fn det(&self) -> i64 {
        self.entries[0] * self.entries[3] - self.entries[1] * self.entries[2]
    }

    /// Max-norm height: the product of local heights for the `O(1)` bundle
    /// reduces to `max |entry|` on a primitive representative.
    pub fn height(&self) -> u64 {
        self.entries.iter().map(|e| e.unsigned_abs()).max().unwrap()
    }

    /// Group multiplication in `PGL2(Q)`: matrix product, renormalized.
    pub fn group_op(&self, other: &PrimitiveMatrix) -> Result<PrimitiveMatrix> {
        let [a, b, c, d] = self.entries.map(|e| e as i128);
        let [e, f, g, h] = other.entries.map(|x| x as i128);
        let raw = [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h];
        let raw64: [i64; 4] = [
            i64::try_from(raw[0]).map_err(|_| Error::EntryOverflow)?,
            i64::try_from(raw[1]).map_err(|_| Error::EntryOverflow)?,
            i64::try_from(raw[2]).map_err(|_| Error::EntryOverflow)?,
            i64::try_from(raw[3]).map_err(|_| Error::EntryOverflow)?,
        ];
        Self::normalize(raw64)
    }

    /// Group inverse: the adjugate, renormalized.
    pub fn inverse(&self) -> PrimitiveMatrix {
        let [a, b, c, d] = self.entries;
        // adjugate of a nonsingular matrix is nonsingular and nonzero
        Self::normalize([d, -b, -c, a]).expect("adjugate of nonsingular matrix")
    }
}

/// Model parameters: `r >= 2` factors of `H` in `G = H^r` and the even
/// degrees `m_2..m_r` of the `O(m_k)` factors of the line bundle on
/// `(P^3)^{r-1}`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ModelConfig {
    r: usize,
    degrees: Vec<u32>,
}

impl ModelConfig {
    pub fn new(r: usize, degrees: Vec<u32>) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidConfig(format!("r = {r} must be >= 2")));
        }
        if degrees.len() != r - 1 {
            return Err(Error::InvalidConfig(format!(
                "expected {} degrees for r = {r}, got {}",
                r - 1,
                degrees.len()
            )));
        }
        for &m in &degrees {
            if m < 2 || m % 2 != 0 {
                return Err(Error::InvalidConfig(format!(
                    "degree {m} must be even and >= 2"
                )));
            }
        }
        Ok(Self { r, degrees })
    }

    /// The anticanonical model: all degrees 4.
    pub fn anticanonical(r: usize) -> Result<Self> {
        Self::new(r, vec![4; r.saturating_sub(1)])
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Degrees `m_2..m_r`; `degrees()[k-2]` is the degree of factor `k`.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree_of_factor(&self, k: usize) -> u32 {
        self.degrees[k - 2]
    }

    pub fn min_degree(&self) -> u32 {
        *self.degrees.iter().min().unwrap()
    }
}

/// A rational point of the open orbit: `(x_2, ..., x_r)` with
/// `x_k = h_1^{-1} h_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointTuple {
    points: Vec<PrimitiveMatrix>,
}

impl PointTuple {
    pub fn new(points: Vec<PrimitiveMatrix>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[PrimitiveMatrix] {
        &self.points
    }
}

/// `H_L(x) = prod_k height(x_k)^{m_k}`.
pub fn height_l(tuple: &PointTuple, cfg: &ModelConfig) -> Result<u128> {
    if tuple.points.len() != cfg.r - 1 {
        return Err(Error::DimensionMismatch {
            context: "point tuple vs model",
            expected: cfg.r - 1,
            got: tuple.points.len(),
        });
    }
    let mut h: u128 = 1;
    for (x, &m) in tuple.points.iter().zip(&cfg.degrees) {
        h = h
            .checked_mul((x.height() as u128).pow(m))
            .ok_or(Error::EntryOverflow)?;
    }
    Ok(h)
}

fn det_label(k: usize) -> String {
    format!("det{k}")
}

/// Boundary geometry of the model: one divisor `D_k = {det x_k = 0}` per
/// factor with `kappa_k = 2`, and `lambda_k = m_k / 2`.
pub fn boundary_geometry(cfg: &ModelConfig) -> (DivisorGeometry, LineBundleClass) {
    let labels: Vec<String> = (2..=cfg.r).map(det_label).collect();
    let kappa = vec![Rational::from_integer(2); cfg.r - 1];
    let lambda: Vec<Rational> = cfg
        .degrees
        .iter()
        .map(|&m| Rational::from_integer(m as i64 / 2))
        .collect();
    let geom = DivisorGeometry::new(labels, kappa).expect("model geometry is valid");
    let l = LineBundleClass::new(lambda).expect("model degrees are positive");
    (geom, l)
}

/// Restriction of the line bundle to the small diagonal `Y_ij`.
///
/// For `i = 1` the diagonal is `{x_j = e}`: factor `j` disappears and the
/// others keep their degrees. For `2 <= i < j` it is `{x_i = x_j}`: factors
/// `i` and `j` merge into one of degree `m_i + m_j`. Either way the result is
/// a `(P^3)^{r-2}` with `kappa = 2` per surviving factor; for `r = 2` it
/// degenerates to a point.
pub fn small_diagonal_restriction(cfg: &ModelConfig, i: usize, j: usize) -> Result<Restriction> {
    if i < 1 || j <= i || j > cfg.r {
        return Err(Error::IndexOutOfRange { i, j, r: cfg.r });
    }
    let mut factors: Vec<(String, u32)> = Vec::new();
    if i == 1 {
        for k in 2..=cfg.r {
            if k != j {
                factors.push((det_label(k), cfg.degree_of_factor(k)));
            }
        }
    } else {
        for k in 2..=cfg.r {
            if k == j {
                continue;
            }
            let degree = if k == i {
                cfg.degree_of_factor(i) + cfg.degree_of_factor(j)
            } else {
                cfg.degree_of_factor(k)
            };
            let label = if k == i {
                format!("det{i}{j}")
            } else {
                det_label(k)
            };
            factors.push((label, degree));
        }
    }
    if factors.is_empty() {
        return Ok(Restriction::Point);
    }
    let (labels, degrees): (Vec<String>, Vec<u32>) = factors.into_iter().unzip();
    let geom = DivisorGeometry::new(labels, vec![Rational::from_integer(2); degrees.len()])
        .expect("restriction geometry is valid");
    let l = LineBundleClass::new(
        degrees
            .iter()
            .map(|&m| Rational::new(m as i64, 2))
            .collect(),
    )
    .expect("restriction degrees are positive");
    Ok(Restriction::Proper(geom, l))
}

/// Assembles [`small_diagonal_restriction`] over all pairs `i < j`.
pub fn restriction_table(cfg: &ModelConfig) -> RestrictionTable {
    let mut table = RestrictionTable::new(cfg.r);
    for i in 1..=cfg.r {
        for j in (i + 1)..=cfg.r {
            let restriction =
                small_diagonal_restriction(cfg, i, j).expect("pair indices are in range");
            table.insert(i, j, restriction);
        }
    }
    table
}
