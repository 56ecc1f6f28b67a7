//! Exact point counting on the product compactifications `X = (P^3)^{r-1}`
//! of `PGL2^{r-1}`, together with the combinatorial and analytic checks that
//! go with it:
//!
//! - [`picard`]: exact invariants `(a, b)` on the Picard lattice and the
//!   balanced criterion for line bundles.
//! - [`pgl2`]: the concrete model: primitive integer matrices, heights,
//!   boundary geometry and small-diagonal restrictions.
//! - [`enumeration`]: exact height histograms of `PGL2(Q)`, convolution
//!   counts `N(T)`, diagonal strata and sampled near-diagonal fractions.
//! - [`asymptotics`]: leading-term fits `c T^a (log T)^{b-1}`,
//!   well-roundedness ratios, Dirichlet pole probes and p-adic local
//!   densities.
//! - [`subgroups`]: finite-group verification of the Goursat closure and
//!   intermediate-subgroup classification.
//! - [`report`]: machine-readable JSON reports and cache fingerprints.
//!
//! All counting is exact (integer or rational); floating point enters only
//! at the regression boundary in [`asymptotics`].

pub mod asymptotics;
pub mod enumeration;
pub mod error;
pub mod pgl2;
pub mod picard;
pub mod report;
pub mod subgroups;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
