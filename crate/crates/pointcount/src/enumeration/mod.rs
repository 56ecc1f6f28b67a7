//! High-performance exact counting: height histograms of `PGL2(Q)`,
//! convolution counts `N(T)`, diagonal strata and sampled near-diagonal
//! fractions, plus the on-disk histogram cache.

mod cache;
mod counting;
mod histogram;
mod sampling;

pub use cache::{load_or_build, read_histogram, write_histogram, HISTOGRAM_FORMAT};
pub use counting::{
    count_on_small_diagonal, count_points, count_points_clamped, count_curve, CountCurve,
};
pub use histogram::{
    exhaustive_histogram, height_histogram, height_histogram_extend, mobius_cumulative_primitive,
    schanuel_count, singular_primitive_classes, HeightHistogram, MAX_HIST_BOUND,
};
pub use sampling::{near_diagonal_fraction, NearDiagonalEstimate};
