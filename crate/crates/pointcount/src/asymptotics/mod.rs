//! Numeric verification of the analytic claims: leading-term fits,
//! well-roundedness ratios, the Dirichlet-series pole, p-adic density
//! strata, and saturation of unbalanced models.

mod dirichlet;
mod fit;
mod local;
mod saturation;

pub use dirichlet::{dirichlet_pole_probe, PoleProbeRow, ABSCISSA, TAIL_CONSTANT};
pub use fit::{exponent_probe, fit_constant, well_roundedness, FitReport, WellRoundedness};
pub use local::{local_density, local_factor_check, ExactRational, LocalDensityProfile};
pub use saturation::{saturation_profile, SaturationProfile, SaturationRow, SATURATION_CAPS};
