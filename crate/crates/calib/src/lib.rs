//! Calibration of the spatial epidemic model.
//!
//! Two closed-form identities pin the recovery rate and the contagion
//! radius from observable quantities, and a derivative-free search fits the
//! remaining pair (contagion probability, movement distance) by matching
//! simulated daily growth rates of the infected stock to a target series.

mod fit;
mod identity;

pub use fit::{evaluate_loss, fit_pi_mu, CalibrationTarget, FitResult, GridPoint, SearchConfig};
pub use identity::{infectious_span, radius_for_contacts, rho_from_growth};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalibError {
    #[error("growth identity needs r0 > 1, got {r0}")]
    DegenerateGrowthIdentity { r0: f64 },
    #[error("initial growth rate must be positive, got {0}")]
    NonPositiveGrowth(f64),
    #[error("contact target and density must be non-negative and finite")]
    BadContactInputs,
    #[error("radius {radius} does not fit a city of side {city_side}")]
    RadiusExceedsCity { radius: f64, city_side: f64 },
    #[error("target series needs at least {min} finite growth rates, got {got}")]
    TargetTooShort { min: usize, got: usize },
    #[error("target has {days} days but {weights} weights")]
    WeightMismatch { days: usize, weights: usize },
    #[error("weights must be non-negative and finite")]
    BadWeights,
    #[error("search bounds must be positive, finite, and ordered")]
    BadBounds,
    #[error("search needs a grid of at least 2 points per axis")]
    GridTooCoarse,
    #[error("search needs at least one seed")]
    NoSeeds,
    #[error("target unreachable in bounds: every candidate epidemic went extinct")]
    TargetUnreachable,
    #[error(transparent)]
    Engine(#[from] epi_engine::EngineError),
}
