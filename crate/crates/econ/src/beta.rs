//! Per-density estimation of the infection parameter.
//!
//! Within each density level the infected growth rate is regressed on the
//! susceptible share with an intercept. Under the mean-field model the slope
//! identifies the infection rate and the intercept the negated recovery
//! rate; on spatially simulated data the slope absorbs whatever local
//! saturation the mean-field form cannot express.

use crate::ols::ols;
use crate::panel::PanelDataset;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BetaError {
    #[error("density {density} has only {rows} usable rows; need at least 10")]
    TooFewRows { density: f64, rows: usize },
    #[error(transparent)]
    Ols(#[from] crate::ols::OlsError),
}

/// Slope and intercept of the growth regression for one density level.
#[derive(Debug, Clone, Copy)]
pub struct BetaEstimate {
    pub density: f64,
    pub beta_hat: f64,
    pub intercept: f64,
    pub observations: usize,
}

/// Fits growth on susceptible share separately for every density level in
/// the panel; estimates come back sorted by density.
pub fn estimate_beta_by_density(panel: &PanelDataset) -> Result<Vec<BetaEstimate>, BetaError> {
    let mut densities: Vec<f64> = panel.rows.iter().map(|r| r.density).collect();
    densities.sort_by(f64::total_cmp);
    densities.dedup();

    let mut estimates = Vec::with_capacity(densities.len());
    for density in densities {
        let points: Vec<(f64, f64)> = panel
            .rows
            .iter()
            .filter(|r| r.density == density)
            .filter_map(|r| r.growth.map(|g| (r.s_frac, g)))
            .collect();
        if points.len() < 10 {
            return Err(BetaError::TooFewRows { density, rows: points.len() });
        }
        let design = DMatrix::from_fn(points.len(), 2, |i, j| {
            if j == 0 {
                points[i].0
            } else {
                1.0
            }
        });
        let response = DVector::from_fn(points.len(), |i, _| points[i].1);
        let fit = ols(vec!["s_frac".into(), "const".into()], design, response)?;
        estimates.push(BetaEstimate {
            density,
            beta_hat: fit.coefficient("s_frac").unwrap(),
            intercept: fit.coefficient("const").unwrap(),
            observations: points.len(),
        });
    }
    Ok(estimates)
}
