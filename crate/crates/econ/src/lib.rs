//! Panel datasets and least-squares estimators for simulated epidemics.
//!
//! City-day traces become a rectangular panel; the panel feeds a per-density
//! estimate of the infection parameter and two-way fixed-effects treatment
//! regressions, with per-day fitted-value diagnostics and a side-by-side
//! report of treatment coefficients under full and partial policy coverage.

mod beta;
mod did;
mod ols;
mod panel;
mod table;

pub use beta::{estimate_beta_by_density, BetaError, BetaEstimate};
pub use did::{
    did_estimate, did_predict_daily, within_delta, DayFit, DidError, DidOutcome, DidSpec,
    ExtraRegressor,
};
pub use ols::{ols, OlsError, RegressionResult};
pub use panel::{
    build_panel, CityObservations, DayObservation, PanelDataset, PanelError, PanelRow,
};
pub use table::{
    treatment_table, DesignEstimates, DesignPanels, TableError, TreatmentCatalog, TreatmentRow,
    TreatmentTable,
};
