//! Shared domain types and the analytic SIR benchmark.
//!
//! `params` holds the parameter bundle every other crate consumes, plus the
//! derived-quantity formulas (density, contact circle, β, R0). `sir` is the
//! deterministic compartmental model with its stationary-state and peak
//! formulas; the agent-based counterpart lives in `epi-engine`.

pub mod params;
pub mod series;
pub mod sir;

pub use params::{
    expected_contacts, validate_params, CheckedParams, ContactBasis, DensityMode,
    DerivedQuantities, EpidemicParams, Geography, OutbreakMode, ParamError, RelocationMode,
    DAILY_CONTACT_TARGET,
};
pub use series::{growth_rates, sup_distance, SeriesSample};
pub use sir::{
    alpha_response, final_size, infection_probability, peak_fraction, simulate_sir,
    simulate_sir_with_policy, BehavioralParams, HazardForm, SirError, SirLockdown, SirParams,
    SirState,
};
