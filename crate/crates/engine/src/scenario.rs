//! Scenario description: what to simulate and how much to record.

use crate::behavior::LockdownSelection;
use epi_core::{BehavioralParams, EpidemicParams, Geography};

/// Endogenous isolation rule active during a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BehaviorMode {
    /// Nobody withdraws voluntarily.
    Off,
    /// Response to the city-wide infected share.
    Global(BehavioralParams),
    /// Response to the infected share within each agent's contact radius.
    Local(BehavioralParams),
}

/// Mandated lockdown: a fixed set of agents stops circulating from
/// `start_day` until the end of the run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockdownPolicy {
    pub share: f64,
    pub start_day: u32,
    pub selection: LockdownSelection,
}

/// How much per-day work the run performs beyond the epidemic itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceDetail {
    /// Sweep all agent pairs: exact contact counts in the trace.
    Full,
    /// Query neighborhoods of infected agents only; contact counts are
    /// skipped but the epidemic path is byte-identical to a full run.
    Light,
}

/// Complete description of a single-city run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    /// Name carried into traces and output files; not part of the dynamics.
    pub scenario_id: String,
    pub params: EpidemicParams,
    pub geography: Geography,
    pub behavior: BehaviorMode,
    pub lockdown: Option<LockdownPolicy>,
    pub trace: TraceDetail,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            scenario_id: String::from("scenario"),
            params: EpidemicParams::default(),
            geography: Geography::default(),
            behavior: BehaviorMode::Off,
            lockdown: None,
            trace: TraceDetail::Full,
        }
    }
}
