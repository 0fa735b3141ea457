//! Agent-based spatial epidemic simulator.
//!
//! Agents live on a square city, move daily, and transmit on contact within
//! a fixed radius. The crate layers, bottom up: keyed random draws (`rng`),
//! the neighbor-search grid (`grid`), agent storage (`city`), isolation and
//! lockdown rules (`behavior`), the daily loop (`run`), and multi-seed
//! summaries (`replicate`). Runs with equal scenario and seed are
//! byte-identical regardless of trace detail.

pub mod behavior;
pub mod city;
pub mod grid;
pub mod replicate;
pub mod rng;
pub mod run;
pub mod scenario;

pub use behavior::{isolation_share, LockdownSelection};
pub use city::{AgentRecord, City, Health};
pub use grid::CellGrid;
pub use replicate::{
    mean_series, replicate, summarize, summarize_peak, MeanDay, ReplicateSummary,
    ReplicationStats, SummaryStats,
};
pub use rng::{KeyedRng, Stream};
pub use run::{estimate_r0, run_scenario, DayRecord, EngineError, RunTrace, Simulation};
pub use scenario::{BehaviorMode, LockdownPolicy, ScenarioSpec, TraceDetail};
