//! Multi-seed replication and summary statistics.

use crate::run::{run_scenario, RunTrace};
use crate::scenario::ScenarioSpec;
use crate::EngineError;

/// Across-seed mean of one day. Traces that ended early contribute their
/// steady state: zero infected, zero inflow, final s and r, no isolation,
/// the final lockdown share.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanDay {
    pub day: u32,
    pub s: f64,
    pub i: f64,
    pub r: f64,
    pub new_infections: f64,
    pub isolated_share: f64,
    pub locked_share: f64,
    /// Mean over the seeds whose record carries the ratio; absent when none
    /// does. Early-ended traces contribute their steady-state zero.
    pub lambda_hat: Option<f64>,
}

/// Mean and standard deviation (population form) across seeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub sd: f64,
}

impl SummaryStats {
    fn over(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let var = values.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / k;
        Some(Self { mean, sd: var.sqrt() })
    }
}

/// Across-seed statistics of the per-run summary figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationStats {
    pub final_size: SummaryStats,
    pub peak_i_frac: SummaryStats,
    pub peak_day: SummaryStats,
    /// Absent when no seed produced an attribution cohort.
    pub r0_hat: Option<SummaryStats>,
}

/// Per-seed traces of one scenario plus their day-wise mean and summary.
#[derive(Debug, Clone)]
pub struct ReplicateSummary {
    pub traces: Vec<RunTrace>,
    pub mean: Vec<MeanDay>,
    pub stats: ReplicationStats,
}

impl ReplicateSummary {
    pub fn mean_infected(&self) -> Vec<f64> {
        self.mean.iter().map(|d| d.i).collect()
    }

    pub fn final_sizes(&self) -> Vec<f64> {
        self.traces.iter().map(|t| t.final_size).collect()
    }
}

/// Runs the scenario once per seed.
pub fn replicate(spec: &ScenarioSpec, seeds: &[u64]) -> Result<ReplicateSummary, EngineError> {
    assert!(!seeds.is_empty(), "replication needs at least one seed");
    let mut traces = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        traces.push(run_scenario(spec, seed)?);
    }
    let mean = mean_series(&traces);
    let stats = summarize(&traces);
    Ok(ReplicateSummary { traces, mean, stats })
}

/// Across-seed statistics of final size, peak, peak day, and r0_hat.
pub fn summarize(traces: &[RunTrace]) -> ReplicationStats {
    let collect = |f: &dyn Fn(&RunTrace) -> f64| traces.iter().map(f).collect::<Vec<f64>>();
    let r0: Vec<f64> = traces.iter().filter_map(|t| t.r0_hat).collect();
    ReplicationStats {
        final_size: SummaryStats::over(&collect(&|t| t.final_size)).expect("at least one trace"),
        peak_i_frac: SummaryStats::over(&collect(&|t| t.peak_i_frac)).expect("at least one trace"),
        peak_day: SummaryStats::over(&collect(&|t| t.peak_day as f64)).expect("at least one trace"),
        r0_hat: SummaryStats::over(&r0),
    }
}

/// Day-wise mean across traces, extending shorter traces with their steady
/// state. A trace only ends early once its epidemic died, so the held state
/// has zero infected.
pub fn mean_series(traces: &[RunTrace]) -> Vec<MeanDay> {
    let days = traces.iter().map(|t| t.records.len()).max().unwrap_or(0);
    let k = traces.len() as f64;
    let mut out = Vec::with_capacity(days);
    for t in 0..days {
        let mut acc = MeanDay {
            day: t as u32,
            s: 0.0,
            i: 0.0,
            r: 0.0,
            new_infections: 0.0,
            isolated_share: 0.0,
            locked_share: 0.0,
            lambda_hat: None,
        };
        let mut lambda_sum = 0.0;
        let mut lambda_n = 0u32;
        for trace in traces {
            match trace.records.get(t) {
                Some(rec) => {
                    acc.s += rec.s as f64;
                    acc.i += rec.i as f64;
                    acc.r += rec.r as f64;
                    acc.new_infections += rec.new_infections as f64;
                    acc.isolated_share += rec.isolated_share;
                    acc.locked_share += rec.locked_share;
                    if let Some(l) = rec.lambda_hat {
                        lambda_sum += l;
                        lambda_n += 1;
                    }
                }
                None => {
                    let last = trace.records.last().expect("trace has at least day 0");
                    acc.s += last.s as f64;
                    acc.i += last.i as f64;
                    acc.r += last.r as f64;
                    acc.locked_share += last.locked_share;
                    if last.lambda_hat.is_some() {
                        lambda_n += 1;
                    }
                }
            }
        }
        acc.s /= k;
        acc.i /= k;
        acc.r /= k;
        acc.new_infections /= k;
        acc.isolated_share /= k;
        acc.locked_share /= k;
        if lambda_n > 0 {
            acc.lambda_hat = Some(lambda_sum / lambda_n as f64);
        }
        out.push(acc);
    }
    out
}

/// First day the series attains its maximum, with that value.
pub fn summarize_peak(series: &[f64]) -> Option<(u32, f64)> {
    let mut best: Option<(u32, f64)> = None;
    for (t, &v) in series.iter().enumerate() {
        if best.map_or(true, |(_, bv)| v > bv) {
            best = Some((t as u32, v));
        }
    }
    best
}
