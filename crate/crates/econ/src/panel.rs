//! City-day panels assembled from simulation traces.
//!
//! One row per city and day up to a cutoff. The growth column is the forward
//! change of the infected stock, (I[t+1] - I[t]) / I[t], so a row pairs the
//! growth out of its day with the same day's susceptible share; it is absent
//! on days with no infected and on the last observed day.

use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PanelError {
    #[error("duplicate observation for city {city_id} day {day}")]
    DuplicateCityDay { city_id: u32, day: u32 },
}

/// One simulated day of one city, as delivered by the simulation harness.
#[derive(Debug, Clone, Copy)]
pub struct DayObservation {
    pub day: u32,
    pub i: u64,
    pub s: u64,
    pub r: u64,
    /// Relative contact rate, already normalized to the city's pre-policy
    /// level (1.0 before any response or lockdown).
    pub contacts: f64,
}

/// A city's trace plus the metadata the estimators condition on.
#[derive(Debug, Clone)]
pub struct CityObservations {
    pub city_id: u32,
    /// Population density relative to the reference city.
    pub density: f64,
    pub n: u64,
    /// First day the policy applies; `None` for never-treated cities.
    pub treated_from: Option<u32>,
    pub days: Vec<DayObservation>,
}

/// One panel row; field order mirrors the panel CSV schema.
#[derive(Debug, Clone, Copy)]
pub struct PanelRow {
    pub city_id: u32,
    pub day: u32,
    pub density: f64,
    pub n: u64,
    pub treated: bool,
    pub i_count: u64,
    pub s_count: u64,
    pub r_count: u64,
    pub i_frac: f64,
    pub s_frac: f64,
    pub growth: Option<f64>,
    pub contacts: f64,
}

#[derive(Debug, Clone, Default)]
pub struct PanelDataset {
    pub rows: Vec<PanelRow>,
}

impl PanelDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// City ids present, ascending and deduplicated.
    pub fn city_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.rows.iter().map(|r| r.city_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Days present, ascending and deduplicated.
    pub fn days(&self) -> Vec<u32> {
        let mut days: Vec<u32> = self.rows.iter().map(|r| r.day).collect();
        days.sort_unstable();
        days.dedup();
        days
    }

    /// Ids of cities with at least one treated row.
    pub fn treated_city_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> =
            self.rows.iter().filter(|r| r.treated).map(|r| r.city_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Assembles one row per (city, day) for days strictly below `cutoff_days`.
pub fn build_panel(
    cities: &[CityObservations],
    cutoff_days: u32,
) -> Result<PanelDataset, PanelError> {
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for city in cities {
        for (k, obs) in city.days.iter().enumerate() {
            if obs.day >= cutoff_days {
                continue;
            }
            if !seen.insert((city.city_id, obs.day)) {
                return Err(PanelError::DuplicateCityDay { city_id: city.city_id, day: obs.day });
            }
            let next = city.days.get(k + 1).filter(|n| n.day == obs.day + 1);
            let growth = match (obs.i, next) {
                (0, _) | (_, None) => None,
                (i, Some(n)) => Some((n.i as f64 - i as f64) / i as f64),
            };
            let pop = city.n as f64;
            rows.push(PanelRow {
                city_id: city.city_id,
                day: obs.day,
                density: city.density,
                n: city.n,
                treated: city.treated_from.is_some_and(|t0| obs.day >= t0),
                i_count: obs.i,
                s_count: obs.s,
                r_count: obs.r,
                i_frac: obs.i as f64 / pop,
                s_frac: obs.s as f64 / pop,
                growth,
                contacts: obs.contacts,
            });
        }
    }
    Ok(PanelDataset { rows })
}
