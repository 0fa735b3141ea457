//! The daily simulation loop.
//!
//! Each day advances in a fixed order: agents move, policy and isolation
//! flags update, infections spread, recoveries resolve. Transmission is
//! synchronous: every infection drawn on a day uses the health states from
//! the start of that day, so enumeration order cannot leak into outcomes.
//! An infected agent draws one contagion coin per day; on success it
//! infects every susceptible contact at once. Across k infected contacts
//! the coins are independent, so a susceptible flips with probability
//! 1 - (1 - pi)^k while nearby susceptibles flip together.
//! Every random decision is keyed by (day, agent ids), which is what makes
//! the light trace mode byte-identical to the full sweep.

use crate::behavior;
use crate::city::{City, Health, NEVER};
use crate::grid::CellGrid;
use crate::rng::{KeyedRng, Stream};
use crate::scenario::{BehaviorMode, LockdownPolicy, ScenarioSpec, TraceDetail};
use epi_core::{validate_params, CheckedParams, ParamError, RelocationMode};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("lockdown share {0} is outside [0, 1]")]
    BadLockdownShare(f64),
    #[error("behavioral threshold {0} is outside [0, 1]")]
    BadBehaviorThreshold(f64),
    #[error("behavioral elasticity {0} is outside [0, 1]")]
    BadBehaviorElasticity(f64),
    #[error("empty cohort: nobody was infected during the first five days")]
    EmptyCohort,
}

/// End-of-day snapshot plus the flows observed during the day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayRecord {
    pub day: u32,
    pub s: u64,
    pub i: u64,
    pub r: u64,
    /// Agents newly infected during this day; 0 on day 0.
    pub new_infections: u64,
    /// Share voluntarily isolated and not under lockdown.
    pub isolated_share: f64,
    /// Share under lockdown.
    pub locked_share: f64,
    /// Mean contacts among circulating agents; absent in light traces and
    /// on day 0, where no sweep happens.
    pub avg_contacts: Option<f64>,
    /// Realized force of infection per unit β: (new_infections / s) / β
    /// with this record's own s. Absent when s = 0 or β = 0.
    pub lambda_hat: Option<f64>,
}

/// Full per-day history of one run plus its summary figures.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub scenario_id: String,
    pub seed: u64,
    pub checked: CheckedParams,
    pub records: Vec<DayRecord>,
    /// Share ever infected by the end of the run: (I + R) / N on the last
    /// day, which is R / N whenever the epidemic ran out before the horizon.
    pub final_size: f64,
    /// Largest infected share reached on any day.
    pub peak_i_frac: f64,
    /// First day attaining the peak.
    pub peak_day: u32,
    /// Attribution-based reproduction number; absent when nobody was
    /// infected during the first five days.
    pub r0_hat: Option<f64>,
    /// True when the horizon ran out with infections still active.
    pub non_converged: bool,
}

impl RunTrace {
    /// Infected counts per day as floats, for series comparisons.
    pub fn infected_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.i as f64).collect()
    }
}

fn validate_spec(spec: &ScenarioSpec) -> Result<CheckedParams, EngineError> {
    let checked = validate_params(&spec.params, &spec.geography)?;
    if let Some(ld) = &spec.lockdown {
        if !(0.0..=1.0).contains(&ld.share) {
            return Err(EngineError::BadLockdownShare(ld.share));
        }
    }
    if let BehaviorMode::Global(b) | BehaviorMode::Local(b) = spec.behavior {
        if !(0.0..=1.0).contains(&b.threshold) {
            return Err(EngineError::BadBehaviorThreshold(b.threshold));
        }
        if !(0.0..=1.0).contains(&b.elasticity) {
            return Err(EngineError::BadBehaviorElasticity(b.elasticity));
        }
    }
    Ok(checked)
}

/// One city mid-run; owns all mutable simulation state.
///
/// `step` advances a single day. Tests that need hand-built geometries may
/// overwrite `city` columns between construction and stepping, then call
/// `sync_counts`.
pub struct Simulation {
    checked: CheckedParams,
    behavior: BehaviorMode,
    lockdown: Option<LockdownPolicy>,
    trace: TraceDetail,
    rng: KeyedRng,
    pub city: City,
    grid: CellGrid,
    /// Agents by descending risk aversion; shared by the global isolation
    /// rule and the risk-targeted lockdown.
    risk_order: Vec<u32>,
    participating: Vec<bool>,
    day: u32,
    s_count: u64,
    i_count: u64,
    r_count: u64,
}

impl Simulation {
    pub fn new(spec: &ScenarioSpec, seed: u64) -> Result<Self, EngineError> {
        let checked = validate_spec(spec)?;
        let rng = KeyedRng::new(seed);
        let city = City::build(&checked, &rng);
        let grid = CellGrid::new(
            city.len(),
            checked.geography.city_side,
            checked.params.contagion_radius,
        );
        let risk_order = behavior::risk_order(&city);
        let n = city.len();
        let mut sim = Self {
            checked,
            behavior: spec.behavior,
            lockdown: spec.lockdown,
            trace: spec.trace,
            rng,
            city,
            grid,
            risk_order,
            participating: vec![true; n],
            day: 0,
            s_count: 0,
            i_count: 0,
            r_count: 0,
        };
        sim.sync_counts();
        Ok(sim)
    }

    pub fn checked(&self) -> &CheckedParams {
        &self.checked
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    /// Recomputes cached compartment counts from the city columns.
    pub fn sync_counts(&mut self) {
        let (s, i, r) = self.city.counts();
        self.s_count = s;
        self.i_count = i;
        self.r_count = r;
    }

    /// The day-0 record: the initial condition, before any dynamics.
    pub fn initial_record(&self) -> DayRecord {
        let beta = self.checked.derived.beta;
        DayRecord {
            day: 0,
            s: self.s_count,
            i: self.i_count,
            r: self.r_count,
            new_infections: 0,
            isolated_share: 0.0,
            locked_share: 0.0,
            avg_contacts: None,
            lambda_hat: (self.s_count > 0 && beta > 0.0).then_some(0.0),
        }
    }

    /// Moves the circulating agents. Isolation and lockdown flags from the
    /// previous day pin agents in place; flags update only after movement.
    fn move_agents(&mut self, day: u32) {
        let side = self.checked.geography.city_side;
        let mu = self.checked.params.move_distance;
        match self.checked.geography.relocation_mode {
            RelocationMode::Frozen => {}
            RelocationMode::DailyUniformRedraw => {
                for a in 0..self.city.len() {
                    if self.city.isolated[a] || self.city.locked[a] {
                        continue;
                    }
                    self.city.x[a] = side * self.rng.unit(Stream::Movement, day as u64, a as u64, 0);
                    self.city.y[a] = side * self.rng.unit(Stream::Movement, day as u64, a as u64, 1);
                }
            }
            RelocationMode::Walk => {
                if mu == 0.0 {
                    return;
                }
                for a in 0..self.city.len() {
                    if self.city.isolated[a] || self.city.locked[a] {
                        continue;
                    }
                    let (x, y) = walk_step(
                        &self.rng,
                        day,
                        a as u64,
                        self.city.x[a],
                        self.city.y[a],
                        mu,
                        side,
                    );
                    self.city.x[a] = x;
                    self.city.y[a] = y;
                }
            }
        }
    }

    fn update_flags(&mut self, day: u32) {
        if let Some(ld) = &self.lockdown {
            if day == ld.start_day {
                behavior::select_lockdown(
                    &mut self.city,
                    &self.risk_order,
                    ld.share,
                    ld.selection,
                    &self.rng,
                );
            }
        }
        match self.behavior {
            BehaviorMode::Off => {}
            BehaviorMode::Global(params) => {
                let infected_share = self.i_count as f64 / self.city.len() as f64;
                behavior::apply_global(&mut self.city, &self.risk_order, infected_share, &params);
            }
            BehaviorMode::Local(params) => {
                behavior::apply_local(
                    &mut self.city,
                    &self.grid,
                    self.checked.params.contagion_radius,
                    &params,
                );
            }
        }
        for a in 0..self.city.len() {
            self.participating[a] = !self.city.isolated[a] && !self.city.locked[a];
        }
    }

    /// Advances one day and returns its record.
    pub fn step(&mut self) -> DayRecord {
        let day = self.day + 1;
        self.move_agents(day);
        self.grid.rebuild(&self.city.x, &self.city.y);
        self.update_flags(day);

        let pi = self.checked.params.contagion_prob;
        let radius = self.checked.params.contagion_radius;
        let mut flips: Vec<(u32, u32)> = Vec::new();
        let mut avg_contacts = None;

        let city = &self.city;
        let part = &self.participating;
        let rng = &self.rng;
        match self.trace {
            TraceDetail::Full => {
                let mut pair_contacts: u64 = 0;
                self.grid.for_each_pair(&city.x, &city.y, radius, |a, b| {
                    let (ai, bi) = (a as usize, b as usize);
                    if !(part[ai] && part[bi]) {
                        return;
                    }
                    pair_contacts += 1;
                    match (city.health[ai], city.health[bi]) {
                        (Health::Susceptible, Health::Infected) => {
                            if rng.unit(Stream::Transmission, day as u64, b as u64, 0) < pi {
                                flips.push((a, b));
                            }
                        }
                        (Health::Infected, Health::Susceptible) => {
                            if rng.unit(Stream::Transmission, day as u64, a as u64, 0) < pi {
                                flips.push((b, a));
                            }
                        }
                        _ => {}
                    }
                });
                let circulating = part.iter().filter(|&&v| v).count() as u64;
                if circulating > 0 {
                    avg_contacts = Some(2.0 * pair_contacts as f64 / circulating as f64);
                }
            }
            TraceDetail::Light => {
                for v in 0..city.len() {
                    if city.health[v] != Health::Infected || !part[v] {
                        continue;
                    }
                    if rng.unit(Stream::Transmission, day as u64, v as u64, 0) >= pi {
                        continue;
                    }
                    self.grid.for_each_neighbor(
                        &city.x,
                        &city.y,
                        radius,
                        city.x[v],
                        city.y[v],
                        v as u32,
                        |b| {
                            let bi = b as usize;
                            if part[bi] && city.health[bi] == Health::Susceptible {
                                flips.push((b, v as u32));
                            }
                        },
                    );
                }
            }
        }

        // A susceptible exposed to several transmitting neighbors appears
        // once per neighbor whose daily coin succeeded; it still flips only
        // once. The infector is drawn uniformly among that day's
        // transmitters, so the pick is independent of sweep order once the
        // pairs are sorted.
        flips.sort_unstable();
        let mut new_infections: u64 = 0;
        let mut k = 0;
        while k < flips.len() {
            let sus = flips[k].0;
            let mut end = k + 1;
            while end < flips.len() && flips[end].0 == sus {
                end += 1;
            }
            let m = end - k;
            let u = self.rng.unit(Stream::TransmissionPick, day as u64, sus as u64, 0);
            let pick = ((u * m as f64) as usize).min(m - 1);
            let infector = flips[k + pick].1;
            self.city.health[sus as usize] = Health::Infected;
            self.city.infected_on[sus as usize] = day;
            self.city.infected_by[sus as usize] = infector;
            new_infections += 1;
            k = end;
        }
        self.s_count -= new_infections;
        self.i_count += new_infections;

        let rho = self.checked.params.recovery_prob;
        for a in 0..self.city.len() {
            // Agents infected today recover from tomorrow on at the earliest.
            if self.city.health[a] == Health::Infected
                && self.city.infected_on[a] != NEVER
                && self.city.infected_on[a] < day
                && self.rng.unit(Stream::Recovery, day as u64, a as u64, 0) < rho
            {
                self.city.health[a] = Health::Recovered;
                self.i_count -= 1;
                self.r_count += 1;
            }
        }

        let n = self.city.len() as f64;
        let locked = self.city.locked.iter().filter(|&&v| v).count();
        let isolated_only = (0..self.city.len())
            .filter(|&a| self.city.isolated[a] && !self.city.locked[a])
            .count();
        let beta = self.checked.derived.beta;
        let lambda_hat = if self.s_count > 0 && beta > 0.0 {
            Some(new_infections as f64 / self.s_count as f64 / beta)
        } else {
            None
        };
        self.day = day;
        DayRecord {
            day,
            s: self.s_count,
            i: self.i_count,
            r: self.r_count,
            new_infections,
            isolated_share: isolated_only as f64 / n,
            locked_share: locked as f64 / n,
            avg_contacts,
            lambda_hat,
        }
    }
}

/// One day of directed motion: a step of length `mu` in a uniform direction.
/// A step that would leave the city redraws its direction from the arc that
/// points away from every violated wall (a half turn at an edge, a quarter
/// turn at a corner); after eight failed attempts the position clamps.
fn walk_step(rng: &KeyedRng, day: u32, agent: u64, x: f64, y: f64, mu: f64, side: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let u0 = rng.unit(Stream::Movement, day as u64, agent, 0);
    let mut theta = 2.0 * PI * u0;
    let (mut cx, mut cy) = (x + mu * theta.cos(), y + mu * theta.sin());
    for attempt in 1..=8u64 {
        let inside = (0.0..=side).contains(&cx) && (0.0..=side).contains(&cy);
        if inside {
            return (cx, cy);
        }
        // Arc as (start, length) in turns.
        let (start, len) = match (cx < 0.0, cx > side, cy < 0.0, cy > side) {
            (true, _, true, _) => (0.0, 0.25),   // lower-left: up-right quarter
            (_, true, true, _) => (0.25, 0.25),  // lower-right: up-left quarter
            (_, true, _, true) => (0.5, 0.25),   // upper-right: down-left quarter
            (true, _, _, true) => (0.75, 0.25),  // upper-left: down-right quarter
            (true, _, _, _) => (-0.25, 0.5),     // left wall: rightward half
            (_, true, _, _) => (0.25, 0.5),      // right wall: leftward half
            (_, _, true, _) => (0.0, 0.5),       // bottom wall: upward half
            (_, _, _, true) => (0.5, 0.5),       // top wall: downward half
            _ => unreachable!("candidate was outside"),
        };
        let u = rng.unit(Stream::Movement, day as u64, agent, attempt);
        theta = 2.0 * PI * (start + u * len);
        cx = x + mu * theta.cos();
        cy = y + mu * theta.sin();
    }
    (cx.clamp(0.0, side), cy.clamp(0.0, side))
}

/// Mean infections attributed to the agents infected during days 0-4,
/// counted over each cohort member's whole infectious period. The initial
/// cases belong to the cohort; agents they never infected contribute zeros.
pub fn estimate_r0(city: &City) -> Result<f64, EngineError> {
    let mut in_cohort = vec![false; city.len()];
    let mut cohort = 0u64;
    for a in 0..city.len() {
        if city.infected_on[a] != NEVER && city.infected_on[a] <= 4 {
            in_cohort[a] = true;
            cohort += 1;
        }
    }
    if cohort == 0 {
        return Err(EngineError::EmptyCohort);
    }
    let attributed = city
        .infected_by
        .iter()
        .filter(|&&by| by != NEVER && in_cohort[by as usize])
        .count();
    Ok(attributed as f64 / cohort as f64)
}

/// Runs a scenario to its horizon, stopping early once the epidemic dies.
pub fn run_scenario(spec: &ScenarioSpec, seed: u64) -> Result<RunTrace, EngineError> {
    let mut sim = Simulation::new(spec, seed)?;
    let mut records = Vec::with_capacity(spec.params.horizon as usize + 1);
    records.push(sim.initial_record());
    for _ in 1..=spec.params.horizon {
        let record = sim.step();
        let done = record.i == 0;
        records.push(record);
        if done {
            break;
        }
    }
    let n = sim.checked.params.n_agents as f64;
    let last = records.last().expect("trace has at least day 0");
    let final_size = (last.i + last.r) as f64 / n;
    let non_converged = last.i > 0;
    let (mut peak_i, mut peak_day) = (0u64, 0u32);
    for rec in &records {
        if rec.i > peak_i {
            peak_i = rec.i;
            peak_day = rec.day;
        }
    }
    Ok(RunTrace {
        scenario_id: spec.scenario_id.clone(),
        seed,
        r0_hat: estimate_r0(&sim.city).ok(),
        checked: sim.checked.clone(),
        records,
        final_size,
        peak_i_frac: peak_i as f64 / n,
        peak_day,
        non_converged,
    })
}
