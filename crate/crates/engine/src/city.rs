//! Agent population: placement, epidemic seeding, and per-agent traits.
//!
//! Agent attributes live in parallel vectors indexed by agent id; hot loops
//! touch only the columns they need. `AgentRecord` gathers one agent's row
//! for inspection and tests.

use crate::rng::{KeyedRng, Stream};
use epi_core::{CheckedParams, DensityMode, OutbreakMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Health {
    Susceptible,
    Infected,
    Recovered,
}

/// Sentinel for agents that were never infected.
pub const NEVER: u32 = u32::MAX;

/// Column-wise agent storage for one simulated city.
pub struct City {
    pub side: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub health: Vec<Health>,
    /// Day the agent got infected; `NEVER` until then. Initial cases carry 0.
    pub infected_on: Vec<u32>,
    /// Id of the agent that transmitted the infection; `NEVER` for the
    /// never-infected and for the seeded cases, which have no infector.
    pub infected_by: Vec<u32>,
    /// Uniform [0, 1) trait governing who isolates first.
    pub risk_aversion: Vec<f64>,
    pub isolated: Vec<bool>,
    pub locked: Vec<bool>,
}

/// One agent's attributes gathered across columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentRecord {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub health: Health,
    pub infected_on: Option<u32>,
    pub infector: Option<u32>,
    pub risk_aversion: f64,
    pub isolated: bool,
    pub locked: bool,
}

impl City {
    /// Places agents, draws traits, and seeds the outbreak.
    pub fn build(checked: &CheckedParams, rng: &KeyedRng) -> Self {
        let n = checked.params.n_agents as usize;
        let side = checked.geography.city_side;
        let mut city = Self {
            side,
            x: vec![0.0; n],
            y: vec![0.0; n],
            health: vec![Health::Susceptible; n],
            infected_on: vec![NEVER; n],
            infected_by: vec![NEVER; n],
            risk_aversion: vec![0.0; n],
            isolated: vec![false; n],
            locked: vec![false; n],
        };
        match checked.geography.density_mode {
            DensityMode::Uniform => {
                for a in 0..n {
                    city.x[a] = side * rng.unit(Stream::Placement, a as u64, 0, 0);
                    city.y[a] = side * rng.unit(Stream::Placement, a as u64, 0, 1);
                }
            }
            DensityMode::Heterogeneous => place_radial(&mut city, rng),
        }
        for a in 0..n {
            city.risk_aversion[a] = rng.unit(Stream::RiskAversion, a as u64, 0, 0);
        }
        seed_outbreak(&mut city, checked, rng);
        city
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn agent(&self, id: u32) -> AgentRecord {
        let a = id as usize;
        AgentRecord {
            id,
            x: self.x[a],
            y: self.y[a],
            health: self.health[a],
            infected_on: (self.infected_on[a] != NEVER).then_some(self.infected_on[a]),
            infector: (self.infected_by[a] != NEVER).then_some(self.infected_by[a]),
            risk_aversion: self.risk_aversion[a],
            isolated: self.isolated[a],
            locked: self.locked[a],
        }
    }

    /// Current (susceptible, infected, recovered) counts.
    pub fn counts(&self) -> (u64, u64, u64) {
        let mut c = (0, 0, 0);
        for h in &self.health {
            match h {
                Health::Susceptible => c.0 += 1,
                Health::Infected => c.1 += 1,
                Health::Recovered => c.2 += 1,
            }
        }
        c
    }
}

/// Radial profile: distance |N(0, side/2)| from the center, truncated at
/// side/2 by redrawing, direction uniform. Every position stays inside the
/// city because the radius never exceeds the distance to the nearest wall.
fn place_radial(city: &mut City, rng: &KeyedRng) {
    let side = city.side;
    let center = 0.5 * side;
    for a in 0..city.x.len() {
        let mut r = 0.5 * side;
        for attempt in 0..64 {
            let z = rng.standard_normal(Stream::Placement, a as u64, attempt, 0);
            let candidate = z.abs() * 0.5 * side;
            if candidate <= 0.5 * side {
                r = candidate;
                break;
            }
        }
        let theta =
            2.0 * std::f64::consts::PI * rng.unit(Stream::Placement, a as u64, 0, 2);
        city.x[a] = center + r * theta.cos();
        city.y[a] = center + r * theta.sin();
    }
}

fn infect_nearest(city: &mut City, anchor: (f64, f64), quota: usize) {
    let mut by_distance: Vec<(f64, u32)> = (0..city.x.len() as u32)
        .filter(|&a| city.health[a as usize] == Health::Susceptible)
        .map(|a| {
            let dx = city.x[a as usize] - anchor.0;
            let dy = city.y[a as usize] - anchor.1;
            (dx * dx + dy * dy, a)
        })
        .collect();
    by_distance.sort_unstable_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
    for &(_, a) in by_distance.iter().take(quota) {
        city.health[a as usize] = Health::Infected;
        city.infected_on[a as usize] = 0;
    }
}

fn seed_outbreak(city: &mut City, checked: &CheckedParams, rng: &KeyedRng) {
    let i0 = checked.params.initial_infected as usize;
    if i0 == 0 {
        return;
    }
    match checked.geography.outbreak_mode {
        OutbreakMode::Cluster { anchor } => infect_nearest(city, anchor, i0),
        OutbreakMode::Random => {
            let mut keys: Vec<(u64, u32)> = (0..city.x.len() as u32)
                .map(|a| (rng.bits(Stream::Outbreak, a as u64, 0, 0), a))
                .collect();
            keys.sort_unstable();
            for &(_, a) in keys.iter().take(i0) {
                city.health[a as usize] = Health::Infected;
                city.infected_on[a as usize] = 0;
            }
        }
        OutbreakMode::SymmetricClusters { k } => {
            // Each tile hosts the single-cluster offset (0.25, 0.25)
            // mirrored toward its nearest city corner. Tile boundaries then
            // act as statistical mirror planes: expanding fronts meet them
            // exactly when a wall would have reflected them, so every tile
            // evolves like a walled city seeded alone.
            let m = (k as f64).sqrt().round() as u32;
            let tile = city.side / m as f64;
            let offset = |idx: u32| if 2 * idx + 1 <= m { 0.25 } else { 0.75 };
            for t in 0..k {
                let quota = (i0 / k as usize) + usize::from(t < (i0 % k as usize) as u32);
                let ax = (t % m) as f64 + offset(t % m);
                let ay = (t / m) as f64 + offset(t / m);
                infect_nearest(city, (ax * tile, ay * tile), quota);
            }
        }
    }
}
