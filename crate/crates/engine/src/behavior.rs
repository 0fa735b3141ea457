//! Voluntary isolation and mandated lockdown.
//!
//! Isolation is recomputed every day from scratch. Under the global rule the
//! most risk-averse share of the whole city withdraws; under the local rule
//! each agent compares itself against the agents it can see within the
//! contact radius. Lockdown flags are drawn once on the start day and stay
//! frozen afterwards.

use crate::city::{City, Health};
use crate::grid::CellGrid;
use crate::rng::{KeyedRng, Stream};
use epi_core::{alpha_response, BehavioralParams};

/// Share of the population that withdraws at a given infected share: the
/// contacts foregone by the aggregate response, 1 - α.
pub fn isolation_share(infected_share: f64, params: &BehavioralParams) -> f64 {
    1.0 - alpha_response(infected_share, params)
}

/// Ranking that decides who isolates first under the global rule and the
/// risk-targeted lockdown: risk aversion descending, ties by id. The top-k
/// prefix property makes stricter responses nest inside milder ones.
pub fn risk_order(city: &City) -> Vec<u32> {
    let mut order: Vec<u32> = (0..city.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        city.risk_aversion[b as usize]
            .total_cmp(&city.risk_aversion[a as usize])
            .then(a.cmp(&b))
    });
    order
}

/// City-wide rule: the ⌊share · N⌋ most risk-averse agents isolate.
pub fn apply_global(city: &mut City, order: &[u32], infected_share: f64, params: &BehavioralParams) {
    city.isolated.fill(false);
    let k = (isolation_share(infected_share, params) * city.len() as f64).floor() as usize;
    for &a in &order[..k.min(order.len())] {
        city.isolated[a as usize] = true;
    }
}

/// Neighborhood rule: each agent reacts to the infected share among the
/// agents within `radius` and isolates when it falls in the most risk-averse
/// `isolation_share` quantile of that same neighborhood (self included).
/// Ranks are one-based, so a group of g agents isolates its ⌊share · g⌋ most
/// risk-averse members, mirroring the global quota. Agents that see nobody
/// never isolate.
pub fn apply_local(city: &mut City, grid: &CellGrid, radius: f64, params: &BehavioralParams) {
    let n = city.len();
    let mut seen = vec![0u32; n];
    let mut seen_infected = vec![0u32; n];
    let mut more_averse = vec![0u32; n];
    grid.for_each_pair(&city.x, &city.y, radius, |a, b| {
        let (a, b) = (a as usize, b as usize);
        seen[a] += 1;
        seen[b] += 1;
        if city.health[b] == Health::Infected {
            seen_infected[a] += 1;
        }
        if city.health[a] == Health::Infected {
            seen_infected[b] += 1;
        }
        match city.risk_aversion[a].total_cmp(&city.risk_aversion[b]) {
            std::cmp::Ordering::Less => more_averse[a] += 1,
            std::cmp::Ordering::Greater => more_averse[b] += 1,
            std::cmp::Ordering::Equal => {}
        }
    });
    for a in 0..n {
        city.isolated[a] = if seen[a] == 0 {
            false
        } else {
            let local_share = seen_infected[a] as f64 / seen[a] as f64;
            let target = isolation_share(local_share, params);
            let group = (seen[a] + 1) as f64;
            ((more_averse[a] + 1) as f64 / group) < target
        };
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LockdownSelection {
    /// Uniformly random ⌊share · N⌋ agents.
    Random,
    /// The most risk-averse ⌊share · N⌋ agents.
    ByRiskAversion,
}

/// Locks ⌊share · N⌋ agents in place; flags are never cleared afterwards.
pub fn select_lockdown(
    city: &mut City,
    order: &[u32],
    share: f64,
    selection: LockdownSelection,
    rng: &KeyedRng,
) {
    let k = ((share * city.len() as f64).floor() as usize).min(city.len());
    match selection {
        LockdownSelection::ByRiskAversion => {
            for &a in &order[..k] {
                city.locked[a as usize] = true;
            }
        }
        LockdownSelection::Random => {
            let mut keys: Vec<(u64, u32)> = (0..city.len() as u32)
                .map(|a| (rng.bits(Stream::LockdownSelect, a as u64, 0, 0), a))
                .collect();
            keys.sort_unstable();
            for &(_, a) in keys.iter().take(k) {
                city.locked[a as usize] = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use epi_core::{validate_params, EpidemicParams, Geography};

    fn small_city(n: u64, seed: u64) -> City {
        let checked = validate_params(
            &EpidemicParams { n_agents: n, initial_infected: 0, ..Default::default() },
            &Geography::default(),
        )
        .unwrap();
        City::build(&checked, &KeyedRng::new(seed))
    }

    #[test]
    fn full_infection_targets_the_survey_isolation_share() {
        // 1 - 0.01^0.12 of the city withdraws when everyone is infected.
        assert!((isolation_share(1.0, &BehavioralParams::default()) - 0.424_56).abs() < 1e-4);
        assert_eq!(isolation_share(0.005, &BehavioralParams::default()), 0.0);
    }

    #[test]
    fn global_rule_isolates_the_most_risk_averse_prefix() {
        let mut city = small_city(1000, 4);
        let order = risk_order(&city);
        apply_global(&mut city, &order, 0.10, &BehavioralParams::default());
        let isolated = city.isolated.iter().filter(|&&v| v).count();
        let expected =
            (isolation_share(0.10, &BehavioralParams::default()) * 1000.0).floor() as usize;
        assert_eq!(isolated, expected);
        let min_isolated = (0..1000)
            .filter(|&a| city.isolated[a])
            .map(|a| city.risk_aversion[a])
            .fold(f64::INFINITY, f64::min);
        let max_free = (0..1000)
            .filter(|&a| !city.isolated[a])
            .map(|a| city.risk_aversion[a])
            .fold(0.0, f64::max);
        assert!(min_isolated >= max_free);
    }

    #[test]
    fn stronger_prevalence_nests_the_isolated_sets() {
        let mut city = small_city(500, 9);
        let order = risk_order(&city);
        apply_global(&mut city, &order, 0.05, &BehavioralParams::default());
        let mild = city.isolated.clone();
        apply_global(&mut city, &order, 0.50, &BehavioralParams::default());
        for a in 0..500 {
            assert!(!mild[a] || city.isolated[a]);
        }
    }

    #[test]
    fn local_rule_with_no_infection_isolates_nobody() {
        let mut city = small_city(300, 5);
        let mut grid = CellGrid::new(300, 1.0, 0.05);
        grid.rebuild(&city.x, &city.y);
        apply_local(&mut city, &grid, 0.05, &BehavioralParams::default());
        assert!(city.isolated.iter().all(|&v| !v));
    }

    #[test]
    fn local_rule_reacts_only_near_the_infected() {
        let mut city = small_city(400, 6);
        // Infect everyone in the lower-left quadrant, far from the rest.
        for a in 0..400 {
            if city.x[a] < 0.3 && city.y[a] < 0.3 {
                city.health[a] = Health::Infected;
            }
        }
        let radius = 0.05;
        let mut grid = CellGrid::new(400, 1.0, radius);
        grid.rebuild(&city.x, &city.y);
        apply_local(&mut city, &grid, radius, &BehavioralParams::default());
        for a in 0..400 {
            if city.isolated[a] {
                // Margin of one contact radius around the infected block.
                assert!(city.x[a] < 0.3 + radius && city.y[a] < 0.3 + radius);
            }
        }
        assert!(city.isolated.iter().any(|&v| v), "someone near the outbreak must react");
    }

    #[test]
    fn lockdown_selections_pick_the_requested_count_once() {
        let mut city = small_city(1000, 8);
        let order = risk_order(&city);
        select_lockdown(&mut city, &order, 0.25, LockdownSelection::Random, &KeyedRng::new(8));
        assert_eq!(city.locked.iter().filter(|&&v| v).count(), 250);
        let first = city.locked.clone();
        // Reapplying is idempotent because flags only accumulate.
        select_lockdown(&mut city, &order, 0.25, LockdownSelection::Random, &KeyedRng::new(8));
        assert_eq!(first, city.locked);

        let mut by_risk = small_city(1000, 8);
        select_lockdown(
            &mut by_risk,
            &order,
            0.25,
            LockdownSelection::ByRiskAversion,
            &KeyedRng::new(8),
        );
        let min_locked = (0..1000)
            .filter(|&a| by_risk.locked[a])
            .map(|a| by_risk.risk_aversion[a])
            .fold(f64::INFINITY, f64::min);
        let max_free = (0..1000)
            .filter(|&a| !by_risk.locked[a])
            .map(|a| by_risk.risk_aversion[a])
            .fold(0.0, f64::max);
        assert!(min_locked >= max_free);
    }
}
