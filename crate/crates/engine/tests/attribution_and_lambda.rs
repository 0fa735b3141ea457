//! Infector attribution, the attribution-based reproduction number, and the
//! realized-hazard diagnostic that separates spatial from mean-field mixing.

use epi_core::{EpidemicParams, Geography, RelocationMode};
use epi_engine::{estimate_r0, replicate, run_scenario, EngineError, ScenarioSpec, Simulation, TraceDetail};

fn quarter_city(horizon: u32) -> ScenarioSpec {
    ScenarioSpec {
        params: EpidemicParams {
            n_agents: 6650,
            initial_infected: 8,
            horizon,
            ..Default::default()
        },
        geography: Geography { city_side: 0.5, ..Default::default() },
        ..Default::default()
    }
}

#[test]
fn infectors_exist_exactly_for_the_non_seeded_cases() {
    let spec = quarter_city(600);
    let mut sim = Simulation::new(&spec, 11).unwrap();
    loop {
        let rec = sim.step();
        if rec.i == 0 || rec.day >= 600 {
            break;
        }
    }
    let city = &sim.city;
    let mut transmitted = 0u64;
    for id in 0..city.len() as u32 {
        let agent = city.agent(id);
        match agent.infected_on {
            None => assert_eq!(agent.infector, None, "never infected agent {} has an infector", id),
            Some(0) => assert_eq!(agent.infector, None, "seeded agent {} has an infector", id),
            Some(day) => {
                let by = agent.infector.expect("transmitted case must carry its infector");
                assert_ne!(by, id, "agent {} infected itself", id);
                let source = city.agent(by);
                let source_day = source.infected_on.expect("infector was never infected");
                assert!(source_day < day, "infector {} caught it on day {} >= {}", by, source_day, day);
                transmitted += 1;
            }
        }
    }
    assert!(transmitted > 1000, "epidemic must actually spread; saw {}", transmitted);
}

#[test]
fn r0_estimate_counts_attributions_to_the_early_cohort() {
    let spec = quarter_city(600);
    let mut sim = Simulation::new(&spec, 11).unwrap();
    loop {
        let rec = sim.step();
        if rec.i == 0 || rec.day >= 600 {
            break;
        }
    }
    // Brute-force recount through the public agent view.
    let city = &sim.city;
    let cohort: Vec<u32> = (0..city.len() as u32)
        .filter(|&id| matches!(city.agent(id).infected_on, Some(d) if d <= 4))
        .collect();
    let attributed = (0..city.len() as u32)
        .filter(|&id| match city.agent(id).infector {
            Some(by) => cohort.binary_search(&by).is_ok(),
            None => false,
        })
        .count();
    let expected = attributed as f64 / cohort.len() as f64;
    assert_eq!(estimate_r0(city).unwrap(), expected);
    assert!(expected > 1.0, "supercritical outbreak implies r0 above one");

    // The trace-level field repeats the same estimate.
    let trace = run_scenario(&spec, 11).unwrap();
    assert_eq!(trace.r0_hat, Some(expected));
}

#[test]
fn r0_estimate_is_zero_without_transmission_and_absent_without_a_cohort() {
    let mut spec = quarter_city(20);
    spec.params.contagion_prob = 0.0;
    let trace = run_scenario(&spec, 3).unwrap();
    assert_eq!(trace.r0_hat, Some(0.0));

    let mut empty = quarter_city(5);
    empty.params.initial_infected = 0;
    let mut sim = Simulation::new(&empty, 3).unwrap();
    sim.step();
    assert_eq!(estimate_r0(&sim.city), Err(EngineError::EmptyCohort));
    assert_eq!(run_scenario(&empty, 3).unwrap().r0_hat, None);
}

/// Walking agents reuse their local pocket of immunity, so the realized
/// hazard per susceptible undershoots what city-wide prevalence implies
/// early on and overshoots it once the front reaches fresh territory.
/// Redrawing every position each day erases that geometry.
#[test]
fn realized_hazard_departs_from_mean_field_only_under_local_mixing() {
    let seeds: Vec<u64> = (1..=20).collect();
    let mut spec = ScenarioSpec::default();
    spec.trace = TraceDetail::Light;
    let walk = replicate(&spec, &seeds).unwrap();
    spec.geography.relocation_mode = RelocationMode::DailyUniformRedraw;
    let redraw = replicate(&spec, &seeds).unwrap();

    let n = spec.params.n_agents as f64;
    let gap = |mean: &[epi_engine::MeanDay]| -> (Vec<f64>, Vec<f64>) {
        let i_frac: Vec<f64> = mean.iter().map(|d| d.i / n).collect();
        let lambda: Vec<f64> = mean
            .iter()
            .map(|d| d.lambda_hat.expect("supercritical run keeps s positive"))
            .collect();
        (i_frac, lambda)
    };

    let (i_frac, lambda) = gap(&walk.mean);
    let mut early_days = 0;
    let mut late_overshoot = false;
    for t in 0..i_frac.len() {
        if early_days < 10 && i_frac[t] > 0.01 {
            assert!(
                lambda[t] < i_frac[t],
                "day {}: hazard {} must undershoot prevalence {} early",
                t,
                lambda[t],
                i_frac[t]
            );
            early_days += 1;
        }
        if early_days == 10 && lambda[t] > i_frac[t] {
            late_overshoot = true;
        }
    }
    assert_eq!(early_days, 10, "outbreak must clear the 1% prevalence mark");
    assert!(late_overshoot, "hazard must overtake prevalence in some later window");

    let mean_abs_gap = |i_frac: &[f64], lambda: &[f64]| {
        let mut total = 0.0;
        for t in 0..i_frac.len() {
            total += (lambda[t] - i_frac[t]).abs();
        }
        total / i_frac.len() as f64
    };
    let walk_gap = mean_abs_gap(&i_frac, &lambda);
    let (ri, rl) = gap(&redraw.mean);
    let redraw_gap = mean_abs_gap(&ri, &rl);
    assert!(
        redraw_gap < walk_gap,
        "daily redraw gap {} must undercut the walking gap {}",
        redraw_gap,
        walk_gap
    );
}
