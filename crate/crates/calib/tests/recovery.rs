//! Known-truth recovery: a target generated by the engine at a known
//! parameter pair must be matched by the fit to within 20% on each axis.
//! The city is a density-preserving miniature of the baseline, so the
//! growth dynamics carry over at a fraction of the runtime.

use epi_calib::{evaluate_loss, fit_pi_mu, CalibrationTarget, SearchConfig};
use epi_core::{growth_rates, EpidemicParams, Geography, OutbreakMode};
use epi_engine::{replicate, BehaviorMode, ScenarioSpec, TraceDetail};

const TRUE_PI: f64 = 0.054;
const TRUE_MU: f64 = 0.034;
const WINDOW_DAYS: usize = 35;

fn fixture_template() -> ScenarioSpec {
    let n_agents = 2_956;
    // Same density as the baseline city, so contact counts match.
    let side = (n_agents as f64 / 26_600.0).sqrt();
    ScenarioSpec {
        scenario_id: String::from("recovery-fixture"),
        params: EpidemicParams {
            n_agents,
            initial_infected: 16,
            horizon: WINDOW_DAYS as u32,
            ..EpidemicParams::default()
        },
        geography: Geography {
            city_side: side,
            outbreak_mode: OutbreakMode::Random,
            ..Geography::default()
        },
        behavior: BehaviorMode::Off,
        lockdown: None,
        trace: TraceDetail::Light,
    }
}

fn self_generated_target(template: &ScenarioSpec, seeds: &[u64]) -> CalibrationTarget {
    let summary = replicate(template, seeds).unwrap();
    let mean_i: Vec<f64> = summary.mean.iter().map(|d| d.i).collect();
    let growth: Vec<f64> = growth_rates(&mean_i).iter().map(|s| s.value).collect();
    assert_eq!(growth.len(), WINDOW_DAYS, "epidemic must survive the window");
    CalibrationTarget::new(growth, None).unwrap()
}

#[test]
fn fit_recovers_the_generating_parameters_within_twenty_percent() {
    let template = fixture_template();
    let seeds: Vec<u64> = (1..=6).collect();
    let target = self_generated_target(&template, &seeds);

    let search = SearchConfig {
        pi_bounds: (0.02, 0.12),
        mu_bounds: (0.01, 0.08),
        grid_points: 4,
        refinement_iters: 4,
        seeds: seeds.clone(),
    };
    let fit = fit_pi_mu(&target, &template, &search).unwrap();

    let pi_err = (fit.pi - TRUE_PI).abs() / TRUE_PI;
    let mu_err = (fit.mu - TRUE_MU).abs() / TRUE_MU;
    assert!(pi_err <= 0.20, "pi {} misses truth {TRUE_PI} by {:.1}%", fit.pi, 100.0 * pi_err);
    assert!(mu_err <= 0.20, "mu {} misses truth {TRUE_MU} by {:.1}%", fit.mu, 100.0 * mu_err);

    // With target and search sharing one seed set, the truth scores an
    // exact zero, so no grid point may beat the returned loss by much and
    // displaced candidates must score worse than the truth itself.
    let at_truth = evaluate_loss(&target, &template, &seeds, TRUE_PI, TRUE_MU)
        .unwrap()
        .expect("truth survives the window");
    assert_eq!(at_truth, 0.0);
    for factor in [0.5, 1.5] {
        let displaced = evaluate_loss(&target, &template, &seeds, TRUE_PI * factor, TRUE_MU)
            .unwrap()
            .expect("displaced candidate survives the window");
        assert!(at_truth <= displaced);
        assert!(displaced > 0.0);
    }
}
