//! Scratch probe: timing and recovery quality of fit_pi_mu fixtures.

use epi_calib::{fit_pi_mu, CalibrationTarget, SearchConfig};
use epi_core::{growth_rates, EpidemicParams, Geography, OutbreakMode};
use epi_engine::{replicate, BehaviorMode, ScenarioSpec, TraceDetail};
use std::time::Instant;

fn template(n: u64, i0: u64, horizon: u32) -> ScenarioSpec {
    let side = (n as f64 / 26_600.0).sqrt();
    ScenarioSpec {
        scenario_id: String::from("probe"),
        params: EpidemicParams { n_agents: n, initial_infected: i0, horizon, ..EpidemicParams::default() },
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

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(6650);
    let i0: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(30);
    let seeds_n: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(10);
    let days: usize = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(35);

    let truth = (0.054, 0.034);
    let tpl = template(n, i0, days as u32);
    let seeds: Vec<u64> = (1..=seeds_n).collect();

    let t0 = Instant::now();
    let summary = replicate(&tpl, &seeds).unwrap();
    let gen_time = t0.elapsed();
    let mean_i: Vec<f64> = summary.mean.iter().map(|d| d.i).collect();
    let growth: Vec<f64> = growth_rates(&mean_i).iter().map(|s| s.value).collect();
    println!("target gen: {gen_time:?} for {} runs of {} days", seeds_n, days);
    println!("growth head: {:?}", &growth[..6.min(growth.len())]);
    println!("growth len: {} mean_i[35] = {:.1}", growth.len(), mean_i[days.min(mean_i.len()-1)]);
    assert_eq!(growth.len(), days, "target must cover the full window");

    let target = CalibrationTarget::new(growth, None).unwrap();
    let search = SearchConfig {
        pi_bounds: (0.02, 0.12),
        mu_bounds: (0.01, 0.08),
        grid_points: 4,
        refinement_iters: 4,
        seeds: seeds.clone(),
    };
    let t1 = Instant::now();
    let fit = fit_pi_mu(&target, &tpl, &search).unwrap();
    println!(
        "fit: {:?} evals={} pi={:.4} mu={:.4} loss={:.3e}",
        t1.elapsed(),
        fit.evaluations,
        fit.pi,
        fit.mu,
        fit.loss
    );
    println!(
        "rel err: pi {:+.1}% mu {:+.1}%",
        100.0 * (fit.pi - truth.0) / truth.0,
        100.0 * (fit.mu - truth.1) / truth.1
    );
}
