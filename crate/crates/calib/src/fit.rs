//! Simulated-moment fit of the contagion probability and movement distance.
//!
//! Each candidate pair is scored by running the scenario over a fixed seed
//! set, averaging the infected series across seeds, and taking the weighted
//! mean squared error between its daily growth rates and the target series.
//! Reusing one seed set for every candidate keeps the loss surface
//! deterministic, so a coarse grid scan followed by coordinate descent with
//! halving steps needs no derivatives.

use crate::CalibError;
use epi_core::growth_rates;
use epi_engine::{replicate, ScenarioSpec};
use std::collections::HashMap;

/// Shortest target series the fit accepts.
const MIN_TARGET_DAYS: usize = 5;

/// Daily growth rates the simulation should reproduce, with optional
/// per-day weights (uniform when absent).
#[derive(Debug, Clone)]
pub struct CalibrationTarget {
    target_growth: Vec<f64>,
    weights: Option<Vec<f64>>,
}

impl CalibrationTarget {
    pub fn new(target_growth: Vec<f64>, weights: Option<Vec<f64>>) -> Result<Self, CalibError> {
        let finite = target_growth.iter().filter(|g| g.is_finite()).count();
        if finite < MIN_TARGET_DAYS || finite != target_growth.len() {
            return Err(CalibError::TargetTooShort { min: MIN_TARGET_DAYS, got: finite });
        }
        if let Some(w) = &weights {
            if w.len() != target_growth.len() {
                return Err(CalibError::WeightMismatch {
                    days: target_growth.len(),
                    weights: w.len(),
                });
            }
            if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
                return Err(CalibError::BadWeights);
            }
        }
        Ok(Self { target_growth, weights })
    }

    pub fn days(&self) -> usize {
        self.target_growth.len()
    }

    pub fn growth(&self) -> &[f64] {
        &self.target_growth
    }
}

/// Search region and effort for `fit_pi_mu`.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Bounds on the per-contact infection probability.
    pub pi_bounds: (f64, f64),
    /// Bounds on the daily movement distance.
    pub mu_bounds: (f64, f64),
    /// Coarse grid points per axis.
    pub grid_points: usize,
    /// Step-halving rounds of coordinate descent after the grid scan.
    pub refinement_iters: usize,
    /// Seed set shared by every candidate evaluation.
    pub seeds: Vec<u64>,
}

impl SearchConfig {
    fn validate(&self) -> Result<(), CalibError> {
        for (lo, hi) in [self.pi_bounds, self.mu_bounds] {
            if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
                return Err(CalibError::BadBounds);
            }
        }
        if self.pi_bounds.1 > 1.0 {
            return Err(CalibError::BadBounds);
        }
        if self.grid_points < 2 {
            return Err(CalibError::GridTooCoarse);
        }
        if self.seeds.is_empty() {
            return Err(CalibError::NoSeeds);
        }
        Ok(())
    }
}

/// One coarse-grid evaluation; `loss` is absent when the candidate epidemic
/// went extinct before covering the target window.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub pi: f64,
    pub mu: f64,
    pub loss: Option<f64>,
}

/// Best point found, its loss, and the coarse grid it started from.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub pi: f64,
    pub mu: f64,
    pub loss: f64,
    pub coarse_grid: Vec<GridPoint>,
    /// Candidate evaluations performed, grid and refinement together.
    pub evaluations: usize,
}

/// Memoizes candidate losses; coordinate descent revisits points freely.
struct Objective<'a> {
    target: &'a CalibrationTarget,
    template: &'a ScenarioSpec,
    seeds: &'a [u64],
    cache: HashMap<(u64, u64), Option<f64>>,
    evaluations: usize,
}

impl Objective<'_> {
    /// Weighted MSE between simulated and target growth, None when the
    /// across-seed mean infected series hits zero inside the window.
    fn loss(&mut self, pi: f64, mu: f64) -> Result<Option<f64>, CalibError> {
        if let Some(&hit) = self.cache.get(&(pi.to_bits(), mu.to_bits())) {
            return Ok(hit);
        }
        let mut spec = self.template.clone();
        spec.params.contagion_prob = pi;
        spec.params.move_distance = mu;
        // Day 0 through day `days` covers every growth rate in the window.
        spec.params.horizon = self.target.days() as u32;

        let summary = replicate(&spec, self.seeds)?;
        let mean_i: Vec<f64> = summary.mean.iter().map(|d| d.i).collect();
        let growth = growth_rates(&mean_i);

        let days = self.target.days();
        let covered = growth.len() >= days
            && growth[..days].iter().enumerate().all(|(t, s)| s.day == t as u32);
        let loss = covered.then(|| {
            let (mut num, mut den) = (0.0, 0.0);
            for (t, sample) in growth[..days].iter().enumerate() {
                let w = self.target.weights.as_ref().map_or(1.0, |w| w[t]);
                num += w * (sample.value - self.target.target_growth[t]).powi(2);
                den += w;
            }
            num / den
        });
        self.cache.insert((pi.to_bits(), mu.to_bits()), loss);
        self.evaluations += 1;
        Ok(loss)
    }
}

/// Loss of one candidate pair under the same objective `fit_pi_mu`
/// minimizes; None when the candidate epidemic dies inside the window.
pub fn evaluate_loss(
    target: &CalibrationTarget,
    template: &ScenarioSpec,
    seeds: &[u64],
    pi: f64,
    mu: f64,
) -> Result<Option<f64>, CalibError> {
    let mut objective =
        Objective { target, template, seeds, cache: HashMap::new(), evaluations: 0 };
    objective.loss(pi, mu)
}

fn axis(bounds: (f64, f64), points: usize) -> Vec<f64> {
    let (lo, hi) = bounds;
    (0..points).map(|j| lo + (hi - lo) * j as f64 / (points - 1) as f64).collect()
}

/// Fits (π, μ) to the target growth series with the template's remaining
/// parameters held fixed. Deterministic given the seed set.
pub fn fit_pi_mu(
    target: &CalibrationTarget,
    template: &ScenarioSpec,
    search: &SearchConfig,
) -> Result<FitResult, CalibError> {
    search.validate()?;
    let mut objective = Objective {
        target,
        template,
        seeds: &search.seeds,
        cache: HashMap::new(),
        evaluations: 0,
    };

    let mut coarse_grid = Vec::with_capacity(search.grid_points * search.grid_points);
    let mut best: Option<(f64, f64, f64)> = None;
    for &pi in &axis(search.pi_bounds, search.grid_points) {
        for &mu in &axis(search.mu_bounds, search.grid_points) {
            let loss = objective.loss(pi, mu)?;
            coarse_grid.push(GridPoint { pi, mu, loss });
            if let Some(l) = loss {
                if best.is_none_or(|(b, _, _)| l < b) {
                    best = Some((l, pi, mu));
                }
            }
        }
    }
    let Some((mut loss, mut pi, mut mu)) = best else {
        return Err(CalibError::TargetUnreachable);
    };

    let spacing = |b: (f64, f64)| (b.1 - b.0) / (search.grid_points - 1) as f64;
    let (mut step_pi, mut step_mu) = (spacing(search.pi_bounds), spacing(search.mu_bounds));
    let clamp = |x: f64, b: (f64, f64)| x.clamp(b.0, b.1);
    for _ in 0..search.refinement_iters {
        step_pi /= 2.0;
        step_mu /= 2.0;
        // Walk while any single-coordinate move at this step improves.
        loop {
            let mut improved = false;
            let moves = [
                (clamp(pi + step_pi, search.pi_bounds), mu),
                (clamp(pi - step_pi, search.pi_bounds), mu),
                (pi, clamp(mu + step_mu, search.mu_bounds)),
                (pi, clamp(mu - step_mu, search.mu_bounds)),
            ];
            for (cand_pi, cand_mu) in moves {
                if cand_pi == pi && cand_mu == mu {
                    continue;
                }
                if let Some(l) = objective.loss(cand_pi, cand_mu)? {
                    if l < loss {
                        (loss, pi, mu) = (l, cand_pi, cand_mu);
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }

    Ok(FitResult { pi, mu, loss, coarse_grid, evaluations: objective.evaluations })
}
