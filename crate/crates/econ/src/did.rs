//! Two-way fixed-effects treatment regressions on city-day panels.
//!
//! The treatment equation is estimated by dummy encoding with one reference
//! city and one reference day dropped. A double-demeaned within estimator is
//! provided as an independent cross-check; on balanced panels the two agree
//! on the treatment coefficient. Fitted values can be re-aggregated per day
//! to compare the regression's implied dynamics against the simulated ones.

use crate::ols::{ols, OlsError, RegressionResult};
use crate::panel::{PanelDataset, PanelRow};
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DidError {
    #[error("panel needs at least 2 cities and 2 days; found {cities} and {days}")]
    TooFewGroups { cities: usize, days: usize },
    #[error("treatment never varies in the panel; the coefficient is not identified")]
    NoTreatmentVariation,
    #[error("outcome has no usable rows")]
    EmptyOutcome,
    #[error(transparent)]
    Ols(#[from] OlsError),
}

/// Outcome column the regression explains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DidOutcome {
    /// Infected stock as a fraction of the city population.
    InfectedFrac,
    /// Relative contact rate.
    Contacts,
    /// Forward growth rate of the infected stock; rows without it drop.
    Growth,
}

/// Optional controls beyond the fixed effects and the treatment dummy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtraRegressor {
    Density,
    DensityTimesTreated,
}

#[derive(Debug, Clone)]
pub struct DidSpec {
    pub outcome: DidOutcome,
    pub include_unit_fe: bool,
    pub include_time_fe: bool,
    pub extra_regressors: Vec<ExtraRegressor>,
}

impl DidSpec {
    /// Plain two-way specification for an outcome, no extra controls.
    pub fn two_way(outcome: DidOutcome) -> Self {
        DidSpec {
            outcome,
            include_unit_fe: true,
            include_time_fe: true,
            extra_regressors: Vec::new(),
        }
    }

    /// Two-way specification with a density-by-treatment interaction. The
    /// density main effect is constant within a city and therefore already
    /// absorbed by the unit fixed effects; including it would be collinear.
    pub fn with_density_interaction(outcome: DidOutcome) -> Self {
        DidSpec {
            outcome,
            include_unit_fe: true,
            include_time_fe: true,
            extra_regressors: vec![ExtraRegressor::DensityTimesTreated],
        }
    }
}

fn outcome_value(row: &PanelRow, outcome: DidOutcome) -> Option<f64> {
    match outcome {
        DidOutcome::InfectedFrac => Some(row.i_frac),
        DidOutcome::Contacts => Some(row.contacts),
        DidOutcome::Growth => row.growth,
    }
}

fn extra_value(row: &PanelRow, extra: ExtraRegressor) -> f64 {
    match extra {
        ExtraRegressor::Density => row.density,
        ExtraRegressor::DensityTimesTreated => row.density * f64::from(row.treated),
    }
}

fn extra_name(extra: ExtraRegressor) -> &'static str {
    match extra {
        ExtraRegressor::Density => "density",
        ExtraRegressor::DensityTimesTreated => "density_x_treated",
    }
}

/// Rows that enter the regression for this outcome, in panel order.
fn usable_rows<'p>(panel: &'p PanelDataset, spec: &DidSpec) -> Vec<&'p PanelRow> {
    panel.rows.iter().filter(|r| outcome_value(r, spec.outcome).is_some()).collect()
}

/// Estimates the treatment equation; the treatment coefficient is named
/// `treated` in the result.
pub fn did_estimate(panel: &PanelDataset, spec: &DidSpec) -> Result<RegressionResult, DidError> {
    let rows = usable_rows(panel, spec);
    if rows.is_empty() {
        return Err(DidError::EmptyOutcome);
    }

    let mut cities: Vec<u32> = rows.iter().map(|r| r.city_id).collect();
    cities.sort_unstable();
    cities.dedup();
    let mut days: Vec<u32> = rows.iter().map(|r| r.day).collect();
    days.sort_unstable();
    days.dedup();
    if cities.len() < 2 || days.len() < 2 {
        return Err(DidError::TooFewGroups { cities: cities.len(), days: days.len() });
    }
    if rows.iter().all(|r| r.treated) || rows.iter().all(|r| !r.treated) {
        return Err(DidError::NoTreatmentVariation);
    }

    // Reference categories: the lowest city id and the earliest day. The
    // treatment coefficient is invariant to this choice.
    let city_pos: HashMap<u32, usize> =
        cities.iter().skip(1).enumerate().map(|(k, &c)| (c, k)).collect();
    let day_pos: HashMap<u32, usize> =
        days.iter().skip(1).enumerate().map(|(k, &d)| (d, k)).collect();

    let mut names = vec!["const".to_string(), "treated".to_string()];
    for extra in &spec.extra_regressors {
        names.push(extra_name(*extra).to_string());
    }
    let city_cols = if spec.include_unit_fe { cities.len() - 1 } else { 0 };
    let day_cols = if spec.include_time_fe { days.len() - 1 } else { 0 };
    if spec.include_unit_fe {
        for &c in &cities[1..] {
            names.push(format!("city_{c}"));
        }
    }
    if spec.include_time_fe {
        for &d in &days[1..] {
            names.push(format!("day_{d}"));
        }
    }

    let base = 2 + spec.extra_regressors.len();
    let cols = base + city_cols + day_cols;
    let mut design = DMatrix::zeros(rows.len(), cols);
    let mut response = DVector::zeros(rows.len());
    for (k, row) in rows.iter().enumerate() {
        design[(k, 0)] = 1.0;
        design[(k, 1)] = f64::from(row.treated);
        for (j, extra) in spec.extra_regressors.iter().enumerate() {
            design[(k, 2 + j)] = extra_value(row, *extra);
        }
        if spec.include_unit_fe {
            if let Some(&p) = city_pos.get(&row.city_id) {
                design[(k, base + p)] = 1.0;
            }
        }
        if spec.include_time_fe {
            if let Some(&p) = day_pos.get(&row.day) {
                design[(k, base + city_cols + p)] = 1.0;
            }
        }
        response[k] = outcome_value(row, spec.outcome).unwrap();
    }

    Ok(ols(names, design, response)?)
}

/// Treatment coefficient from the within transformation: outcome and
/// regressors demeaned by city and by day with the grand mean added back,
/// then fit without dummies. Agrees with `did_estimate` on balanced panels.
pub fn within_delta(panel: &PanelDataset, spec: &DidSpec) -> Result<f64, DidError> {
    let rows = usable_rows(panel, spec);
    if rows.is_empty() {
        return Err(DidError::EmptyOutcome);
    }
    if rows.iter().all(|r| r.treated) || rows.iter().all(|r| !r.treated) {
        return Err(DidError::NoTreatmentVariation);
    }

    let k_extras = spec.extra_regressors.len();
    // Column layout per row: outcome, treated, extras.
    let width = 2 + k_extras;
    let raw: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut v = Vec::with_capacity(width);
            v.push(outcome_value(r, spec.outcome).unwrap());
            v.push(f64::from(r.treated));
            for extra in &spec.extra_regressors {
                v.push(extra_value(r, *extra));
            }
            v
        })
        .collect();

    let mut city_sum: HashMap<u32, (f64, Vec<f64>)> = HashMap::new();
    let mut day_sum: HashMap<u32, (f64, Vec<f64>)> = HashMap::new();
    let mut grand = vec![0.0; width];
    for (row, values) in rows.iter().zip(&raw) {
        let c = city_sum.entry(row.city_id).or_insert_with(|| (0.0, vec![0.0; width]));
        let d = day_sum.entry(row.day).or_insert_with(|| (0.0, vec![0.0; width]));
        c.0 += 1.0;
        d.0 += 1.0;
        for j in 0..width {
            c.1[j] += values[j];
            d.1[j] += values[j];
            grand[j] += values[j];
        }
    }
    let total = rows.len() as f64;

    let mut design = DMatrix::zeros(rows.len(), 1 + k_extras);
    let mut response = DVector::zeros(rows.len());
    for (k, (row, values)) in rows.iter().zip(&raw).enumerate() {
        let c = &city_sum[&row.city_id];
        let d = &day_sum[&row.day];
        let demean =
            |j: usize| values[j] - c.1[j] / c.0 - d.1[j] / d.0 + grand[j] / total;
        response[k] = demean(0);
        design[(k, 0)] = demean(1);
        for j in 0..k_extras {
            design[(k, 1 + j)] = demean(2 + j);
        }
    }
    let mut names = vec!["treated".to_string()];
    for extra in &spec.extra_regressors {
        names.push(extra_name(*extra).to_string());
    }
    let fit = ols(names, design, response)?;
    Ok(fit.coefficient("treated").unwrap())
}

/// Per-day average of fitted and actual outcomes over ever-treated cities.
#[derive(Debug, Clone, Copy)]
pub struct DayFit {
    pub day: u32,
    pub fitted_mean: f64,
    pub actual_mean: f64,
    pub rows: usize,
}

/// Rebuilds each row's fitted value from the named coefficients and averages
/// fitted and actual outcomes per day across the ever-treated cities.
pub fn did_predict_daily(
    result: &RegressionResult,
    panel: &PanelDataset,
    spec: &DidSpec,
) -> Vec<DayFit> {
    let treated_cities = panel.treated_city_ids();
    let coef = |name: &str| result.coefficient(name).unwrap_or(0.0);
    let mut by_day: HashMap<u32, (f64, f64, usize)> = HashMap::new();
    for row in &panel.rows {
        if treated_cities.binary_search(&row.city_id).is_err() {
            continue;
        }
        let Some(actual) = outcome_value(row, spec.outcome) else { continue };
        let mut fitted = coef("const") + coef("treated") * f64::from(row.treated);
        for extra in &spec.extra_regressors {
            fitted += coef(extra_name(*extra)) * extra_value(row, *extra);
        }
        if spec.include_unit_fe {
            fitted += coef(&format!("city_{}", row.city_id));
        }
        if spec.include_time_fe {
            fitted += coef(&format!("day_{}", row.day));
        }
        let entry = by_day.entry(row.day).or_insert((0.0, 0.0, 0));
        entry.0 += fitted;
        entry.1 += actual;
        entry.2 += 1;
    }
    let mut fits: Vec<DayFit> = by_day
        .into_iter()
        .map(|(day, (f, a, k))| DayFit {
            day,
            fitted_mean: f / k as f64,
            actual_mean: a / k as f64,
            rows: k,
        })
        .collect();
    fits.sort_by_key(|f| f.day);
    fits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::PanelRow;
    use approx::assert_abs_diff_eq;

    /// Panel with outcome built additively from known effects, so the
    /// regression must recover the treatment coefficient exactly.
    fn additive_panel(delta: f64) -> PanelDataset {
        let mut rows = Vec::new();
        for city in 0..6u32 {
            let eta = (city as f64) * 0.37 - 1.0;
            let treated_from = if city % 2 == 0 { Some(10) } else { None };
            for day in 0..30u32 {
                let gamma = (day as f64 * 0.21).sin();
                let treated = treated_from.is_some_and(|t0| day >= t0);
                let y = 2.0 + eta + gamma + delta * f64::from(treated);
                rows.push(PanelRow {
                    city_id: city,
                    day,
                    density: 0.5 + city as f64 * 0.2,
                    n: 1000,
                    treated,
                    i_count: 10,
                    s_count: 980,
                    r_count: 10,
                    i_frac: y,
                    s_frac: 0.98,
                    growth: Some(y),
                    contacts: y,
                })
            }
        }
        PanelDataset { rows }
    }

    #[test]
    fn recovers_an_additive_treatment_effect_exactly() {
        let panel = additive_panel(-0.3);
        let fit = did_estimate(&panel, &DidSpec::two_way(DidOutcome::Contacts)).unwrap();
        assert_abs_diff_eq!(fit.coefficient("treated").unwrap(), -0.3, epsilon = 1e-10);
    }

    #[test]
    fn dummy_and_within_estimators_agree_on_a_balanced_panel() {
        let panel = additive_panel(-0.3);
        let spec = DidSpec::two_way(DidOutcome::InfectedFrac);
        let dummy = did_estimate(&panel, &spec).unwrap().coefficient("treated").unwrap();
        let within = within_delta(&panel, &spec).unwrap();
        assert_abs_diff_eq!(dummy, within, epsilon = 1e-10);
    }

    #[test]
    fn treatment_coefficient_ignores_the_reference_category_choice() {
        // Re-labeling which city sorts first must not move the estimate.
        let panel = additive_panel(-0.3);
        let mut relabeled = panel.clone();
        for row in &mut relabeled.rows {
            row.city_id = 10 - row.city_id;
        }
        let spec = DidSpec::with_density_interaction(DidOutcome::Contacts);
        let a = did_estimate(&panel, &spec).unwrap();
        let b = did_estimate(&relabeled, &spec).unwrap();
        assert_abs_diff_eq!(
            a.coefficient("treated").unwrap(),
            b.coefficient("treated").unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn fitted_means_match_actual_means_over_treated_rows() {
        let panel = additive_panel(-0.3);
        let spec = DidSpec::two_way(DidOutcome::InfectedFrac);
        let fit = did_estimate(&panel, &spec).unwrap();
        // Least squares with a treatment dummy forces residuals orthogonal
        // to it, so fitted and actual agree on average over treated rows.
        let (mut fitted, mut actual, mut k) = (0.0, 0.0, 0);
        let daily = did_predict_daily(&fit, &panel, &spec);
        for day in &daily {
            fitted += day.fitted_mean * day.rows as f64;
            actual += day.actual_mean * day.rows as f64;
            k += day.rows;
        }
        assert!(k > 0);
        assert_abs_diff_eq!(fitted / k as f64, actual / k as f64, epsilon = 1e-8);
    }

    #[test]
    fn all_treated_or_all_untreated_is_rejected() {
        let mut panel = additive_panel(-0.3);
        for row in &mut panel.rows {
            row.treated = false;
        }
        let err = did_estimate(&panel, &DidSpec::two_way(DidOutcome::Contacts)).unwrap_err();
        assert!(matches!(err, DidError::NoTreatmentVariation));
    }

    #[test]
    fn city_constant_density_is_collinear_with_unit_effects() {
        let panel = additive_panel(-0.3);
        let spec = DidSpec {
            outcome: DidOutcome::Contacts,
            include_unit_fe: true,
            include_time_fe: true,
            extra_regressors: vec![ExtraRegressor::Density],
        };
        let err = did_estimate(&panel, &spec).unwrap_err();
        assert!(matches!(err, DidError::Ols(OlsError::RankDeficient { .. })));
    }

    #[test]
    fn growth_outcome_drops_rows_without_growth() {
        let mut panel = additive_panel(-0.3);
        for row in &mut panel.rows {
            if row.day == 29 {
                row.growth = None;
            }
        }
        let fit = did_estimate(&panel, &DidSpec::two_way(DidOutcome::Growth)).unwrap();
        assert_eq!(fit.fitted.len(), 6 * 29);
        assert!(fit.coefficient("day_29").is_none());
    }
}
