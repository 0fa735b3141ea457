//! Side-by-side treatment estimates from crossed and confounded designs.
//!
//! The report contrasts two ways of assigning a lockdown across simulated
//! cities. In the crossed design every density hosts never-treated cities
//! plus cities treated early and late, so treatment timing carries no
//! information about density and the regression recovers the true effect.
//! In the confounded design timing varies with density and one density is
//! never treated, mimicking observational data; the regression then reports
//! a biased effect. Each design is estimated with and without a
//! density-by-treatment interaction.

use crate::did::{did_estimate, DidError, DidOutcome, DidSpec};
use crate::panel::PanelDataset;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("design panel is empty")]
    EmptyPanel,
    #[error("density {density} is missing treatment arms ({missing})")]
    MissingCell { density: f64, missing: &'static str },
    #[error("confounded design needs both treated and never-treated cities")]
    NoContrast,
    #[error("catalog mixes city populations {a} and {b}; coefficients in counts need one")]
    MixedPopulations { a: u64, b: u64 },
    #[error(transparent)]
    Did(#[from] DidError),
}

/// One behavior arm's pair of experiment designs over the same cities.
#[derive(Debug, Clone)]
pub struct DesignPanels {
    /// Treatment timing crossed with density: every density has
    /// never-treated, early-treated, and late-treated cities.
    pub crossed: PanelDataset,
    /// Treatment timing tied to density, with one density never treated.
    pub confounded: PanelDataset,
}

/// Panels for both behavior arms of the same experiment.
#[derive(Debug, Clone)]
pub struct TreatmentCatalog {
    /// Simulated without any behavioral response to the epidemic.
    pub baseline: DesignPanels,
    /// Simulated with agents reducing contacts as infections rise.
    pub behavioral: DesignPanels,
}

/// Treatment coefficients from one design.
#[derive(Debug, Clone, Copy)]
pub struct DesignEstimates {
    /// Treatment coefficient with no density controls.
    pub plain: f64,
    /// Treatment coefficient alongside the density interaction.
    pub controlled: f64,
    /// Coefficient on density x treated in the controlled specification.
    pub interaction: f64,
}

/// Estimates for one outcome in one behavior arm, across both designs.
#[derive(Debug, Clone, Copy)]
pub struct TreatmentRow {
    pub outcome: DidOutcome,
    pub behavioral: bool,
    pub crossed: DesignEstimates,
    pub confounded: DesignEstimates,
}

/// Full report: outcomes (infected, contacts, growth) by behavior arm.
/// Infected coefficients are scaled by the common city population so they
/// read as counts of people rather than fractions.
#[derive(Debug, Clone)]
pub struct TreatmentTable {
    pub rows: Vec<TreatmentRow>,
    pub population: u64,
}

/// First treated day per city, None for never-treated cities.
fn adoption_days(panel: &PanelDataset) -> HashMap<u32, (f64, Option<u32>)> {
    let mut cities: HashMap<u32, (f64, Option<u32>)> = HashMap::new();
    for row in &panel.rows {
        let entry = cities.entry(row.city_id).or_insert((row.density, None));
        if row.treated && entry.1.is_none_or(|d| row.day < d) {
            entry.1 = Some(row.day);
        }
    }
    cities
}

/// The crossed design needs, at every density, a never-treated city and at
/// least two distinct adoption days.
fn check_crossed(panel: &PanelDataset) -> Result<(), TableError> {
    if panel.rows.is_empty() {
        return Err(TableError::EmptyPanel);
    }
    let mut by_density: HashMap<u64, (bool, BTreeSet<u32>)> = HashMap::new();
    for (density, adoption) in adoption_days(panel).into_values() {
        let cell = by_density.entry(density.to_bits()).or_default();
        match adoption {
            None => cell.0 = true,
            Some(day) => {
                cell.1.insert(day);
            }
        }
    }
    for (bits, (has_never, days)) in by_density {
        let density = f64::from_bits(bits);
        if !has_never {
            return Err(TableError::MissingCell { density, missing: "never-treated" });
        }
        if days.len() < 2 {
            return Err(TableError::MissingCell {
                density,
                missing: "two distinct adoption days",
            });
        }
    }
    Ok(())
}

fn check_confounded(panel: &PanelDataset) -> Result<(), TableError> {
    if panel.rows.is_empty() {
        return Err(TableError::EmptyPanel);
    }
    let arms = adoption_days(panel);
    let treated = arms.values().filter(|(_, a)| a.is_some()).count();
    if treated == 0 || treated == arms.len() {
        return Err(TableError::NoContrast);
    }
    Ok(())
}

/// All cities across both arms and designs must share one population, so a
/// single count scale applies to the infected outcome.
fn common_population(catalog: &TreatmentCatalog) -> Result<u64, TableError> {
    let mut population = None;
    for panel in [
        &catalog.baseline.crossed,
        &catalog.baseline.confounded,
        &catalog.behavioral.crossed,
        &catalog.behavioral.confounded,
    ] {
        for row in &panel.rows {
            match population {
                None => population = Some(row.n),
                Some(n) if n != row.n => {
                    return Err(TableError::MixedPopulations { a: n, b: row.n })
                }
                Some(_) => {}
            }
        }
    }
    population.ok_or(TableError::EmptyPanel)
}

fn estimate_design(
    panel: &PanelDataset,
    outcome: DidOutcome,
    scale: f64,
) -> Result<DesignEstimates, TableError> {
    let plain = did_estimate(panel, &DidSpec::two_way(outcome))?;
    let controlled = did_estimate(panel, &DidSpec::with_density_interaction(outcome))?;
    Ok(DesignEstimates {
        plain: plain.coefficient("treated").unwrap() * scale,
        controlled: controlled.coefficient("treated").unwrap() * scale,
        interaction: controlled.coefficient("density_x_treated").unwrap() * scale,
    })
}

/// Estimates every outcome under both designs for both behavior arms.
pub fn treatment_table(catalog: &TreatmentCatalog) -> Result<TreatmentTable, TableError> {
    check_crossed(&catalog.baseline.crossed)?;
    check_crossed(&catalog.behavioral.crossed)?;
    check_confounded(&catalog.baseline.confounded)?;
    check_confounded(&catalog.behavioral.confounded)?;
    let population = common_population(catalog)?;

    let mut rows = Vec::with_capacity(6);
    for (behavioral, designs) in
        [(false, &catalog.baseline), (true, &catalog.behavioral)]
    {
        for outcome in [DidOutcome::InfectedFrac, DidOutcome::Contacts, DidOutcome::Growth] {
            let scale = match outcome {
                DidOutcome::InfectedFrac => population as f64,
                DidOutcome::Contacts | DidOutcome::Growth => 1.0,
            };
            rows.push(TreatmentRow {
                outcome,
                behavioral,
                crossed: estimate_design(&designs.crossed, outcome, scale)?,
                confounded: estimate_design(&designs.confounded, outcome, scale)?,
            });
        }
    }
    Ok(TreatmentTable { rows, population })
}

fn outcome_label(outcome: DidOutcome) -> &'static str {
    match outcome {
        DidOutcome::InfectedFrac => "infected",
        DidOutcome::Contacts => "contacts",
        DidOutcome::Growth => "growth",
    }
}

impl fmt::Display for TreatmentTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "treatment coefficients (two-way fixed effects)")?;
        writeln!(f, "infected outcome in counts on population {}", self.population)?;
        writeln!(
            f,
            "{:<10} {:<10} {:<11} {:>12} {:>12} {:>14}",
            "outcome", "response", "design", "treated", "treated+ctrl", "treated#density"
        )?;
        for row in &self.rows {
            let response = if row.behavioral { "behavioral" } else { "none" };
            for (design, est) in
                [("crossed", row.crossed), ("confounded", row.confounded)]
            {
                writeln!(
                    f,
                    "{:<10} {:<10} {:<11} {:>12.3} {:>12.3} {:>14.3}",
                    outcome_label(row.outcome),
                    response,
                    design,
                    est.plain,
                    est.controlled,
                    est.interaction,
                )?;
            }
        }
        Ok(())
    }
}
