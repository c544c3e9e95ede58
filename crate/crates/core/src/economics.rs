//! Scrap and cost model.
//!
//! Each worksheet row is an independent defect source. A defect fires with
//! the occurrence probability of its rating and is caught with the catch
//! probability of its detection rating. Any caught defect scraps the item;
//! items with only uncaught defects ship defective ("escape"). Every attempt
//! pays for every process step, so the cost per accepted item is the
//! attempt cost divided by the acceptance rate.

use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::model::{EquipmentCatalog, Process, Rating, Recipe};
use crate::pfmea::PfmeaWorksheet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EconomicReport {
    pub attempt_cost: f64,
    pub rejection_rate: f64,
    pub escape_rate: f64,
    pub expected_cost_per_accepted: f64,
    pub within_budget: bool,
    pub duration: Option<f64>,
}

pub fn occurrence_probability(rating: Rating, config: &AnalysisConfig) -> f64 {
    config.occurrence_probability(rating)
}

pub fn catch_probability(rating: Rating, config: &AnalysisConfig) -> f64 {
    config.catch_probability(rating)
}

/// Rejection and escape probabilities for independent `(p_occ, p_catch)`
/// defect sources.
pub fn scrap_rates(sources: impl IntoIterator<Item = (f64, f64)>) -> (f64, f64) {
    let mut none_caught = 1.0;
    let mut none_fired = 1.0;
    for (p_occ, p_catch) in sources {
        none_caught *= 1.0 - p_occ * p_catch;
        none_fired *= 1.0 - p_occ;
    }
    let rejection = 1.0 - none_caught;
    // shipped = nothing caught; shipped clean = nothing fired
    let escape = (none_caught - none_fired).max(0.0);
    (rejection, escape)
}

pub fn economic_report(
    process: &Process,
    worksheet: &PfmeaWorksheet,
    recipe: &Recipe,
    catalog: &EquipmentCatalog,
    config: &AnalysisConfig,
) -> Result<EconomicReport> {
    let mut attempt_cost = 0.0;
    let mut duration = Some(0.0);
    for step in &process.steps {
        let es = catalog
            .service(&step.uses)
            .ok_or_else(|| Error::UnknownEquipmentService(step.uses.clone()))?;
        attempt_cost += es.cost_per_execution;
        duration = duration.zip(es.duration).map(|(total, d)| total + d);
    }

    let (rejection_rate, escape_rate) = scrap_rates(worksheet.rows.iter().map(|row| {
        (
            occurrence_probability(row.occurrence, config),
            catch_probability(row.detection, config),
        )
    }));
    let acceptance = 1.0 - rejection_rate;
    if acceptance <= 0.0 {
        return Err(Error::DegenerateEconomics(process.id.clone()));
    }
    let expected_cost_per_accepted = attempt_cost / acceptance;
    Ok(EconomicReport {
        attempt_cost,
        rejection_rate,
        escape_rate,
        expected_cost_per_accepted,
        within_budget: expected_cost_per_accepted <= recipe.budget_limit(),
        duration,
    })
}
