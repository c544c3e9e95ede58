//! PFMEA worksheet computation.
//!
//! Severity comes from the recipe (what the product cares about),
//! occurrence from the equipment, and detection from the best quality
//! measure placed after the failing step. A failure mode nothing downstream
//! covers gets the worst detection rating.

use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::matcher::process_produces;
use crate::model::{EquipmentCatalog, Process, Rating, Recipe};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorksheetRow {
    pub process_step: String,
    pub recipe_step: String,
    pub service_failure_mode: String,
    pub equipment_failure_mode: String,
    pub severity: Rating,
    pub occurrence: Rating,
    pub detection: Rating,
    pub rpn: u32,
    /// Quality-measure step that provides the detection rating.
    pub covered_by: Option<String>,
}

impl WorksheetRow {
    /// Severity times occurrence.
    pub fn risk(&self) -> u32 {
        u32::from(self.severity.value()) * u32::from(self.occurrence.value())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PfmeaWorksheet {
    pub process_id: String,
    pub rows: Vec<WorksheetRow>,
    pub worst_rpn: u32,
    pub worst_risk: u32,
}

impl PfmeaWorksheet {
    pub fn new(process_id: impl Into<String>, rows: Vec<WorksheetRow>) -> Self {
        let worst_rpn = rows.iter().map(|r| r.rpn).max().unwrap_or(0);
        let worst_risk = rows.iter().map(WorksheetRow::risk).max().unwrap_or(0);
        PfmeaWorksheet {
            process_id: process_id.into(),
            rows,
            worst_rpn,
            worst_risk,
        }
    }
}

pub fn compute_rpn(severity: Rating, occurrence: Rating, detection: Rating) -> u32 {
    u32::from(severity.value()) * u32::from(occurrence.value()) * u32::from(detection.value())
}

/// Best detection among quality-measure steps strictly after `step_index`
/// that cover `equipment_failure_mode`. Ties go to the earliest step.
/// Returns `(scale_max, None)` when nothing covers it.
pub fn effective_detection(
    process: &Process,
    step_index: usize,
    equipment_failure_mode: &str,
    catalog: &EquipmentCatalog,
    scale_max: u8,
) -> (Rating, Option<String>) {
    let mut best: Option<(Rating, &str)> = None;
    for step in process.steps.iter().skip(step_index + 1) {
        if step.binds.is_some() {
            continue;
        }
        let Some(detection) = catalog
            .service(&step.uses)
            .and_then(|es| es.detection_for(equipment_failure_mode))
        else {
            continue;
        };
        if best.is_none_or(|(d, _)| detection < d) {
            best = Some((detection, step.id.as_str()));
        }
    }
    match best {
        Some((d, step)) => (d, Some(step.to_string())),
        None => (Rating::new(scale_max), None),
    }
}

/// Builds the worksheet for a process that produces `recipe`.
///
/// One row per bound step and equipment failure mode whose service failure
/// mode the recipe step rates; rows follow process order, then service
/// failure-mode id.
pub fn analyze_process(
    process: &Process,
    recipe: &Recipe,
    catalog: &EquipmentCatalog,
    config: &AnalysisConfig,
) -> Result<PfmeaWorksheet> {
    let matched = process_produces(process, recipe, catalog);
    if !matched.produces {
        return Err(Error::NotProducing {
            process: process.id.clone(),
            recipe: recipe.id.clone(),
            result: Box::new(matched),
        });
    }

    let mut rows = Vec::new();
    for (index, step) in process.steps.iter().enumerate() {
        let Some(recipe_step) = step.binds.as_deref().and_then(|id| recipe.step(id)) else {
            continue;
        };
        let es = catalog
            .service(&step.uses)
            .ok_or_else(|| Error::UnknownEquipmentService(step.uses.clone()))?;
        let mut step_rows: Vec<WorksheetRow> = es
            .failure_modes
            .iter()
            .filter_map(|efm| {
                let severity = recipe_step.severity_of(&efm.refers_to)?;
                let (detection, covered_by) =
                    effective_detection(process, index, &efm.id, catalog, config.scale_max);
                Some(WorksheetRow {
                    process_step: step.id.clone(),
                    recipe_step: recipe_step.id.clone(),
                    service_failure_mode: efm.refers_to.clone(),
                    equipment_failure_mode: efm.id.clone(),
                    severity,
                    occurrence: efm.occurrence,
                    detection,
                    rpn: compute_rpn(severity, efm.occurrence, detection),
                    covered_by,
                })
            })
            .collect();
        step_rows.sort_by(|a, b| {
            a.service_failure_mode
                .cmp(&b.service_failure_mode)
                .then_with(|| a.equipment_failure_mode.cmp(&b.equipment_failure_mode))
        });
        rows.extend(step_rows);
    }
    Ok(PfmeaWorksheet::new(process.id.clone(), rows))
}
