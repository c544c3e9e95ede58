//! Brute-force reference for exploration with exhaustive quality-measure
//! augmentation. Shares only the model types with the library.

#![allow(dead_code)]

use std::cmp::Ordering;

use pfmea::config::{AnalysisConfig, RankingCriterion};
use pfmea::model::*;

#[derive(Debug, Clone)]
pub struct Expected {
    pub id: String,
    pub worst_rpn: u32,
    pub expected_cost: f64,
    pub duration: Option<f64>,
}

#[derive(Debug)]
pub struct Outcome {
    pub ranked: Vec<Expected>,
    pub rejected: usize,
}

fn holds(constraint: &PropertyConstraint, value: Option<&PropertyValue>) -> bool {
    match (&constraint.predicate, value) {
        (Predicate::NumericRange { min, max }, Some(PropertyValue::Numeric(x))) => {
            min.is_none_or(|m| *x >= m) && max.is_none_or(|m| *x <= m)
        }
        (Predicate::EnumSubset { allowed }, Some(PropertyValue::Text(t))) => allowed.contains(t),
        (Predicate::BooleanEquals { expected }, Some(PropertyValue::Boolean(b))) => expected == b,
        _ => false,
    }
}

fn can_do(es: &EquipmentService, step: &RecipeStep) -> bool {
    es.fulfills == step.addresses
        && es
            .constraints
            .iter()
            .all(|c| holds(c, step.property_values.get(&c.property)))
}

fn p_occ(r: u8, scale: u8) -> f64 {
    10f64.powi(i32::from(r) - i32::from(scale) - 1)
}

fn p_catch(d: u8, scale: u8) -> f64 {
    f64::from(scale - d) / f64::from(scale - 1)
}

fn all_services(catalog: &EquipmentCatalog) -> Vec<&EquipmentService> {
    catalog.equipment.iter().flat_map(|e| e.services.iter()).collect()
}

/// Every choice of one fulfilling service per step.
fn assignments<'a>(recipe: &Recipe, services: &[&'a EquipmentService]) -> Vec<Vec<&'a EquipmentService>> {
    let mut partial: Vec<Vec<&EquipmentService>> = vec![vec![]];
    for step in &recipe.steps {
        let mut next = Vec::new();
        for prefix in &partial {
            for es in services.iter().filter(|es| can_do(es, step)) {
                let mut p = prefix.clone();
                p.push(*es);
                next.push(p);
            }
        }
        partial = next;
    }
    partial
}

/// Every set of distinct quality measures of size at most `k`, members in
/// id order.
fn measure_sets<'a>(measures: &[&'a EquipmentService], k: usize) -> Vec<Vec<&'a EquipmentService>> {
    let n = measures.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize <= k {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).map(|i| measures[i]).collect());
        }
    }
    out
}

pub fn explore(recipe: &Recipe, catalog: &EquipmentCatalog, config: &AnalysisConfig) -> Outcome {
    let scale = config.scale_max;
    let services = all_services(catalog);
    let mut measures: Vec<&EquipmentService> = services
        .iter()
        .copied()
        .filter(|s| s.quality_measure.is_some())
        .collect();
    measures.sort_by(|a, b| a.id.cmp(&b.id));

    let mut kept = Vec::new();
    let mut rejected = 0;
    for chosen in assignments(recipe, &services) {
        for extra in measure_sets(&measures, config.max_quality_measures) {
            // rows in recipe order, then service failure mode, then equipment
            // failure mode
            let mut rows: Vec<(usize, String, String, u8, u8, u8)> = Vec::new();
            for (i, (step, es)) in recipe.steps.iter().zip(&chosen).enumerate() {
                for efm in &es.failure_modes {
                    let Some(sev) = step
                        .failure_modes
                        .iter()
                        .find(|f| f.belongs_to == efm.refers_to)
                        .map(|f| f.severity.value())
                    else {
                        continue;
                    };
                    let det = extra
                        .iter()
                        .flat_map(|q| q.quality_measure.as_ref().unwrap().covers.iter())
                        .filter(|c| c.equipment_failure_mode == efm.id)
                        .map(|c| c.detection.value())
                        .min()
                        .unwrap_or(scale);
                    rows.push((i, efm.refers_to.clone(), efm.id.clone(), sev, efm.occurrence.value(), det));
                }
            }
            rows.sort_by(|a, b| (a.0, &a.1, &a.2).cmp(&(b.0, &b.1, &b.2)));

            let uncovered = rows
                .iter()
                .any(|&(_, _, _, s, o, d)| u32::from(s) * u32::from(o) > config.risk_threshold && d >= scale);
            let worst_rpn = rows
                .iter()
                .map(|&(_, _, _, s, o, d)| u32::from(s) * u32::from(o) * u32::from(d))
                .max()
                .unwrap_or(0);
            let clean = rows
                .iter()
                .map(|&(_, _, _, _, o, d)| 1.0 - p_occ(o, scale) * p_catch(d, scale))
                .product::<f64>();
            let attempt: f64 = chosen.iter().chain(&extra).map(|s| s.cost_per_execution).sum();
            let duration: Option<f64> = chosen.iter().chain(&extra).map(|s| s.duration).sum();

            let mut id = chosen.iter().map(|s| s.id.as_str()).collect::<Vec<_>>().join(">");
            for q in &extra {
                id += "+";
                id += &q.id;
            }

            if uncovered || worst_rpn > config.rpn_threshold || clean <= 0.0 {
                rejected += 1;
                continue;
            }
            let expected_cost = attempt / clean;
            if recipe.budget.is_some_and(|b| expected_cost > b) {
                rejected += 1;
                continue;
            }
            kept.push(Expected {
                id,
                worst_rpn,
                expected_cost,
                duration,
            });
        }
    }

    kept.sort_by(|a, b| {
        for criterion in &config.ranking_criteria {
            let o = match criterion {
                RankingCriterion::WorstRpn => a.worst_rpn.cmp(&b.worst_rpn),
                RankingCriterion::ExpectedCost => a.expected_cost.partial_cmp(&b.expected_cost).unwrap(),
                RankingCriterion::Duration => match (a.duration, b.duration) {
                    (Some(x), Some(y)) => x.partial_cmp(&y).unwrap(),
                    (x, y) => y.is_some().cmp(&x.is_some()),
                },
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        a.id.cmp(&b.id)
    });
    Outcome { ranked: kept, rejected }
}
