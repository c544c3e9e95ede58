//! Design-space exploration.
//!
//! Every combination of fulfilling equipment services is a base process.
//! Base processes whose rows exceed the risk threshold `t` without any
//! detection get quality measures appended, either greedily (best detector
//! per offending row) or by trying every combination up to the configured
//! count. Survivors of the RPN and budget filters are ranked.

use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{AnalysisConfig, RankingCriterion};
use crate::economics::{economic_report, EconomicReport};
use crate::error::{Error, Result};
use crate::matcher::service_fulfills;
use crate::model::{EquipmentCatalog, EquipmentService, Process, ProcessStep, Recipe};
use crate::pfmea::{analyze_process, PfmeaWorksheet, WorksheetRow};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub process: Process,
    pub worksheet: PfmeaWorksheet,
    pub economics: EconomicReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UncoveredRow {
    pub process_step: String,
    pub recipe_step: String,
    pub service_failure_mode: String,
    pub equipment_failure_mode: String,
    pub risk: u32,
}

/// Rows over the risk threshold that could not be given any detection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnreachableQuality {
    pub process_id: String,
    pub rows: Vec<UncoveredRow>,
    /// True when covering measures existed but the insertion budget ran out.
    pub insertion_budget_exhausted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Improvement {
    Improved(Candidate),
    Unreachable(UnreachableQuality),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum RejectionReason {
    UnreachableQuality(UnreachableQuality),
    RpnAboveThreshold { worst_rpn: u32, threshold: u32 },
    OverBudget { expected_cost_per_accepted: f64, budget: f64 },
    DegenerateEconomics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rejection {
    pub process_id: String,
    #[serde(flatten)]
    pub reason: RejectionReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplorationResult {
    pub recipe_id: String,
    pub ranked: Vec<Candidate>,
    pub rejected_count: usize,
    pub rejected: Vec<Rejection>,
    /// Number of base processes examined.
    pub examined: usize,
    /// Enumeration stopped at `max_processes`.
    pub truncated: bool,
}

/// Identifier derived from process structure: bound equipment services in
/// order joined by `>`, then each quality measure prefixed with `+`.
pub fn structural_id(steps: &[ProcessStep]) -> String {
    let mut id = steps
        .iter()
        .filter(|s| s.binds.is_some())
        .map(|s| s.uses.as_str())
        .collect::<Vec<_>>()
        .join(">");
    for step in steps.iter().filter(|s| s.binds.is_none()) {
        id.push('+');
        id.push_str(&step.uses);
    }
    id
}

/// Renames steps `p1..` (bound) and `q1..` (quality measures) in order and
/// derives the process id from the structure.
fn relabel(mut steps: Vec<ProcessStep>) -> Process {
    let (mut p, mut q) = (0, 0);
    for step in &mut steps {
        step.id = if step.binds.is_some() {
            p += 1;
            format!("p{p}")
        } else {
            q += 1;
            format!("q{q}")
        };
    }
    Process {
        id: structural_id(&steps),
        steps,
    }
}

/// Lazily enumerates base processes in lexicographic order of the chosen
/// equipment-service ids, the last recipe step varying fastest.
#[derive(Debug, Clone)]
pub struct BaseProcesses<'a> {
    recipe: &'a Recipe,
    options: Vec<Vec<&'a EquipmentService>>,
    cursor: Option<Vec<usize>>,
}

impl<'a> BaseProcesses<'a> {
    pub fn new(recipe: &'a Recipe, catalog: &'a EquipmentCatalog) -> Result<Self> {
        let mut options = Vec::with_capacity(recipe.steps.len());
        for step in &recipe.steps {
            let mut fulfilling: Vec<&EquipmentService> = catalog
                .services()
                .filter(|es| service_fulfills(es, step))
                .collect();
            if fulfilling.is_empty() {
                return Err(Error::Producibility {
                    step: step.id.clone(),
                    service: step.addresses.clone(),
                });
            }
            fulfilling.sort_by(|a, b| a.id.cmp(&b.id));
            fulfilling.dedup_by(|a, b| a.id == b.id);
            options.push(fulfilling);
        }
        Ok(BaseProcesses {
            recipe,
            cursor: Some(vec![0; options.len()]),
            options,
        })
    }

    /// Size of the full space, saturating.
    pub fn total(&self) -> usize {
        self.options
            .iter()
            .fold(1usize, |acc, o| acc.saturating_mul(o.len()))
    }
}

impl Iterator for BaseProcesses<'_> {
    type Item = Process;

    fn next(&mut self) -> Option<Process> {
        let cursor = self.cursor.as_mut()?;
        let steps = cursor
            .iter()
            .zip(&self.options)
            .zip(&self.recipe.steps)
            .map(|((&i, options), recipe_step)| {
                ProcessStep::binding("", options[i].id.clone(), recipe_step.id.clone())
            })
            .collect();
        let process = relabel(steps);

        let mut position = cursor.len();
        loop {
            if position == 0 {
                self.cursor = None;
                break;
            }
            position -= 1;
            cursor[position] += 1;
            if cursor[position] < self.options[position].len() {
                break;
            }
            cursor[position] = 0;
        }
        Some(process)
    }
}

/// All base processes for `recipe`: one bound step per recipe step, no
/// quality measures.
pub fn enumerate_base_processes(recipe: &Recipe, catalog: &EquipmentCatalog) -> Result<Vec<Process>> {
    Ok(BaseProcesses::new(recipe, catalog)?.collect())
}

pub fn evaluate(
    process: Process,
    recipe: &Recipe,
    catalog: &EquipmentCatalog,
    config: &AnalysisConfig,
) -> Result<Candidate> {
    let worksheet = analyze_process(&process, recipe, catalog, config)?;
    let economics = economic_report(&process, &worksheet, recipe, catalog, config)?;
    Ok(Candidate {
        process,
        worksheet,
        economics,
    })
}

fn needs_cover(row: &WorksheetRow, config: &AnalysisConfig) -> bool {
    row.risk() > config.risk_threshold && row.detection.value() >= config.scale_max
}

fn uncovered(row: &WorksheetRow) -> UncoveredRow {
    UncoveredRow {
        process_step: row.process_step.clone(),
        recipe_step: row.recipe_step.clone(),
        service_failure_mode: row.service_failure_mode.clone(),
        equipment_failure_mode: row.equipment_failure_mode.clone(),
        risk: row.risk(),
    }
}

/// The quality measure with the best (lowest) useful detection for an
/// equipment failure mode; cheaper, then smaller id, on ties.
fn best_cover<'a>(
    catalog: &'a EquipmentCatalog,
    equipment_failure_mode: &str,
    scale_max: u8,
) -> Option<&'a EquipmentService> {
    catalog
        .quality_measures()
        .filter_map(|es| {
            es.detection_for(equipment_failure_mode)
                .filter(|d| d.value() < scale_max)
                .map(|d| (d, es))
        })
        .min_by(|(da, a), (db, b)| {
            da.cmp(db)
                .then_with(|| a.cost_per_execution.total_cmp(&b.cost_per_execution))
                .then_with(|| a.id.cmp(&b.id))
        })
        .map(|(_, es)| es)
}

/// Greedy quality improvement: while some row has risk above `t` and no
/// detection, insert the best covering quality measure right after the
/// last bound step and re-analyze.
pub fn improve_until_threshold(
    candidate: Candidate,
    recipe: &Recipe,
    catalog: &EquipmentCatalog,
    config: &AnalysisConfig,
) -> Result<Improvement> {
    let mut candidate = candidate;
    let mut inserted = 0;
    let mut unreachable: Vec<UncoveredRow> = Vec::new();
    let mut skip: HashSet<(String, String)> = HashSet::new();
    let mut budget_exhausted = false;

    loop {
        let target = candidate.worksheet.rows.iter().find(|row| {
            needs_cover(row, config)
                && !skip.contains(&(row.process_step.clone(), row.equipment_failure_mode.clone()))
        });
        let Some(row) = target else { break };
        let key = (row.process_step.clone(), row.equipment_failure_mode.clone());

        let cover = best_cover(catalog, &row.equipment_failure_mode, config.scale_max);
        match cover {
            Some(es) if inserted < config.max_quality_measures => {
                let mut steps = candidate.process.steps.clone();
                let at = candidate.process.last_binding_index().map_or(0, |i| i + 1);
                steps.insert(at, ProcessStep::quality("", es.id.clone()));
                candidate = evaluate(relabel(steps), recipe, catalog, config)?;
                inserted += 1;
            }
            Some(_) => {
                budget_exhausted = true;
                unreachable.push(uncovered(row));
                skip.insert(key);
            }
            None => {
                unreachable.push(uncovered(row));
                skip.insert(key);
            }
        }
    }

    if unreachable.is_empty() {
        Ok(Improvement::Improved(candidate))
    } else {
        Ok(Improvement::Unreachable(UnreachableQuality {
            process_id: candidate.process.id,
            rows: unreachable,
            insertion_budget_exhausted: budget_exhausted,
        }))
    }
}

fn compare(a: &Candidate, b: &Candidate, criteria: &[RankingCriterion]) -> Ordering {
    criteria
        .iter()
        .map(|criterion| match criterion {
            RankingCriterion::WorstRpn => a.worksheet.worst_rpn.cmp(&b.worksheet.worst_rpn),
            RankingCriterion::ExpectedCost => a
                .economics
                .expected_cost_per_accepted
                .total_cmp(&b.economics.expected_cost_per_accepted),
            // processes without a known duration go last
            RankingCriterion::Duration => match (a.economics.duration, b.economics.duration) {
                (Some(x), Some(y)) => x.total_cmp(&y),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            },
        })
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.process.id.cmp(&b.process.id))
}

/// Lexicographic sort by the configured criteria, all ascending, ties
/// broken by process id.
pub fn rank_processes(mut candidates: Vec<Candidate>, config: &AnalysisConfig) -> Vec<Candidate> {
    candidates.sort_by(|a, b| compare(a, b, &config.ranking_criteria));
    candidates
}

fn screen(candidate: &Candidate, recipe: &Recipe, config: &AnalysisConfig) -> Option<RejectionReason> {
    if candidate.worksheet.worst_rpn > config.rpn_threshold {
        return Some(RejectionReason::RpnAboveThreshold {
            worst_rpn: candidate.worksheet.worst_rpn,
            threshold: config.rpn_threshold,
        });
    }
    if !candidate.economics.within_budget {
        return Some(RejectionReason::OverBudget {
            expected_cost_per_accepted: candidate.economics.expected_cost_per_accepted,
            budget: recipe.budget_limit(),
        });
    }
    None
}

type Outcome = std::result::Result<Candidate, Rejection>;

fn settle(evaluated: Result<Candidate>, process_id: &str, recipe: &Recipe, config: &AnalysisConfig) -> Result<Outcome> {
    let candidate = match evaluated {
        Ok(c) => c,
        Err(Error::DegenerateEconomics(_)) => {
            return Ok(Err(Rejection {
                process_id: process_id.to_string(),
                reason: RejectionReason::DegenerateEconomics,
            }))
        }
        Err(e) => return Err(e),
    };
    Ok(match screen(&candidate, recipe, config) {
        Some(reason) => Err(Rejection {
            process_id: candidate.process.id,
            reason,
        }),
        None => Ok(candidate),
    })
}

fn greedy_outcomes(
    base: Process,
    recipe: &Recipe,
    catalog: &EquipmentCatalog,
    config: &AnalysisConfig,
) -> Result<Vec<Outcome>> {
    let id = base.id.clone();
    let improved = match evaluate(base, recipe, catalog, config) {
        Ok(candidate) => improve_until_threshold(candidate, recipe, catalog, config),
        Err(e) => Err(e),
    };
    let outcome = match improved {
        Ok(Improvement::Unreachable(u)) => Err(Rejection {
            process_id: id,
            reason: RejectionReason::UnreachableQuality(u),
        }),
        Ok(Improvement::Improved(c)) => {
            let id = c.process.id.clone();
            settle(Ok(c), &id, recipe, config)?
        }
        Err(e) => settle(Err(e), &id, recipe, config)?,
    };
    Ok(vec![outcome])
}

/// Subsets of `0..n` with at most `k` elements, each in increasing order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k.min(n) {
        let mut next = Vec::new();
        for subset in &frontier {
            let start = subset.last().map_or(0, |&l: &usize| l + 1);
            for i in start..n {
                let mut s = subset.clone();
                s.push(i);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn exhaustive_outcomes(
    base: Process,
    quality_measures: &[&EquipmentService],
    recipe: &Recipe,
    catalog: &EquipmentCatalog,
    config: &AnalysisConfig,
) -> Result<Vec<Outcome>> {
    let mut outcomes = Vec::new();
    for subset in subsets(quality_measures.len(), config.max_quality_measures) {
        let mut steps = base.steps.clone();
        steps.extend(
            subset
                .iter()
                .map(|&i| ProcessStep::quality("", quality_measures[i].id.clone())),
        );
        let process = relabel(steps);
        let id = process.id.clone();
        let evaluated = evaluate(process, recipe, catalog, config);
        if let Ok(candidate) = &evaluated {
            let rows: Vec<UncoveredRow> = candidate
                .worksheet
                .rows
                .iter()
                .filter(|r| needs_cover(r, config))
                .map(uncovered)
                .collect();
            if !rows.is_empty() {
                outcomes.push(Err(Rejection {
                    process_id: id.clone(),
                    reason: RejectionReason::UnreachableQuality(UnreachableQuality {
                        process_id: id,
                        rows,
                        insertion_budget_exhausted: false,
                    }),
                }));
                continue;
            }
        }
        outcomes.push(settle(evaluated, &id, recipe, config)?);
    }
    Ok(outcomes)
}

/// Enumerate, improve, filter and rank every process that can produce
/// `recipe` from `catalog`.
///
/// Base processes are evaluated in parallel; results are merged in
/// enumeration order and then sorted, so the output does not depend on
/// scheduling.
pub fn explore(recipe: &Recipe, catalog: &EquipmentCatalog, config: &AnalysisConfig) -> Result<ExplorationResult> {
    let mut bases: Vec<Process> = BaseProcesses::new(recipe, catalog)?
        .take(config.max_processes.saturating_add(1))
        .collect();
    let truncated = bases.len() > config.max_processes;
    bases.truncate(config.max_processes);
    let examined = bases.len();

    let mut quality_measures: Vec<&EquipmentService> = catalog.quality_measures().collect();
    quality_measures.sort_by(|a, b| a.id.cmp(&b.id));
    quality_measures.dedup_by(|a, b| a.id == b.id);

    let outcomes: Vec<Vec<Outcome>> = bases
        .into_par_iter()
        .map(|base| {
            if config.exhaustive_qm {
                exhaustive_outcomes(base, &quality_measures, recipe, catalog, config)
            } else {
                greedy_outcomes(base, recipe, catalog, config)
            }
        })
        .collect::<Result<_>>()?;

    let mut survivors = Vec::new();
    let mut rejected = Vec::new();
    for outcome in outcomes.into_iter().flatten() {
        match outcome {
            Ok(c) => survivors.push(c),
            Err(r) => rejected.push(r),
        }
    }
    rejected.sort_by(|a, b| a.process_id.cmp(&b.process_id));

    Ok(ExplorationResult {
        recipe_id: recipe.id.clone(),
        ranked: rank_processes(survivors, config),
        rejected_count: rejected.len(),
        rejected,
        examined,
        truncated,
    })
}
