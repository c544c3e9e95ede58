//! Item-by-item production simulation, used as an independent check on the
//! closed-form scrap rates in [`crate::economics`].
//!
//! Randomness comes from ChaCha8 seeded with the user seed; items are
//! simulated in fixed blocks of [`BLOCK_ITEMS`], block `b` drawing from
//! ChaCha stream `b`. Results therefore depend only on the seed and item
//! count, never on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::economics::EconomicReport;
use crate::error::{Error, Result};
use crate::model::{EquipmentCatalog, Process};
use crate::pfmea::PfmeaWorksheet;

pub const BLOCK_ITEMS: u64 = 16_384;

/// Deviation beyond which the comparison flags a rate, in binomial sigmas.
pub const FLAG_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationStats {
    pub items: u64,
    pub rejected: u64,
    /// Shipped items carrying at least one undetected defect.
    pub escaped: u64,
    pub total_cost: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    rejected: u64,
    escaped: u64,
}

fn simulate_block(seed: u64, block: u64, items: u64, sources: &[(f64, f64)]) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut tally = Tally::default();
    for _ in 0..items {
        let mut caught = false;
        let mut slipped = false;
        for &(p_occ, p_catch) in sources {
            if rng.gen::<f64>() < p_occ {
                if rng.gen::<f64>() < p_catch {
                    caught = true;
                } else {
                    slipped = true;
                }
            }
        }
        if caught {
            tally.rejected += 1;
        } else if slipped {
            tally.escaped += 1;
        }
    }
    tally
}

/// Simulates `items` production attempts of `process`.
///
/// Each worksheet row fires a defect with its occurrence probability; a
/// fired defect is caught with the catch probability of the row's
/// detection rating. One caught defect scraps the item.
pub fn simulate(
    process: &Process,
    worksheet: &PfmeaWorksheet,
    catalog: &EquipmentCatalog,
    config: &AnalysisConfig,
    items: u64,
    seed: u64,
) -> Result<SimulationStats> {
    let mut attempt_cost = 0.0;
    for step in &process.steps {
        let es = catalog
            .service(&step.uses)
            .ok_or_else(|| Error::UnknownEquipmentService(step.uses.clone()))?;
        attempt_cost += es.cost_per_execution;
    }
    let sources: Vec<(f64, f64)> = worksheet
        .rows
        .iter()
        .map(|row| {
            (
                config.occurrence_probability(row.occurrence),
                config.catch_probability(row.detection),
            )
        })
        .collect();

    let blocks = items.div_ceil(BLOCK_ITEMS);
    let total = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_ITEMS.min(items - b * BLOCK_ITEMS);
            simulate_block(seed, b, n, &sources)
        })
        .reduce(Tally::default, |a, b| Tally {
            rejected: a.rejected + b.rejected,
            escaped: a.escaped + b.escaped,
        });

    Ok(SimulationStats {
        items,
        rejected: total.rejected,
        escaped: total.escaped,
        total_cost: items as f64 * attempt_cost,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateComparison {
    pub analytic: f64,
    pub empirical: f64,
    /// Binomial standard error at the analytic rate.
    pub sigma: f64,
    pub flagged: bool,
}

impl RateComparison {
    fn new(analytic: f64, hits: u64, items: u64) -> Self {
        let n = items as f64;
        let empirical = hits as f64 / n;
        let sigma = (analytic * (1.0 - analytic) / n).sqrt();
        let deviation = (empirical - analytic).abs();
        // a zero-variance rate must be matched exactly (up to rounding)
        let flagged = if sigma > 0.0 {
            deviation > FLAG_SIGMAS * sigma
        } else {
            deviation > 1e-12
        };
        RateComparison {
            analytic,
            empirical,
            sigma,
            flagged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub rejection: RateComparison,
    pub escape: RateComparison,
}

impl ComparisonReport {
    pub fn flagged(&self) -> bool {
        self.rejection.flagged || self.escape.flagged
    }
}

pub fn compare_with_analytic(stats: &SimulationStats, report: &EconomicReport) -> ComparisonReport {
    ComparisonReport {
        rejection: RateComparison::new(report.rejection_rate, stats.rejected, stats.items),
        escape: RateComparison::new(report.escape_rate, stats.escaped, stats.items),
    }
}
