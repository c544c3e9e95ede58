//! Report rendering: aligned text tables, CSV and structured JSON.
//!
//! Rendering is deterministic; the same input always produces the same
//! bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::explorer::{ExplorationResult, RejectionReason};
use crate::matcher::MatchResult;
use crate::model::validate::ValidationReport;
use crate::montecarlo::{ComparisonReport, SimulationStats};
use crate::pfmea::PfmeaWorksheet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Structured,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "structured" | "json" => Ok(Format::Structured),
            other => Err(format!("unknown format `{other}` (table, csv, structured)")),
        }
    }
}

pub const WORKSHEET_COLUMNS: [&str; 9] = [
    "process_id",
    "process_step_id",
    "recipe_step_id",
    "service_failure_mode",
    "severity",
    "occurrence",
    "detection",
    "rpn",
    "covered_by",
];

pub const EXPLORATION_COLUMNS: [&str; 11] = [
    "rank",
    "process_id",
    "worst_rpn",
    "worst_risk",
    "attempt_cost",
    "rejection_rate",
    "escape_rate",
    "expected_cost_per_accepted",
    "within_budget",
    "duration",
    "steps",
];

/// Anything `write_report` can render.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Worksheet(&'a PfmeaWorksheet),
    Exploration(&'a ExplorationResult),
}

pub fn write_report(report: Report<'_>, format: Format) -> String {
    match report {
        Report::Worksheet(ws) => write_worksheet(ws, format),
        Report::Exploration(result) => write_exploration(result, format),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports always serialize");
    text.push('\n');
    text
}

fn csv_text(header: &[&str], records: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for record in records {
        writer.write_record(record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn table_text(header: &[&str], records: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for record in records {
        for (w, cell) in widths.iter_mut().zip(record) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let row: Vec<String> = cells
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        out.push_str(row.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    line(&mut rule.iter().map(String::as_str));
    for record in records {
        line(&mut record.iter().map(String::as_str));
    }
    out
}

fn worksheet_records(ws: &PfmeaWorksheet) -> Vec<Vec<String>> {
    ws.rows
        .iter()
        .map(|r| {
            vec![
                ws.process_id.clone(),
                r.process_step.clone(),
                r.recipe_step.clone(),
                r.service_failure_mode.clone(),
                r.severity.to_string(),
                r.occurrence.to_string(),
                r.detection.to_string(),
                r.rpn.to_string(),
                r.covered_by.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

pub fn write_worksheet(ws: &PfmeaWorksheet, format: Format) -> String {
    match format {
        Format::Csv => csv_text(&WORKSHEET_COLUMNS, &worksheet_records(ws)),
        Format::Structured => json(ws),
        Format::Table => {
            let mut out = format!(
                "PFMEA worksheet for process {}\nworst RPN {}, worst risk (S*O) {}\n\n",
                ws.process_id, ws.worst_rpn, ws.worst_risk
            );
            out.push_str(&table_text(&WORKSHEET_COLUMNS, &worksheet_records(ws)));
            out
        }
    }
}

fn fixed(x: f64, digits: usize) -> String {
    format!("{x:.digits$}")
}

fn exploration_records(result: &ExplorationResult) -> Vec<Vec<String>> {
    result
        .ranked
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let e = &c.economics;
            vec![
                (i + 1).to_string(),
                c.process.id.clone(),
                c.worksheet.worst_rpn.to_string(),
                c.worksheet.worst_risk.to_string(),
                fixed(e.attempt_cost, 4),
                fixed(e.rejection_rate, 8),
                fixed(e.escape_rate, 8),
                fixed(e.expected_cost_per_accepted, 4),
                e.within_budget.to_string(),
                e.duration.map(|d| fixed(d, 4)).unwrap_or_default(),
                c.process.steps.len().to_string(),
            ]
        })
        .collect()
}

fn describe(reason: &RejectionReason) -> String {
    match reason {
        RejectionReason::UnreachableQuality(u) => {
            let rows: Vec<String> = u
                .rows
                .iter()
                .map(|r| format!("{}/{} (risk {})", r.process_step, r.equipment_failure_mode, r.risk))
                .collect();
            let budget = if u.insertion_budget_exhausted {
                "; quality-measure budget exhausted"
            } else {
                ""
            };
            format!("unreachable quality: {}{budget}", rows.join(", "))
        }
        RejectionReason::RpnAboveThreshold {
            worst_rpn,
            threshold,
        } => format!("worst RPN {worst_rpn} above {threshold}"),
        RejectionReason::OverBudget {
            expected_cost_per_accepted,
            budget,
        } => format!(
            "expected cost {} over budget {}",
            fixed(*expected_cost_per_accepted, 4),
            fixed(*budget, 4)
        ),
        RejectionReason::DegenerateEconomics => "every attempt is rejected".to_string(),
    }
}

pub fn write_exploration(result: &ExplorationResult, format: Format) -> String {
    match format {
        Format::Csv => csv_text(&EXPLORATION_COLUMNS, &exploration_records(result)),
        Format::Structured => json(result),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "exploration of recipe {}: {} base processes examined{}, {} accepted, {} rejected\n",
                result.recipe_id,
                result.examined,
                if result.truncated { " (truncated)" } else { "" },
                result.ranked.len(),
                result.rejected_count
            );
            out.push_str(&table_text(&EXPLORATION_COLUMNS, &exploration_records(result)));
            if !result.rejected.is_empty() {
                out.push_str("\nrejected:\n");
                for r in &result.rejected {
                    let _ = writeln!(out, "  {}: {}", r.process_id, describe(&r.reason));
                }
            }
            out
        }
    }
}

pub fn write_match(result: &MatchResult, format: Format) -> String {
    match format {
        Format::Structured => json(result),
        Format::Csv => {
            let records: Vec<Vec<String>> = result
                .violations
                .iter()
                .map(|v| vec![v.kind.to_string(), v.detail.clone()])
                .collect();
            csv_text(&["kind", "detail"], &records)
        }
        Format::Table => {
            let mut out = format!("produces: {}\n", result.produces);
            for b in &result.bindings {
                let _ = writeln!(out, "  {} <- {}", b.recipe_step, b.process_step);
            }
            for v in &result.violations {
                let _ = writeln!(out, "{}: {}", v.kind, v.detail);
            }
            out
        }
    }
}

pub fn write_validation(report: &ValidationReport, format: Format) -> String {
    match format {
        Format::Structured => json(report),
        _ => {
            let records: Vec<Vec<String>> = report
                .findings
                .iter()
                .map(|f| vec![f.entity.clone(), f.field.clone(), f.message.clone()])
                .collect();
            if format == Format::Csv {
                csv_text(&["entity", "field", "message"], &records)
            } else if records.is_empty() {
                "no findings\n".to_string()
            } else {
                table_text(&["entity", "field", "message"], &records)
            }
        }
    }
}

#[derive(Serialize)]
struct SimulationDoc<'a> {
    process_id: &'a str,
    stats: &'a SimulationStats,
    comparison: &'a ComparisonReport,
}

pub fn write_simulation(
    process_id: &str,
    stats: &SimulationStats,
    comparison: &ComparisonReport,
    format: Format,
) -> String {
    let doc = SimulationDoc {
        process_id,
        stats,
        comparison,
    };
    let records = [("rejection_rate", &comparison.rejection), ("escape_rate", &comparison.escape)]
        .iter()
        .map(|(name, c)| {
            vec![
                name.to_string(),
                fixed(c.analytic, 8),
                fixed(c.empirical, 8),
                format!("{:.3e}", c.sigma),
                c.flagged.to_string(),
            ]
        })
        .collect::<Vec<_>>();
    let header = ["rate", "analytic", "empirical", "sigma", "flagged"];
    match format {
        Format::Structured => json(&doc),
        Format::Csv => csv_text(&header, &records),
        Format::Table => {
            let mut out = format!(
                "simulation of process {process_id}: {} items (seed {}), {} rejected, {} escaped, total cost {}\n\n",
                stats.items,
                stats.seed,
                stats.rejected,
                stats.escaped,
                fixed(stats.total_cost, 4)
            );
            out.push_str(&table_text(&header, &records));
            out
        }
    }
}
