//! The `pfmea` command line.
//!
//! Exit codes: 0 success, 1 analysis-negative outcome, 2 input or parse
//! error. Reports go to stdout (or `--out`), diagnostics to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::AnalysisConfig;
use crate::economics::economic_report;
use crate::error::Error;
use crate::explorer::explore;
use crate::io;
use crate::matcher::process_produces;
use crate::model::validate::{
    validate_catalog, validate_library, validate_process, validate_recipe, ValidationReport,
};
use crate::model::{EquipmentCatalog, Process, Recipe};
use crate::montecarlo::{compare_with_analytic, simulate};
use crate::pfmea::analyze_process;
use crate::report::{self, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pfmea", version, about = "Automated process FMEA over service libraries, equipment catalogs and recipes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Service library document.
    #[arg(long, global = true)]
    pub services: Option<PathBuf>,
    /// Equipment catalog document.
    #[arg(long, global = true)]
    pub equipment: Option<PathBuf>,
    #[arg(long, global = true)]
    pub recipe: Option<PathBuf>,
    /// Analysis configuration document.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub process: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// table, csv or structured.
    #[arg(long, global = true, default_value = "table")]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub items: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check documents for schema and reference errors.
    Validate,
    /// Check whether a process produces the recipe.
    Match,
    /// Compute the PFMEA worksheet of a process.
    Analyze,
    /// Enumerate, improve, filter and rank candidate processes.
    Explore,
    /// Monte Carlo check of a process's scrap rates.
    Simulate,
}

/// A failed run: exit code plus the diagnostic for stderr.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Parse(_) | Error::UnknownEquipmentService(_) => EXIT_INPUT,
            _ => EXIT_NEGATIVE,
        };
        Failure(code, err.to_string())
    }
}

type Outcome = Result<(String, i32), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn load<T>(
    path: Option<&Path>,
    flag: &str,
    parse: impl Fn(&str) -> Result<T, io::ParseError>,
) -> Result<T, Failure> {
    let path = path.ok_or_else(|| Failure(EXIT_INPUT, format!("--{flag} is required")))?;
    let text = read(path)?;
    parse(&text).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn require_clean(report: ValidationReport) -> Result<(), Failure> {
    if report.is_clean() {
        return Ok(());
    }
    let lines: Vec<String> = report.findings.iter().map(|f| f.to_string()).collect();
    Err(Failure(EXIT_INPUT, format!("invalid input:\n{}", lines.join("\n"))))
}

struct Inputs {
    catalog: EquipmentCatalog,
    recipe: Recipe,
    config: AnalysisConfig,
}

impl Cli {
    fn config_or_default(&self) -> Result<AnalysisConfig, Failure> {
        match &self.config {
            Some(path) => load(Some(path), "config", io::parse_config),
            None => Ok(AnalysisConfig::new(crate::config::DEFAULT_SCALE_MAX, 1, 1)
                .expect("default config is valid")),
        }
    }

    fn inputs(&self) -> Result<Inputs, Failure> {
        let library = load(self.services.as_deref(), "services", io::parse_library)?;
        let catalog = load(self.equipment.as_deref(), "equipment", io::parse_catalog)?;
        let recipe = load(self.recipe.as_deref(), "recipe", io::parse_recipe)?;
        let config = load(self.config.as_deref(), "config", io::parse_config)?;
        require_clean(validate_library(&library))?;
        let mut report = validate_catalog(&catalog, &library, config.scale_max);
        report.extend(validate_recipe(&recipe, &library, config.scale_max));
        require_clean(report)?;
        Ok(Inputs {
            catalog,
            recipe,
            config,
        })
    }

    fn process_for(&self, inputs: &Inputs) -> Result<Process, Failure> {
        let process = load(self.process.as_deref(), "process", io::parse_process)?;
        require_clean(validate_process(&process, &inputs.recipe, &inputs.catalog))?;
        Ok(process)
    }

    fn validate(&self) -> Outcome {
        let library = load(self.services.as_deref(), "services", io::parse_library)?;
        let scale_max = self.config_or_default()?.scale_max;
        let mut report = validate_library(&library);
        let catalog = match &self.equipment {
            Some(p) => Some(load(Some(p), "equipment", io::parse_catalog)?),
            None => None,
        };
        let recipe = match &self.recipe {
            Some(p) => Some(load(Some(p), "recipe", io::parse_recipe)?),
            None => None,
        };
        if let Some(catalog) = &catalog {
            report.extend(validate_catalog(catalog, &library, scale_max));
        }
        if let Some(recipe) = &recipe {
            report.extend(validate_recipe(recipe, &library, scale_max));
        }
        if let (Some(path), Some(recipe), Some(catalog)) = (&self.process, &recipe, &catalog) {
            let process = load(Some(path), "process", io::parse_process)?;
            report.extend(validate_process(&process, recipe, catalog));
        }
        let code = if report.is_clean() { EXIT_OK } else { EXIT_NEGATIVE };
        Ok((report::write_validation(&report, self.format), code))
    }

    fn matching(&self) -> Outcome {
        let library = load(self.services.as_deref(), "services", io::parse_library)?;
        let catalog = load(self.equipment.as_deref(), "equipment", io::parse_catalog)?;
        let recipe = load(self.recipe.as_deref(), "recipe", io::parse_recipe)?;
        let scale_max = self.config_or_default()?.scale_max;
        require_clean(validate_library(&library))?;
        let mut report = validate_catalog(&catalog, &library, scale_max);
        report.extend(validate_recipe(&recipe, &library, scale_max));
        require_clean(report)?;
        let process = load(self.process.as_deref(), "process", io::parse_process)?;
        let result = process_produces(&process, &recipe, &catalog);
        let code = if result.produces { EXIT_OK } else { EXIT_NEGATIVE };
        Ok((report::write_match(&result, self.format), code))
    }

    fn analyze(&self) -> Outcome {
        let inputs = self.inputs()?;
        let process = self.process_for(&inputs)?;
        let worksheet = match analyze_process(&process, &inputs.recipe, &inputs.catalog, &inputs.config) {
            Ok(ws) => ws,
            Err(Error::NotProducing { result, .. }) => {
                let detail = report::write_match(&result, Format::Table);
                return Err(Failure(EXIT_NEGATIVE, format!("process does not produce recipe\n{detail}")));
            }
            Err(e) => return Err(e.into()),
        };
        let code = if worksheet.worst_rpn <= inputs.config.rpn_threshold {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        };
        Ok((report::write_worksheet(&worksheet, self.format), code))
    }

    fn explore(&self) -> Outcome {
        let inputs = self.inputs()?;
        let result = explore(&inputs.recipe, &inputs.catalog, &inputs.config)?;
        let code = if result.ranked.is_empty() {
            EXIT_NEGATIVE
        } else {
            EXIT_OK
        };
        Ok((report::write_exploration(&result, self.format), code))
    }

    fn simulate(&self) -> Outcome {
        let inputs = self.inputs()?;
        let candidate = if self.process.is_some() {
            let process = self.process_for(&inputs)?;
            crate::explorer::evaluate(process, &inputs.recipe, &inputs.catalog, &inputs.config)?
        } else {
            explore(&inputs.recipe, &inputs.catalog, &inputs.config)?
                .ranked
                .into_iter()
                .next()
                .ok_or_else(|| Failure(EXIT_NEGATIVE, "no candidate process to simulate".to_string()))?
        };
        if self.items == 0 {
            return Err(Failure(EXIT_INPUT, "--items must be at least 1".to_string()));
        }
        let stats = simulate(
            &candidate.process,
            &candidate.worksheet,
            &inputs.catalog,
            &inputs.config,
            self.items,
            self.seed,
        )?;
        let analytic = economic_report(
            &candidate.process,
            &candidate.worksheet,
            &inputs.recipe,
            &inputs.catalog,
            &inputs.config,
        )?;
        let comparison = compare_with_analytic(&stats, &analytic);
        let code = if comparison.flagged() { EXIT_NEGATIVE } else { EXIT_OK };
        Ok((
            report::write_simulation(&candidate.process.id, &stats, &comparison, self.format),
            code,
        ))
    }
}

/// Runs one invocation, writing the report to `stdout` (or `--out`) and
/// diagnostics to `stderr`. Returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = match cli.command {
        Command::Validate => cli.validate(),
        Command::Match => cli.matching(),
        Command::Analyze => cli.analyze(),
        Command::Explore => cli.explore(),
        Command::Simulate => cli.simulate(),
    };
    match outcome {
        Ok((text, code)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_INPUT
                }
            }
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}
