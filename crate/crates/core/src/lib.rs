//! Automated process FMEA.
//!
//! Given an abstract service library, equipment catalogs and a product
//! recipe, this crate decides which processes can produce the recipe,
//! computes PFMEA worksheets with risk priority numbers, places quality
//! measures until risk limits hold, prices the result against the recipe
//! budget and ranks the surviving processes.
//!
//! The `examples/` directory walks through each capability:
//!
//! ```bash
//! cargo run -p pfmea --example validate_documents
//! cargo run -p pfmea --example match_process
//! cargo run -p pfmea --example analyze_worksheet
//! cargo run -p pfmea --example explore_processes
//! cargo run -p pfmea --example economics_vs_simulation
//! ```

pub mod cli;
pub mod config;
pub mod economics;
pub mod error;
pub mod explorer;
pub mod io;
pub mod matcher;
pub mod model;
pub mod montecarlo;
pub mod pfmea;
pub mod report;

pub use config::{AnalysisConfig, RankingCriterion};
pub use error::{Error, Result};
pub use explorer::{explore, Candidate, ExplorationResult};
pub use matcher::{process_produces, MatchResult};
pub use pfmea::{analyze_process, PfmeaWorksheet, WorksheetRow};
