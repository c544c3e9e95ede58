//! Reading and writing model documents.
//!
//! Documents are JSON. Unknown fields are rejected and every error carries
//! the field path plus line and column of the offending token.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::model::{EquipmentCatalog, Process, Recipe, ServiceLibrary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed document text.
    Syntax,
    /// Well-formed text that does not fit the schema.
    Schema,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Field path such as `equipment[0].services[1].failure_modes[0].occurrence`,
    /// `.` for the document root.
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Schema => "schema error",
        };
        write!(
            f,
            "{kind} at `{}` (line {}, column {}): {}",
            self.path, self.line, self.column, self.message
        )
    }
}

fn parse<T: DeserializeOwned>(document: &str) -> Result<T, ParseError> {
    let mut de = serde_json::Deserializer::from_str(document);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        json_error(path, err.into_inner())
    })?;
    de.end().map_err(|err| json_error(".".to_string(), err))?;
    Ok(value)
}

fn json_error(path: String, err: serde_json::Error) -> ParseError {
    let kind = match err.classify() {
        serde_json::error::Category::Data => ParseErrorKind::Schema,
        _ => ParseErrorKind::Syntax,
    };
    // serde_json appends " at line L column C"; keep the bare message.
    let full = err.to_string();
    let message = match full.rfind(" at line ") {
        Some(idx) => full[..idx].to_string(),
        None => full,
    };
    ParseError {
        kind,
        path,
        line: err.line(),
        column: err.column(),
        message,
    }
}

fn write<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("model types always serialize");
    text.push('\n');
    text
}

pub fn parse_library(document: &str) -> Result<ServiceLibrary, ParseError> {
    parse(document)
}

pub fn parse_catalog(document: &str) -> Result<EquipmentCatalog, ParseError> {
    parse(document)
}

pub fn parse_recipe(document: &str) -> Result<Recipe, ParseError> {
    parse(document)
}

pub fn parse_process(document: &str) -> Result<Process, ParseError> {
    parse(document)
}

pub fn parse_config(document: &str) -> Result<AnalysisConfig, ParseError> {
    parse(document)
}

pub fn write_library(library: &ServiceLibrary) -> String {
    write(library)
}

pub fn write_catalog(catalog: &EquipmentCatalog) -> String {
    write(catalog)
}

pub fn write_recipe(recipe: &Recipe) -> String {
    write(recipe)
}

pub fn write_process(process: &Process) -> String {
    write(process)
}

pub fn write_config(config: &AnalysisConfig) -> String {
    write(config)
}
