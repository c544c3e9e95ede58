//! Referential-integrity and invariant checks over parsed documents.
//!
//! Findings are data: every check runs and every violation is reported,
//! in document order, so the same input always yields the same report.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::{
    EquipmentCatalog, Predicate, Process, PropertyKind, PropertyValue, Rating, Recipe,
    ServiceLibrary,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub entity: String,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.entity, self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
    }

    fn push(&mut self, entity: impl Into<String>, field: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            entity: entity.into(),
            field: field.into(),
            message: message.into(),
        });
    }
}

fn duplicates<'a>(ids: impl IntoIterator<Item = &'a str>) -> Vec<&'a str> {
    let mut seen = HashSet::new();
    let mut reported = BTreeSet::new();
    let mut out = Vec::new();
    for id in ids {
        if !seen.insert(id) && reported.insert(id) {
            out.push(id);
        }
    }
    out
}

fn check_rating(
    report: &mut ValidationReport,
    entity: &str,
    field: &str,
    rating: Rating,
    scale_max: u8,
) {
    if !rating.in_scale(scale_max) {
        report.push(
            entity,
            field,
            format!("rating {rating} outside [1, {scale_max}]"),
        );
    }
}

fn check_money(report: &mut ValidationReport, entity: &str, field: &str, value: f64) {
    if !(value.is_finite() && value >= 0.0) {
        report.push(entity, field, format!("{value} is not a nonnegative amount"));
    }
}

pub fn validate_library(library: &ServiceLibrary) -> ValidationReport {
    let mut report = ValidationReport::default();
    for id in duplicates(library.services.iter().map(|s| s.id.as_str())) {
        report.push(id, "id", format!("duplicate service id `{id}`"));
    }
    for service in &library.services {
        if service.id.is_empty() {
            report.push("<service>", "id", "empty service id");
        }
        for name in duplicates(service.properties.iter().map(|p| p.name.as_str())) {
            report.push(&service.id, "properties", format!("duplicate property `{name}`"));
        }
        for property in &service.properties {
            let entity = format!("{}.{}", service.id, property.name);
            match &property.kind {
                PropertyKind::Numeric { unit } if unit.trim().is_empty() => {
                    report.push(entity, "unit", "numeric property needs a unit");
                }
                PropertyKind::Enumeration { values } if values.is_empty() => {
                    report.push(entity, "values", "enumeration property has no values");
                }
                _ => {}
            }
        }
        for id in duplicates(service.failure_modes.iter().map(|f| f.id.as_str())) {
            report.push(&service.id, "failure_modes", format!("duplicate failure mode `{id}`"));
        }
    }
    report
}

/// Checks a catalog against the library it was written for. Ratings are
/// checked against `scale_max`.
pub fn validate_catalog(
    catalog: &EquipmentCatalog,
    library: &ServiceLibrary,
    scale_max: u8,
) -> ValidationReport {
    let mut report = ValidationReport::default();

    for id in duplicates(catalog.equipment.iter().map(|e| e.id.as_str())) {
        report.push(id, "id", format!("duplicate equipment id `{id}`"));
    }
    for id in duplicates(catalog.services().map(|s| s.id.as_str())) {
        report.push(id, "id", format!("duplicate equipment service id `{id}`"));
    }
    for id in duplicates(
        catalog
            .services()
            .flat_map(|s| s.failure_modes.iter().map(|f| f.id.as_str())),
    ) {
        report.push(id, "id", format!("duplicate equipment failure mode id `{id}`"));
    }
    let failure_mode_ids: HashSet<&str> = catalog
        .services()
        .flat_map(|s| s.failure_modes.iter().map(|f| f.id.as_str()))
        .collect();

    for equipment in &catalog.equipment {
        if equipment.services.is_empty() {
            report.push(&equipment.id, "services", "equipment provides no service");
        }
        for es in &equipment.services {
            let entity = es.id.as_str();
            check_money(&mut report, entity, "cost", es.cost_per_execution);
            if let Some(d) = es.duration {
                check_money(&mut report, entity, "duration", d);
            }

            let Some(service) = library.service(&es.fulfills) else {
                report.push(
                    entity,
                    "fulfills",
                    format!("unresolved service `{}`", es.fulfills),
                );
                continue;
            };

            for constraint in &es.constraints {
                let field = format!("constraints.{}", constraint.property);
                let Some(property) = service.property(&constraint.property) else {
                    report.push(
                        entity,
                        field,
                        format!(
                            "service `{}` has no property `{}`",
                            service.id, constraint.property
                        ),
                    );
                    continue;
                };
                match (&constraint.predicate, &property.kind) {
                    (Predicate::NumericRange { min, max }, PropertyKind::Numeric { .. }) => {
                        match (min, max) {
                            (None, None) => report.push(entity, field, "range has no bound"),
                            (Some(lo), Some(hi)) if lo > hi => {
                                report.push(entity, field, format!("min {lo} exceeds max {hi}"))
                            }
                            _ => {}
                        }
                    }
                    (Predicate::EnumSubset { allowed }, PropertyKind::Enumeration { values }) => {
                        for value in allowed.difference(values) {
                            report.push(
                                entity,
                                field.clone(),
                                format!("`{value}` is not a declared value"),
                            );
                        }
                    }
                    (Predicate::BooleanEquals { .. }, PropertyKind::Boolean) => {}
                    (predicate, kind) => report.push(
                        entity,
                        field,
                        format!(
                            "{} constraint on {} property",
                            predicate.label(),
                            kind.label()
                        ),
                    ),
                }
            }

            let mut referenced = HashSet::new();
            for fm in &es.failure_modes {
                let field = format!("failure_modes.{}", fm.id);
                if service.failure_mode(&fm.refers_to).is_none() {
                    report.push(
                        entity,
                        field.clone(),
                        format!(
                            "`{}` is not a failure mode of service `{}`",
                            fm.refers_to, service.id
                        ),
                    );
                } else if !referenced.insert(fm.refers_to.as_str()) {
                    report.push(
                        entity,
                        field.clone(),
                        format!("service failure mode `{}` declared twice", fm.refers_to),
                    );
                }
                check_rating(&mut report, entity, &format!("{field}.occurrence"), fm.occurrence, scale_max);
            }

            if let Some(qm) = &es.quality_measure {
                if qm.covers.is_empty() {
                    report.push(entity, "quality_measure.covers", "quality measure covers nothing");
                }
                for covered in &qm.covers {
                    let field = format!("quality_measure.covers.{}", covered.equipment_failure_mode);
                    if !failure_mode_ids.contains(covered.equipment_failure_mode.as_str()) {
                        report.push(
                            entity,
                            field.clone(),
                            format!(
                                "unresolved equipment failure mode `{}`",
                                covered.equipment_failure_mode
                            ),
                        );
                    }
                    check_rating(&mut report, entity, &format!("{field}.detection"), covered.detection, scale_max);
                }
            }
        }
    }
    report
}

pub fn validate_recipe(recipe: &Recipe, library: &ServiceLibrary, scale_max: u8) -> ValidationReport {
    let mut report = ValidationReport::default();
    if recipe.steps.is_empty() {
        report.push(&recipe.id, "steps", "recipe has no steps");
    }
    if let Some(budget) = recipe.budget {
        check_money(&mut report, &recipe.id, "budget", budget);
    }
    for id in duplicates(recipe.steps.iter().map(|s| s.id.as_str())) {
        report.push(id, "id", format!("duplicate recipe step id `{id}`"));
    }
    for step in &recipe.steps {
        let entity = step.id.as_str();
        let Some(service) = library.service(&step.addresses) else {
            report.push(
                entity,
                "addresses",
                format!("unresolved service `{}`", step.addresses),
            );
            continue;
        };
        for (name, value) in &step.property_values {
            let field = format!("property_values.{name}");
            let Some(property) = service.property(name) else {
                report.push(
                    entity,
                    field,
                    format!("service `{}` has no property `{name}`", service.id),
                );
                continue;
            };
            match (value, &property.kind) {
                (PropertyValue::Numeric(x), PropertyKind::Numeric { .. }) => {
                    if !x.is_finite() {
                        report.push(entity, field, "value is not finite");
                    }
                }
                (PropertyValue::Text(t), PropertyKind::Enumeration { values }) => {
                    if !values.contains(t) {
                        report.push(entity, field, format!("`{t}` is not a declared value"));
                    }
                }
                (PropertyValue::Boolean(_), PropertyKind::Boolean) => {}
                (value, kind) => report.push(
                    entity,
                    field,
                    format!("{} value for {} property", value.label(), kind.label()),
                ),
            }
        }
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for fm in &step.failure_modes {
            let field = format!("failure_modes.{}", fm.belongs_to);
            if service.failure_mode(&fm.belongs_to).is_none() {
                report.push(
                    entity,
                    field.clone(),
                    format!(
                        "`{}` is not a failure mode of service `{}`",
                        fm.belongs_to, service.id
                    ),
                );
            }
            let count = counts.entry(fm.belongs_to.as_str()).or_default();
            *count += 1;
            if *count == 2 {
                report.push(
                    entity,
                    field.clone(),
                    format!("more than one severity for `{}`", fm.belongs_to),
                );
            }
            check_rating(&mut report, entity, &format!("{field}.severity"), fm.severity, scale_max);
        }
    }
    report
}

/// Reference checks for a process document. Whether the process actually
/// produces the recipe is the matcher's job.
pub fn validate_process(
    process: &Process,
    recipe: &Recipe,
    catalog: &EquipmentCatalog,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    if process.steps.is_empty() {
        report.push(&process.id, "steps", "process has no steps");
    }
    for id in duplicates(process.steps.iter().map(|s| s.id.as_str())) {
        report.push(id, "id", format!("duplicate process step id `{id}`"));
    }
    for step in &process.steps {
        if catalog.service(&step.uses).is_none() {
            report.push(
                &step.id,
                "uses",
                format!("unresolved equipment service `{}`", step.uses),
            );
        }
        if let Some(binds) = &step.binds {
            if recipe.step(binds).is_none() {
                report.push(&step.id, "binds", format!("unresolved recipe step `{binds}`"));
            }
        }
    }
    report
}
