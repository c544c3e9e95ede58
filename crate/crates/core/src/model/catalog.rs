use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Rating;

/// Concrete production equipment offered by one or more vendors.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquipmentCatalog {
    pub equipment: Vec<Equipment>,
}

impl EquipmentCatalog {
    /// All equipment services in catalog order.
    pub fn services(&self) -> impl Iterator<Item = &EquipmentService> {
        self.equipment.iter().flat_map(|e| e.services.iter())
    }

    pub fn service(&self, id: &str) -> Option<&EquipmentService> {
        self.services().find(|s| s.id == id)
    }

    /// Equipment services that carry a quality measure.
    pub fn quality_measures(&self) -> impl Iterator<Item = &EquipmentService> {
        self.services().filter(|s| s.quality_measure.is_some())
    }

    /// Looks up an equipment failure mode by its catalog-wide id.
    pub fn failure_mode(&self, id: &str) -> Option<(&EquipmentService, &EquipmentFailureMode)> {
        self.services()
            .find_map(|s| s.failure_mode(id).map(|fm| (s, fm)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Equipment {
    pub id: String,
    #[serde(default)]
    pub name: String,
    pub services: Vec<EquipmentService>,
}

/// One service a piece of equipment provides, with its limits, cost and
/// failure behaviour. Ids are unique across the whole catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquipmentService {
    pub id: String,
    pub fulfills: String,
    #[serde(rename = "cost")]
    pub cost_per_execution: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    #[serde(default)]
    pub constraints: Vec<PropertyConstraint>,
    #[serde(default)]
    pub failure_modes: Vec<EquipmentFailureMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_measure: Option<QualityMeasureSpec>,
}

impl EquipmentService {
    pub fn failure_mode(&self, id: &str) -> Option<&EquipmentFailureMode> {
        self.failure_modes.iter().find(|f| f.id == id)
    }

    pub fn is_quality_measure(&self) -> bool {
        self.quality_measure.is_some()
    }

    /// Detection rating this service offers for an equipment failure mode,
    /// if it is a quality measure covering it.
    pub fn detection_for(&self, equipment_failure_mode: &str) -> Option<Rating> {
        self.quality_measure.as_ref().and_then(|qm| {
            qm.covers
                .iter()
                .filter(|c| c.equipment_failure_mode == equipment_failure_mode)
                .map(|c| c.detection)
                .min()
        })
    }
}

/// Limits a concrete equipment service puts on one abstract property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConstraintDoc", into = "ConstraintDoc")]
pub struct PropertyConstraint {
    pub property: String,
    pub predicate: Predicate,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    /// Inclusive on both ends; at least one bound is present.
    NumericRange { min: Option<f64>, max: Option<f64> },
    EnumSubset { allowed: BTreeSet<String> },
    BooleanEquals { expected: bool },
}

impl Predicate {
    pub fn label(&self) -> &'static str {
        match self {
            Predicate::NumericRange { .. } => "numeric",
            Predicate::EnumSubset { .. } => "enumeration",
            Predicate::BooleanEquals { .. } => "boolean",
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDoc {
    property: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    allowed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<bool>,
}

impl TryFrom<ConstraintDoc> for PropertyConstraint {
    type Error = String;

    fn try_from(doc: ConstraintDoc) -> Result<Self, Self::Error> {
        let ranged = doc.min.is_some() || doc.max.is_some();
        let predicate = match (ranged, doc.allowed, doc.expected) {
            (true, None, None) => Predicate::NumericRange {
                min: doc.min,
                max: doc.max,
            },
            (false, Some(allowed), None) => Predicate::EnumSubset {
                allowed: allowed.into_iter().collect(),
            },
            (false, None, Some(expected)) => Predicate::BooleanEquals { expected },
            (false, None, None) => {
                return Err(format!(
                    "constraint on `{}` needs one of min/max, allowed or expected",
                    doc.property
                ))
            }
            _ => {
                return Err(format!(
                    "constraint on `{}` mixes min/max, allowed and expected",
                    doc.property
                ))
            }
        };
        Ok(PropertyConstraint {
            property: doc.property,
            predicate,
        })
    }
}

impl From<PropertyConstraint> for ConstraintDoc {
    fn from(c: PropertyConstraint) -> Self {
        let mut doc = ConstraintDoc {
            property: c.property,
            min: None,
            max: None,
            allowed: None,
            expected: None,
        };
        match c.predicate {
            Predicate::NumericRange { min, max } => {
                doc.min = min;
                doc.max = max;
            }
            Predicate::EnumSubset { allowed } => doc.allowed = Some(allowed.into_iter().collect()),
            Predicate::BooleanEquals { expected } => doc.expected = Some(expected),
        }
        doc
    }
}

/// How a service failure mode shows up on this equipment, with its
/// occurrence rating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquipmentFailureMode {
    pub id: String,
    pub refers_to: String,
    pub occurrence: Rating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QualityMeasureKind {
    Inspection,
    Measurement,
    Correction,
    Rejection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QualityMeasureSpec {
    pub kind: QualityMeasureKind,
    pub covers: Vec<CoveredFailureMode>,
}

/// A quality measure's ability to detect one equipment failure mode. The
/// covered failure mode may belong to any equipment in the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveredFailureMode {
    pub equipment_failure_mode: String,
    pub detection: Rating,
}
