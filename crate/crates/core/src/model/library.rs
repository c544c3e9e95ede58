use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// The global vocabulary of abstract services.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceLibrary {
    pub services: Vec<Service>,
}

impl ServiceLibrary {
    pub fn service(&self, id: &str) -> Option<&Service> {
        self.services.iter().find(|s| s.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Service {
    pub id: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub properties: Vec<ServiceProperty>,
    #[serde(default)]
    pub failure_modes: Vec<ServiceFailureMode>,
}

impl Service {
    pub fn property(&self, name: &str) -> Option<&ServiceProperty> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn failure_mode(&self, id: &str) -> Option<&ServiceFailureMode> {
        self.failure_modes.iter().find(|f| f.id == id)
    }
}

/// A parameter of an abstract service, e.g. the weight of the item moved
/// by pick-and-place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PropertyDoc", into = "PropertyDoc")]
pub struct ServiceProperty {
    pub name: String,
    pub kind: PropertyKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PropertyKind {
    Numeric { unit: String },
    Enumeration { values: BTreeSet<String> },
    Boolean,
}

impl PropertyKind {
    pub fn label(&self) -> &'static str {
        match self {
            PropertyKind::Numeric { .. } => "numeric",
            PropertyKind::Enumeration { .. } => "enumeration",
            PropertyKind::Boolean => "boolean",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceFailureMode {
    pub id: String,
    #[serde(default)]
    pub description: String,
}

/// Flat document form of a property: `{name, kind, unit | values}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PropertyDoc {
    name: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<String>>,
}

impl TryFrom<PropertyDoc> for ServiceProperty {
    type Error = String;

    fn try_from(doc: PropertyDoc) -> Result<Self, Self::Error> {
        let kind = match doc.kind.as_str() {
            "numeric" => {
                if doc.values.is_some() {
                    return Err("numeric property does not take `values`".into());
                }
                let unit = doc
                    .unit
                    .ok_or_else(|| "numeric property requires `unit`".to_string())?;
                PropertyKind::Numeric { unit }
            }
            "enumeration" => {
                if doc.unit.is_some() {
                    return Err("enumeration property does not take `unit`".into());
                }
                let values = doc
                    .values
                    .ok_or_else(|| "enumeration property requires `values`".to_string())?;
                PropertyKind::Enumeration {
                    values: values.into_iter().collect(),
                }
            }
            "boolean" => {
                if doc.unit.is_some() || doc.values.is_some() {
                    return Err("boolean property takes neither `unit` nor `values`".into());
                }
                PropertyKind::Boolean
            }
            other => {
                return Err(format!(
                    "unknown property kind `{other}`, expected numeric, enumeration or boolean"
                ))
            }
        };
        Ok(ServiceProperty {
            name: doc.name,
            kind,
        })
    }
}

impl From<ServiceProperty> for PropertyDoc {
    fn from(p: ServiceProperty) -> Self {
        let label = p.kind.label().to_string();
        let (unit, values) = match p.kind {
            PropertyKind::Numeric { unit } => (Some(unit), None),
            PropertyKind::Enumeration { values } => (None, Some(values.into_iter().collect())),
            PropertyKind::Boolean => (None, None),
        };
        PropertyDoc {
            name: p.name,
            kind: label,
            unit,
            values,
        }
    }
}
