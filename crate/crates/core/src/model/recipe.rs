use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use super::Rating;

/// Product-side description of how to manufacture an item, written
/// against abstract services only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    pub id: String,
    /// Per accepted item. `None` disables the budget check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    #[serde(deserialize_with = "non_empty_steps")]
    pub steps: Vec<RecipeStep>,
}

impl Recipe {
    pub fn step(&self, id: &str) -> Option<&RecipeStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn step_index(&self, id: &str) -> Option<usize> {
        self.steps.iter().position(|s| s.id == id)
    }

    /// The budget as a number, +infinity when absent.
    pub fn budget_limit(&self) -> f64 {
        self.budget.unwrap_or(f64::INFINITY)
    }
}

fn non_empty_steps<'de, D>(deserializer: D) -> Result<Vec<RecipeStep>, D::Error>
where
    D: Deserializer<'de>,
{
    let steps = Vec::<RecipeStep>::deserialize(deserializer)?;
    if steps.is_empty() {
        return Err(serde::de::Error::custom("recipe must have at least one step"));
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeStep {
    pub id: String,
    pub addresses: String,
    #[serde(default)]
    pub property_values: BTreeMap<String, PropertyValue>,
    #[serde(default)]
    pub failure_modes: Vec<RecipeStepFailureMode>,
}

impl RecipeStep {
    /// Severity the product assigns to a service failure mode in this step.
    pub fn severity_of(&self, service_failure_mode: &str) -> Option<Rating> {
        self.failure_modes
            .iter()
            .find(|f| f.belongs_to == service_failure_mode)
            .map(|f| f.severity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Boolean(bool),
    Numeric(f64),
    Text(String),
}

impl PropertyValue {
    pub fn label(&self) -> &'static str {
        match self {
            PropertyValue::Boolean(_) => "boolean",
            PropertyValue::Numeric(_) => "numeric",
            PropertyValue::Text(_) => "enumeration",
        }
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Boolean(b) => write!(f, "{b}"),
            PropertyValue::Numeric(x) => write!(f, "{x}"),
            PropertyValue::Text(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeStepFailureMode {
    pub belongs_to: String,
    pub severity: Rating,
}
