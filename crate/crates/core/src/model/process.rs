use serde::{Deserialize, Serialize};

/// A concrete production process: equipment services in order, each either
/// bound to a recipe step or acting as a quality measure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Process {
    pub id: String,
    pub steps: Vec<ProcessStep>,
}

impl Process {
    pub fn step(&self, id: &str) -> Option<&ProcessStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// Index of the last step bound to a recipe step.
    pub fn last_binding_index(&self) -> Option<usize> {
        self.steps.iter().rposition(|s| s.binds.is_some())
    }

    /// Equipment-service ids in process order.
    pub fn structure(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.uses.as_str()).collect()
    }

    /// A copy with every quality-measure (unbound) step removed.
    pub fn without_quality_measures(&self) -> Process {
        Process {
            id: self.id.clone(),
            steps: self
                .steps
                .iter()
                .filter(|s| s.binds.is_some())
                .cloned()
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessStep {
    pub id: String,
    /// Equipment service id.
    pub uses: String,
    /// Recipe step id; absent for inserted quality-measure steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binds: Option<String>,
}

impl ProcessStep {
    pub fn binding(id: impl Into<String>, uses: impl Into<String>, binds: impl Into<String>) -> Self {
        ProcessStep {
            id: id.into(),
            uses: uses.into(),
            binds: Some(binds.into()),
        }
    }

    pub fn quality(id: impl Into<String>, uses: impl Into<String>) -> Self {
        ProcessStep {
            id: id.into(),
            uses: uses.into(),
            binds: None,
        }
    }
}
