//! Meta-model entities: the abstract service library, vendor equipment
//! catalogs, product recipes and concrete processes.
//!
//! All types are plain data. Structural parsing happens in [`crate::io`];
//! referential integrity is checked by the functions in [`validate`].

mod catalog;
mod library;
mod process;
mod recipe;
pub mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use catalog::{
    CoveredFailureMode, Equipment, EquipmentCatalog, EquipmentFailureMode, EquipmentService,
    Predicate, PropertyConstraint, QualityMeasureKind, QualityMeasureSpec,
};
pub use library::{PropertyKind, Service, ServiceFailureMode, ServiceLibrary, ServiceProperty};
pub use process::{Process, ProcessStep};
pub use recipe::{PropertyValue, Recipe, RecipeStep, RecipeStepFailureMode};

/// An FMEA rating (severity, occurrence or detection).
///
/// Ratings run from 1 to the configured scale maximum. For detection the
/// maximum is the worst value (nothing is detected).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rating(u8);

impl Rating {
    pub const fn new(value: u8) -> Self {
        Rating(value)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub fn in_scale(self, scale_max: u8) -> bool {
        (1..=scale_max).contains(&self.0)
    }
}

impl From<u8> for Rating {
    fn from(value: u8) -> Self {
        Rating(value)
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
