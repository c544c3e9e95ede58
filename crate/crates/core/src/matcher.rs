//! Capability matching: does an equipment service fulfill a recipe step,
//! and does a process produce a recipe.
//!
//! A process produces a recipe when its bound steps, read in process order,
//! are exactly the recipe steps in recipe order, each bound equipment
//! service fulfills its recipe step, and every unbound step is a quality
//! measure. Quality-measure steps may sit anywhere.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::model::{
    EquipmentCatalog, EquipmentService, Predicate, Process, PropertyConstraint, PropertyValue,
    Recipe, RecipeStep,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    OrderViolation,
    UnboundRecipeStep,
    ServiceMismatch,
    ConstraintViolation,
    NonQualityExtraStep,
    /// A process step names an equipment service or recipe step that does
    /// not exist.
    UnresolvedReference,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::OrderViolation => "order_violation",
            ViolationKind::UnboundRecipeStep => "unbound_recipe_step",
            ViolationKind::ServiceMismatch => "service_mismatch",
            ViolationKind::ConstraintViolation => "constraint_violation",
            ViolationKind::NonQualityExtraStep => "non_quality_extra_step",
            ViolationKind::UnresolvedReference => "unresolved_reference",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub recipe_step: String,
    pub process_step: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchResult {
    pub produces: bool,
    /// In process order.
    pub bindings: Vec<Binding>,
    pub violations: Vec<Violation>,
}

impl MatchResult {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Numeric ranges are inclusive at both ends. A value of the wrong kind
/// never satisfies a constraint.
pub fn constraint_satisfied(constraint: &PropertyConstraint, value: &PropertyValue) -> bool {
    match (&constraint.predicate, value) {
        (Predicate::NumericRange { min, max }, PropertyValue::Numeric(x)) => {
            min.is_none_or(|lo| *x >= lo) && max.is_none_or(|hi| *x <= hi)
        }
        (Predicate::EnumSubset { allowed }, PropertyValue::Text(t)) => allowed.contains(t),
        (Predicate::BooleanEquals { expected }, PropertyValue::Boolean(b)) => expected == b,
        _ => false,
    }
}

fn constraint_failures<'a>(
    es: &'a EquipmentService,
    step: &'a RecipeStep,
) -> impl Iterator<Item = String> + 'a {
    es.constraints.iter().filter_map(move |c| match step.property_values.get(&c.property) {
        None => Some(format!(
            "recipe step `{}` gives no value for constrained property `{}` of `{}`",
            step.id, c.property, es.id
        )),
        Some(v) if !constraint_satisfied(c, v) => Some(format!(
            "`{}` value {v} for `{}` violates the limit of `{}`",
            step.id, c.property, es.id
        )),
        Some(_) => None,
    })
}

/// True iff `es` implements the step's service and every one of its
/// constraints is met by a value the step supplies.
pub fn service_fulfills(es: &EquipmentService, step: &RecipeStep) -> bool {
    es.fulfills == step.addresses && constraint_failures(es, step).next().is_none()
}

pub fn process_produces(process: &Process, recipe: &Recipe, catalog: &EquipmentCatalog) -> MatchResult {
    let mut violations = Vec::new();
    let mut bindings = Vec::new();
    let mut bound = HashSet::new();
    // (recipe index, process step id) of first bindings, in process order
    let mut sequence: Vec<(usize, &str)> = Vec::new();

    let mut violation = |kind, detail: String| violations.push(Violation { kind, detail });

    for step in &process.steps {
        let Some(es) = catalog.service(&step.uses) else {
            violation(
                ViolationKind::UnresolvedReference,
                format!("step `{}` uses unknown equipment service `{}`", step.id, step.uses),
            );
            continue;
        };
        let Some(recipe_step_id) = &step.binds else {
            if !es.is_quality_measure() {
                violation(
                    ViolationKind::NonQualityExtraStep,
                    format!(
                        "unbound step `{}` uses `{}`, which is not a quality measure",
                        step.id, es.id
                    ),
                );
            }
            continue;
        };
        let Some(index) = recipe.step_index(recipe_step_id) else {
            violation(
                ViolationKind::UnresolvedReference,
                format!("step `{}` binds unknown recipe step `{recipe_step_id}`", step.id),
            );
            continue;
        };
        let recipe_step = &recipe.steps[index];
        if bound.insert(index) {
            bindings.push(Binding {
                recipe_step: recipe_step.id.clone(),
                process_step: step.id.clone(),
            });
            sequence.push((index, step.id.as_str()));
        } else {
            violation(
                ViolationKind::OrderViolation,
                format!("recipe step `{}` bound again by `{}`", recipe_step.id, step.id),
            );
        }
        if es.fulfills != recipe_step.addresses {
            violation(
                ViolationKind::ServiceMismatch,
                format!(
                    "`{}` fulfills `{}` but recipe step `{}` addresses `{}`",
                    es.id, es.fulfills, recipe_step.id, recipe_step.addresses
                ),
            );
        } else {
            for detail in constraint_failures(es, recipe_step) {
                violation(ViolationKind::ConstraintViolation, detail);
            }
        }
    }

    for pair in sequence.windows(2) {
        let ((earlier, earlier_step), (later, later_step)) = (pair[0], pair[1]);
        if later < earlier {
            violation(
                ViolationKind::OrderViolation,
                format!(
                    "`{later_step}` binds `{}` after `{earlier_step}` binds `{}`",
                    recipe.steps[later].id, recipe.steps[earlier].id
                ),
            );
        }
    }

    for (index, step) in recipe.steps.iter().enumerate() {
        if !bound.contains(&index) {
            violation(
                ViolationKind::UnboundRecipeStep,
                format!("recipe step `{}` is not bound by any process step", step.id),
            );
        }
    }

    MatchResult {
        produces: violations.is_empty(),
        bindings,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn range(min: Option<f64>, max: Option<f64>) -> PropertyConstraint {
        PropertyConstraint {
            property: "weight".into(),
            predicate: Predicate::NumericRange { min, max },
        }
    }

    fn step(addresses: &str, weight: Option<f64>) -> RecipeStep {
        let mut property_values = BTreeMap::new();
        if let Some(w) = weight {
            property_values.insert("weight".to_string(), PropertyValue::Numeric(w));
        }
        RecipeStep {
            id: "r".into(),
            addresses: addresses.into(),
            property_values,
            failure_modes: vec![],
        }
    }

    fn service(fulfills: &str, constraints: Vec<PropertyConstraint>) -> EquipmentService {
        EquipmentService {
            id: "es".into(),
            fulfills: fulfills.into(),
            cost_per_execution: 1.0,
            duration: None,
            constraints,
            failure_modes: vec![],
            quality_measure: None,
        }
    }

    #[test]
    fn numeric_bounds_are_inclusive() {
        let c = range(None, Some(50.0));
        assert!(constraint_satisfied(&c, &PropertyValue::Numeric(50.0)));
        assert!(!constraint_satisfied(&c, &PropertyValue::Numeric(50.01)));
        let c = range(Some(1.0), Some(2.0));
        assert!(constraint_satisfied(&c, &PropertyValue::Numeric(1.0)));
        assert!(!constraint_satisfied(&c, &PropertyValue::Numeric(0.99)));
    }

    #[test]
    fn enum_and_boolean_predicates() {
        let c = PropertyConstraint {
            property: "material".into(),
            predicate: Predicate::EnumSubset {
                allowed: ["steel", "aluminium"].iter().map(|s| s.to_string()).collect(),
            },
        };
        assert!(!constraint_satisfied(&c, &PropertyValue::Text("plastic".into())));
        assert!(constraint_satisfied(&c, &PropertyValue::Text("steel".into())));
        let c = PropertyConstraint {
            property: "fragile".into(),
            predicate: Predicate::BooleanEquals { expected: false },
        };
        assert!(constraint_satisfied(&c, &PropertyValue::Boolean(false)));
        assert!(!constraint_satisfied(&c, &PropertyValue::Boolean(true)));
        // kind mismatch never satisfies
        assert!(!constraint_satisfied(&c, &PropertyValue::Numeric(0.0)));
    }

    #[test]
    fn fulfillment_checks_service_and_constraints() {
        let arm = service("pick_and_place", vec![range(None, Some(50.0))]);
        assert!(service_fulfills(&arm, &step("pick_and_place", Some(20.0))));
        assert!(!service_fulfills(&arm, &step("grease", Some(20.0))));
        assert!(!service_fulfills(&arm, &step("pick_and_place", Some(80.0))));
        // a constrained property with no value fails instead of passing vacuously
        assert!(!service_fulfills(&arm, &step("pick_and_place", None)));
        let unconstrained = service("pick_and_place", vec![]);
        assert!(service_fulfills(&unconstrained, &step("pick_and_place", None)));
    }
}
