#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use pfmea::config::{AnalysisConfig, RankingCriterion};
use pfmea::io;
use pfmea::model::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub const ROLL_LIBRARY: &str = include_str!("../../fixtures/roll/library.json");
pub const ROLL_CATALOG: &str = include_str!("../../fixtures/roll/catalog.json");
pub const ROLL_RECIPE: &str = include_str!("../../fixtures/roll/recipe.json");
pub const ROLL_CONFIG: &str = include_str!("../../fixtures/roll/config.json");
pub const ROLL_PROCESS_P: &str = include_str!("../../fixtures/roll/process_p.json");
pub const ROLL_PROCESS_P_PRIME: &str = include_str!("../../fixtures/roll/process_p_prime.json");

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/roll")
}

pub struct Roll {
    pub library: ServiceLibrary,
    pub catalog: EquipmentCatalog,
    pub recipe: Recipe,
    pub config: AnalysisConfig,
    pub p: Process,
    pub p_prime: Process,
}

pub fn roll() -> Roll {
    Roll {
        library: io::parse_library(ROLL_LIBRARY).unwrap(),
        catalog: io::parse_catalog(ROLL_CATALOG).unwrap(),
        recipe: io::parse_recipe(ROLL_RECIPE).unwrap(),
        config: io::parse_config(ROLL_CONFIG).unwrap(),
        p: io::parse_process(ROLL_PROCESS_P).unwrap(),
        p_prime: io::parse_process(ROLL_PROCESS_P_PRIME).unwrap(),
    }
}

/// A random, valid model small enough for brute force.
#[derive(Debug, Clone)]
pub struct Instance {
    pub library: ServiceLibrary,
    pub catalog: EquipmentCatalog,
    pub recipe: Recipe,
    pub config: AnalysisConfig,
}

pub const SCALE: u8 = 5;

fn rating(rng: &mut impl Rng) -> Rating {
    Rating::new(rng.gen_range(1..=SCALE))
}

fn half_units(rng: &mut impl Rng, lo: u32, hi: u32) -> f64 {
    f64::from(rng.gen_range(lo..=hi)) * 0.5
}

/// At most 4 recipe steps, at most 3 fulfilling services per step and at
/// most 2 quality measures.
pub fn random_instance(rng: &mut impl Rng) -> Instance {
    let service_count = rng.gen_range(1..=3);
    let mut services: Vec<Service> = (0..service_count)
        .map(|s| Service {
            id: format!("svc{s}"),
            name: String::new(),
            properties: vec![
                ServiceProperty {
                    name: "x".into(),
                    kind: PropertyKind::Numeric { unit: "u".into() },
                },
                ServiceProperty {
                    name: "finish".into(),
                    kind: PropertyKind::Enumeration {
                        values: ["matte", "gloss"].iter().map(|v| v.to_string()).collect(),
                    },
                },
            ],
            failure_modes: (0..rng.gen_range(1..=3))
                .map(|f| ServiceFailureMode {
                    id: format!("fm{f}"),
                    description: String::new(),
                })
                .collect(),
        })
        .collect();
    services.push(Service {
        id: "inspect".into(),
        name: String::new(),
        properties: vec![],
        failure_modes: vec![],
    });

    let mut equipment = Vec::new();
    for service in &services[..service_count] {
        // the first option is unconstrained so every step stays producible
        for o in 0..rng.gen_range(1..=3) {
            let id = format!("{}-e{o}", service.id);
            let mut constraints = Vec::new();
            if o > 0 && rng.gen_bool(0.5) {
                constraints.push(PropertyConstraint {
                    property: "x".into(),
                    predicate: Predicate::NumericRange {
                        min: None,
                        max: Some(f64::from(rng.gen_range(2..=9))),
                    },
                });
            }
            if o > 0 && rng.gen_bool(0.3) {
                constraints.push(PropertyConstraint {
                    property: "finish".into(),
                    predicate: Predicate::EnumSubset {
                        allowed: BTreeSet::from(["matte".to_string()]),
                    },
                });
            }
            let mut failure_modes = Vec::new();
            for fm in &service.failure_modes {
                if rng.gen_bool(0.85) {
                    failure_modes.push(EquipmentFailureMode {
                        id: format!("{id}-{}", fm.id),
                        refers_to: fm.id.clone(),
                        occurrence: rating(rng),
                    });
                }
            }
            equipment.push(Equipment {
                id: id.clone(),
                name: String::new(),
                services: vec![EquipmentService {
                    id: id.clone(),
                    fulfills: service.id.clone(),
                    cost_per_execution: half_units(rng, 1, 6),
                    duration: rng.gen_bool(0.8).then(|| f64::from(rng.gen_range(1..=5))),
                    constraints,
                    failure_modes,
                    quality_measure: None,
                }],
            });
        }
    }

    let all_efms: Vec<String> = equipment
        .iter()
        .flat_map(|e| e.services[0].failure_modes.iter().map(|f| f.id.clone()))
        .collect();
    let kinds = [
        QualityMeasureKind::Inspection,
        QualityMeasureKind::Measurement,
        QualityMeasureKind::Correction,
        QualityMeasureKind::Rejection,
    ];
    for q in 0..rng.gen_range(0..=2) {
        let mut covers = Vec::new();
        for efm in &all_efms {
            if rng.gen_bool(0.5) {
                covers.push(CoveredFailureMode {
                    equipment_failure_mode: efm.clone(),
                    detection: rating(rng),
                });
            }
        }
        if covers.is_empty() {
            if all_efms.is_empty() {
                continue;
            }
            covers.push(CoveredFailureMode {
                equipment_failure_mode: all_efms.choose(rng).unwrap().clone(),
                detection: Rating::new(rng.gen_range(1..SCALE)),
            });
        }
        let id = format!("qm{q}");
        equipment.push(Equipment {
            id: id.clone(),
            name: String::new(),
            services: vec![EquipmentService {
                id,
                fulfills: "inspect".into(),
                cost_per_execution: half_units(rng, 1, 4),
                duration: rng.gen_bool(0.8).then(|| f64::from(rng.gen_range(1..=3))),
                constraints: vec![],
                failure_modes: vec![],
                quality_measure: Some(QualityMeasureSpec {
                    kind: *kinds.choose(rng).unwrap(),
                    covers,
                }),
            }],
        });
    }

    let steps = (0..rng.gen_range(1..=4))
        .map(|i| {
            let service = &services[rng.gen_range(0..service_count)];
            let mut property_values = BTreeMap::new();
            property_values.insert("x".to_string(), PropertyValue::Numeric(f64::from(rng.gen_range(0..=10))));
            property_values.insert(
                "finish".to_string(),
                PropertyValue::Text(if rng.gen_bool(0.5) { "matte" } else { "gloss" }.to_string()),
            );
            let mut failure_modes = Vec::new();
            for fm in &service.failure_modes {
                if rng.gen_bool(0.8) {
                    failure_modes.push(RecipeStepFailureMode {
                        belongs_to: fm.id.clone(),
                        severity: rating(rng),
                    });
                }
            }
            RecipeStep {
                id: format!("r{}", i + 1),
                addresses: service.id.clone(),
                property_values,
                failure_modes,
            }
        })
        .collect();

    let recipe = Recipe {
        id: "recipe".into(),
        budget: rng.gen_bool(0.7).then(|| half_units(rng, 4, 30)),
        steps,
    };

    let mut config = AnalysisConfig::new(SCALE, rng.gen_range(4..=16), rng.gen_range(10..=80)).unwrap();
    config.max_quality_measures = rng.gen_range(0..=2);
    let mut criteria = vec![
        RankingCriterion::WorstRpn,
        RankingCriterion::ExpectedCost,
        RankingCriterion::Duration,
    ];
    criteria.shuffle(rng);
    criteria.truncate(rng.gen_range(1..=3));
    config.ranking_criteria = criteria;

    Instance {
        library: ServiceLibrary { services },
        catalog: EquipmentCatalog { equipment },
        recipe,
        config,
    }
}

/// A random producing process for the instance: one fulfilling equipment
/// service per recipe step plus quality measures at random positions.
pub fn random_producing_process(inst: &Instance, rng: &mut impl Rng) -> Process {
    let mut steps: Vec<ProcessStep> = inst
        .recipe
        .steps
        .iter()
        .enumerate()
        .map(|(i, rs)| {
            let options: Vec<&EquipmentService> = inst
                .catalog
                .services()
                .filter(|es| pfmea::matcher::service_fulfills(es, rs))
                .collect();
            let es = options.choose(rng).expect("instances are producible");
            ProcessStep::binding(format!("p{}", i + 1), es.id.clone(), rs.id.clone())
        })
        .collect();
    let qms: Vec<&EquipmentService> = inst.catalog.quality_measures().collect();
    if !qms.is_empty() {
        for q in 0..rng.gen_range(0..=3) {
            let at = rng.gen_range(0..=steps.len());
            steps.insert(at, ProcessStep::quality(format!("q{q}"), qms.choose(rng).unwrap().id.clone()));
        }
    }
    Process {
        id: "random".into(),
        steps,
    }
}
