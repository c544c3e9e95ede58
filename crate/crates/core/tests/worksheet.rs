mod common;

use common::*;
use pfmea::model::*;
use pfmea::pfmea::{analyze_process, effective_detection};
use pfmea::report::{write_worksheet, Format};
use pfmea::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn roll_process_p_peaks_at_100() {
    let roll = roll();
    let ws = analyze_process(&roll.p, &roll.recipe, &roll.catalog, &roll.config).unwrap();
    assert_eq!(ws.worst_rpn, 100);
    let crimp = ws.rows.iter().find(|r| r.service_failure_mode == "crimping").unwrap();
    assert_eq!((crimp.severity.value(), crimp.occurrence.value(), crimp.detection.value()), (5, 4, 5));
    assert_eq!(crimp.covered_by, None);
}

#[test]
fn roll_process_p_prime_peaks_at_20() {
    let roll = roll();
    let ws = analyze_process(&roll.p_prime, &roll.recipe, &roll.catalog, &roll.config).unwrap();
    assert_eq!(ws.worst_rpn, 20);
    let crimp = ws.rows.iter().find(|r| r.service_failure_mode == "crimping").unwrap();
    assert_eq!(crimp.rpn, 20);
    assert_eq!(crimp.covered_by.as_deref(), Some("p6a"));
}

#[test]
fn conveyor_rows_are_8_and_5() {
    let roll = roll();
    let ws = analyze_process(&roll.p, &roll.recipe, &roll.catalog, &roll.config).unwrap();
    let conveyor: Vec<(&str, u32)> = ws
        .rows
        .iter()
        .filter(|r| r.process_step == "p1")
        .map(|r| (r.service_failure_mode.as_str(), r.rpn))
        .collect();
    assert_eq!(conveyor, [("misplacement", 8), ("shock", 5)]);
    let csv = write_worksheet(&ws, Format::Csv);
    assert!(csv.contains("P,p1,r1,misplacement,4,2,1,8,p6a\n"));
    assert!(csv.contains("P,p1,r1,shock,5,1,1,5,p6a\n"));
    assert_eq!(csv, write_worksheet(&ws, Format::Csv));
}

#[test]
fn effective_detection_examples() {
    let roll = roll();
    let belt_misplacement = effective_detection(&roll.p, 0, "belt-misplacement", &roll.catalog, 5);
    assert_eq!(belt_misplacement, (Rating::new(1), Some("p6a".to_string())));
    // the camera declares no coverage of crimping
    let crimping = effective_detection(&roll.p, 1, "arm-a-crimping", &roll.catalog, 5);
    assert_eq!(crimping, (Rating::new(5), None));

    // two covering measures: camera (2) and laser (1) for too-little grease;
    // best detector wins
    let mut p = roll.p.clone();
    p.steps.push(ProcessStep::quality("p6b", "laser-inspect"));
    assert_eq!(
        effective_detection(&p, 2, "arm-a-too-little", &roll.catalog, 5),
        (Rating::new(1), Some("p6b".to_string()))
    );
}

#[test]
fn detection_cannot_precede_the_failure() {
    let roll = roll();
    let mut p = roll.p.clone();
    let inspection = p.steps.pop().unwrap();
    p.steps.insert(1, inspection);
    let ws = analyze_process(&p, &roll.recipe, &roll.catalog, &roll.config).unwrap();
    for row in &ws.rows {
        let covered = row.process_step == "p1";
        assert_eq!(row.covered_by.is_some(), covered, "{row:?}");
    }
}

#[test]
fn steps_without_rated_failure_modes_give_empty_worksheet() {
    let roll = roll();
    let mut recipe = roll.recipe.clone();
    for step in &mut recipe.steps {
        step.failure_modes.clear();
    }
    let ws = analyze_process(&roll.p, &recipe, &roll.catalog, &roll.config).unwrap();
    assert!(ws.rows.is_empty());
    assert_eq!(ws.worst_rpn, 0);
}

#[test]
fn non_producing_process_is_an_error() {
    let roll = roll();
    let mut p = roll.p.clone();
    p.steps.swap(0, 1);
    match analyze_process(&p, &roll.recipe, &roll.catalog, &roll.config) {
        Err(Error::NotProducing { result, .. }) => assert!(!result.produces),
        other => panic!("expected NotProducing, got {other:?}"),
    }
}

fn relabel_ids(inst: &Instance, process: &Process) -> (Instance, Process) {
    let rename = |s: &str| format!("z_{s}");
    let mut inst = inst.clone();
    let mut process = process.clone();
    for e in &mut inst.catalog.equipment {
        for es in &mut e.services {
            es.id = rename(&es.id);
            for fm in &mut es.failure_modes {
                fm.id = rename(&fm.id);
            }
            if let Some(qm) = &mut es.quality_measure {
                for c in &mut qm.covers {
                    c.equipment_failure_mode = rename(&c.equipment_failure_mode);
                }
            }
        }
    }
    for step in &mut inst.recipe.steps {
        step.id = rename(&step.id);
    }
    for step in &mut process.steps {
        step.id = rename(&step.id);
        step.uses = rename(&step.uses);
        step.binds = step.binds.as_deref().map(rename);
    }
    (inst, process)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn worksheet_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let process = random_producing_process(&inst, &mut rng);
        let ws = analyze_process(&process, &inst.recipe, &inst.catalog, &inst.config).unwrap();

        let mut expected_rows = 0;
        for step in process.steps.iter().filter(|s| s.binds.is_some()) {
            let es = inst.catalog.service(&step.uses).unwrap();
            let rs = inst.recipe.step(step.binds.as_deref().unwrap()).unwrap();
            expected_rows += es.failure_modes.iter().filter(|f| rs.severity_of(&f.refers_to).is_some()).count();
        }
        prop_assert_eq!(ws.rows.len(), expected_rows);
        for row in &ws.rows {
            prop_assert_eq!(row.rpn, row.risk() * u32::from(row.detection.value()));
            prop_assert!(row.risk() <= ws.worst_risk);
            prop_assert!(row.rpn <= ws.worst_rpn);
            prop_assert!(row.detection.in_scale(SCALE));
            if row.covered_by.is_none() {
                prop_assert_eq!(row.detection.value(), SCALE);
            }
        }

        let stripped = analyze_process(&process.without_quality_measures(), &inst.recipe, &inst.catalog, &inst.config).unwrap();
        prop_assert!(stripped.rows.iter().all(|r| r.detection.value() == SCALE && r.covered_by.is_none()));

        let (renamed_inst, renamed_process) = relabel_ids(&inst, &process);
        let renamed = analyze_process(&renamed_process, &renamed_inst.recipe, &renamed_inst.catalog, &renamed_inst.config).unwrap();
        prop_assert_eq!(renamed.worst_rpn, ws.worst_rpn);
        prop_assert_eq!(renamed.worst_risk, ws.worst_risk);

        // adding a quality measure anywhere never worsens a row
        let qms: Vec<String> = inst.catalog.quality_measures().map(|q| q.id.clone()).collect();
        if !qms.is_empty() {
            let mut grown = process.clone();
            let at = rng.gen_range(0..=grown.steps.len());
            grown.steps.insert(at, ProcessStep::quality("extra", qms[rng.gen_range(0..qms.len())].clone()));
            let after = analyze_process(&grown, &inst.recipe, &inst.catalog, &inst.config).unwrap();
            prop_assert_eq!(after.rows.len(), ws.rows.len());
            for (a, b) in after.rows.iter().zip(&ws.rows) {
                prop_assert!(a.detection <= b.detection && a.rpn <= b.rpn);
            }
            prop_assert!(after.worst_rpn <= ws.worst_rpn);
        }
    }
}
