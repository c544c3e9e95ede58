//! Check whether processes produce the roll recipe, and list every reason
//! when they do not.

use pfmea::io;
use pfmea::matcher::{process_produces, service_fulfills};
use pfmea::model::ProcessStep;
use pfmea::report::{write_match, Format};

fn main() {
    let catalog = io::parse_catalog(include_str!("../fixtures/roll/catalog.json")).unwrap();
    let recipe = io::parse_recipe(include_str!("../fixtures/roll/recipe.json")).unwrap();
    let p = io::parse_process(include_str!("../fixtures/roll/process_p.json")).unwrap();

    println!("which equipment can do each recipe step:");
    for step in &recipe.steps {
        let options: Vec<&str> = catalog
            .services()
            .filter(|es| service_fulfills(es, step))
            .map(|es| es.id.as_str())
            .collect();
        println!("  {} ({}): {}", step.id, step.addresses, options.join(", "));
    }

    println!("\nprocess P:");
    print!("{}", write_match(&process_produces(&p, &recipe, &catalog), Format::Table));

    // an extra inspection anywhere is fine
    let mut inspected = p.clone();
    inspected.steps.insert(2, ProcessStep::quality("p2a", "camera-inspect"));
    println!("\nP with an extra inspection after p2:");
    print!("{}", write_match(&process_produces(&inspected, &recipe, &catalog), Format::Table));

    // swapping steps and using the soft gripper on steel fails twice over
    let mut wrong = p.clone();
    wrong.steps.swap(2, 3);
    wrong.steps[5].uses = "arm-b-pnp".into();
    println!("\nP with swapped steps and the soft gripper on steel:");
    print!("{}", write_match(&process_produces(&wrong, &recipe, &catalog), Format::Table));
}
