//! Enumerate every process for the roll recipe, add quality measures until
//! no risky failure mode goes undetected, and rank what survives.
//!
//! Pass `--exhaustive` to try every combination of quality measures
//! instead of the greedy placement.

use pfmea::report::{write_exploration, Format};
use pfmea::{explore, io};

fn main() {
    let catalog = io::parse_catalog(include_str!("../fixtures/roll/catalog.json")).unwrap();
    let recipe = io::parse_recipe(include_str!("../fixtures/roll/recipe.json")).unwrap();
    let mut config = io::parse_config(include_str!("../fixtures/roll/config.json")).unwrap();
    config.exhaustive_qm = std::env::args().any(|a| a == "--exhaustive");

    let result = explore(&recipe, &catalog, &config).unwrap();
    print!("{}", write_exploration(&result, Format::Table));

    // loosen the RPN limit and the hard gripper family comes back
    config.rpn_threshold = 60;
    let relaxed = explore(&recipe, &catalog, &config).unwrap();
    println!("\nwith rpn threshold 60:");
    print!("{}", write_exploration(&relaxed, Format::Table));
}
