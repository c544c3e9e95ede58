//! Parse the roll documents, validate them, then show what a typo and a
//! dangling reference look like.

use pfmea::io;
use pfmea::model::validate::{validate_catalog, validate_library, validate_recipe};
use pfmea::report::{write_validation, Format};

const LIBRARY: &str = include_str!("../fixtures/roll/library.json");
const CATALOG: &str = include_str!("../fixtures/roll/catalog.json");
const RECIPE: &str = include_str!("../fixtures/roll/recipe.json");

fn main() {
    let library = io::parse_library(LIBRARY).unwrap();
    let catalog = io::parse_catalog(CATALOG).unwrap();
    let recipe = io::parse_recipe(RECIPE).unwrap();

    let mut report = validate_library(&library);
    report.extend(validate_catalog(&catalog, &library, 5));
    report.extend(validate_recipe(&recipe, &library, 5));
    println!("roll documents:");
    print!("{}", write_validation(&report, Format::Table));

    // a misspelled field is rejected while parsing, with its location
    let typo = CATALOG.replacen("\"occurrence\"", "\"occurence\"", 1);
    match io::parse_catalog(&typo) {
        Ok(_) => println!("typo accepted?"),
        Err(e) => println!("\nmisspelled field:\n{e}"),
    }

    // a well-formed catalog can still point at things that do not exist
    let mut broken = catalog.clone();
    broken.equipment[0].services[0].fulfills = "teleport".into();
    println!("\nunknown service:");
    print!("{}", write_validation(&validate_catalog(&broken, &library, 5), Format::Table));
}
