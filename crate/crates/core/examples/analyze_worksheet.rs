//! PFMEA worksheets for the two roll processes: P tops out at RPN 100,
//! P' at 20.

use pfmea::report::{write_worksheet, Format};
use pfmea::{analyze_process, io};

fn main() {
    let catalog = io::parse_catalog(include_str!("../fixtures/roll/catalog.json")).unwrap();
    let recipe = io::parse_recipe(include_str!("../fixtures/roll/recipe.json")).unwrap();
    let config = io::parse_config(include_str!("../fixtures/roll/config.json")).unwrap();

    for doc in [
        include_str!("../fixtures/roll/process_p.json"),
        include_str!("../fixtures/roll/process_p_prime.json"),
    ] {
        let process = io::parse_process(doc).unwrap();
        let ws = analyze_process(&process, &recipe, &catalog, &config).unwrap();
        print!("{}", write_worksheet(&ws, Format::Table));
        let verdict = if ws.worst_rpn <= config.rpn_threshold { "ok" } else { "too risky" };
        println!(
            "worst RPN {} against threshold {}: {verdict}\n",
            ws.worst_rpn, config.rpn_threshold
        );
    }
}
