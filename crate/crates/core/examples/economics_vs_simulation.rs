//! Analytic scrap rates and cost per accepted part for P', checked against
//! a seeded Monte Carlo run.

use pfmea::economics::economic_report;
use pfmea::montecarlo::{compare_with_analytic, simulate};
use pfmea::report::{write_simulation, Format};
use pfmea::{analyze_process, io};

fn main() {
    let catalog = io::parse_catalog(include_str!("../fixtures/roll/catalog.json")).unwrap();
    let recipe = io::parse_recipe(include_str!("../fixtures/roll/recipe.json")).unwrap();
    let config = io::parse_config(include_str!("../fixtures/roll/config.json")).unwrap();
    let process = io::parse_process(include_str!("../fixtures/roll/process_p_prime.json")).unwrap();

    let ws = analyze_process(&process, &recipe, &catalog, &config).unwrap();
    let econ = economic_report(&process, &ws, &recipe, &catalog, &config).unwrap();
    println!("attempt cost       {:.2}", econ.attempt_cost);
    println!("rejection rate     {:.6}", econ.rejection_rate);
    println!("escape rate        {:.6}", econ.escape_rate);
    let budget = recipe.budget.map_or("none".to_string(), |b| format!("{b:.2}"));
    println!("cost per accepted  {:.4} (budget {budget})", econ.expected_cost_per_accepted);
    println!();

    let stats = simulate(&process, &ws, &catalog, &config, 1_000_000, 42).unwrap();
    let cmp = compare_with_analytic(&stats, &econ);
    print!("{}", write_simulation(&process.id, &stats, &cmp, Format::Table));

    // a wrong analytic model shows up immediately
    let mut wrong = econ.clone();
    wrong.rejection_rate *= 2.0;
    let flagged = compare_with_analytic(&stats, &wrong).flagged();
    println!("\ndoubled rejection rate flagged: {flagged}");
}
