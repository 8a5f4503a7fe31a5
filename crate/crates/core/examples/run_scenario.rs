//! Runs a scenario from a JSON config, as the command-line runner does.
//!
//! cargo run --example run_scenario -- configs/update_bound.json out/update-bound

use std::path::PathBuf;

use predgain::experiment::{run_scenario, ScenarioConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let config = PathBuf::from(
        args.next()
            .unwrap_or_else(|| "configs/update_bound.json".into()),
    );
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/example".into()));
    let config = match ScenarioConfig::load(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    match run_scenario(&config, &out) {
        Ok(summary) => {
            for report in &summary.reports {
                for e in &report.entries {
                    println!("{:<32} {:>14.6e} {}", e.quantity, e.value, e.units);
                }
            }
            println!("wrote {} files to {}", summary.files.len(), out.display());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    }
}
