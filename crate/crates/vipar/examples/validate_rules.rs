//! Validate the rule inputs with logistic regressions against the hold-out
//! shooting outcomes, one regression per rule category, plus a pairwise
//! collinearity screen.
//!
//!     cargo run --example validate_rules

use vipar::pipeline::{run_validate, RunConfig};
use vipar::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let config = SynthConfig {
        n_persons: 4_000,
        n_groups: 500,
        cirv_size: 1_286,
        cirv_active_size: 552,
        ..SynthConfig::small(42)
    };
    generate(&config, dir.path())?;

    let run = RunConfig {
        // rare dummies can quasi-separate; a light ridge keeps fits finite
        ridge: 0.01,
        ..RunConfig::for_synth_dir(dir.path(), config.cutoff, dir.path().join("out"))
    };
    let (artifacts, tables) = run_validate(&run)?;

    for table in &tables {
        println!("{} variables vs future shooting victimization:", table.category);
        println!(
            "  {:<36} {:>9} {:>8} {:>8} {:>8}",
            "predictor", "b", "se", "p", "exp(b)"
        );
        for row in &table.rows {
            println!(
                "  {:<36} {:>9.3} {:>8.3} {:>8.3} {:>8.3}",
                row.predictor, row.b, row.se, row.p_value, row.exp_b
            );
        }
        if table.collinearity.is_empty() {
            println!("  no collinearity warnings");
        }
        for (first, second, r, _) in &table.collinearity {
            println!("  warning: {first} ~ {second}, r = {r:.3}");
        }
        println!();
    }

    println!("reports written:");
    for file in &artifacts.files {
        println!("  {}", file.display());
    }
    Ok(())
}
