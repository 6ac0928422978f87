//! Temporal hold-out evaluation: score on the training window, rank, then
//! match the ranked tiers against shooting victims and suspects that appear
//! only after the cutoff. The roster baseline is evaluated side by side.
//!
//!     cargo run --example evaluate_holdout

use vipar::pipeline::{run_evaluate, RunConfig};
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

    let run = RunConfig::for_synth_dir(dir.path(), config.cutoff, dir.path().join("out"));
    let (artifacts, evaluation) = run_evaluate(&run)?;

    let table = std::fs::read_to_string(run.out_dir.join("evaluation_table.txt"))?;
    print!("{table}");

    if let Some(cmp) = &evaluation.victim_comparison {
        println!(
            "\nvictim hit rate: {} {:.1}% vs {} {:.1}% — ratio {:.2}",
            cmp.first_name, cmp.first_rate, cmp.second_name, cmp.second_rate, cmp.rate_ratio
        );
    }
    if let Some(cmp) = &evaluation.suspect_comparison {
        println!(
            "suspect hit rate: {} {:.1}% vs {} {:.1}% — ratio {:.2}",
            cmp.first_name, cmp.first_rate, cmp.second_name, cmp.second_rate, cmp.rate_ratio
        );
    }

    println!("\nreports written:");
    for file in &artifacts.files {
        println!("  {}", file.display());
    }
    Ok(())
}
