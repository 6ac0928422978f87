//! Score a whole population end to end and show the top of the ranked list
//! with its component split and fired rules.
//!
//!     cargo run --example score_population

use vipar::pipeline::{score_population, RunConfig};
use vipar::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let config = SynthConfig::small(42);
    generate(&config, dir.path())?;

    let run = RunConfig::for_synth_dir(dir.path(), config.cutoff, dir.path().join("out"));
    let population = score_population(&run)?;
    println!(
        "scored {} persons against {} rules",
        population.scores.len(),
        population.ruleset.rules.len()
    );

    let top = population.ranked_keys(10)?;
    println!(
        "\n{:<26} {:>5} {:>9} {:>11} {:>11} {:>7}",
        "person", "age", "personal", "positional", "structural", "total"
    );
    for key in &top {
        let id = population.index.by_key[key];
        let person = &population.persons[id.index()];
        let score = &population.scores[id.index()];
        println!(
            "{:<26} {:>5} {:>9.2} {:>11.2} {:>11.2} {:>7.2}",
            person.key.full_name,
            person
                .age_at_snapshot
                .map(|a| format!("{a:.1}"))
                .unwrap_or_else(|| "?".into()),
            score.personal,
            score.positional,
            score.structural,
            score.total
        );
    }

    let leader = population.index.by_key[&top[0]];
    let score = &population.scores[leader.index()];
    println!("\nrules fired for the top person:");
    for (rule_id, weight) in &score.fired_rules {
        println!("  {rule_id:<42} +{weight:.2}");
    }
    Ok(())
}
