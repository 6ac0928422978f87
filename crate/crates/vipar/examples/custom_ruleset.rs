//! Edit rule weights without recompiling: dump the default ruleset as TOML,
//! modify it, and rescore with both versions.
//!
//!     cargo run --example custom_ruleset

use vipar::pipeline::{score_population, RunConfig};
use vipar::rules::{RuleKind, RuleSet};
use vipar::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let config = SynthConfig::small(42);
    generate(&config, dir.path())?;

    // the shipped configuration: 21 rules in three categories
    let default_path = dir.path().join("ruleset.toml");
    let ruleset = RuleSet::default();
    ruleset.save(&default_path)?;
    println!(
        "default ruleset: {} rules, recency window {} days, threshold {}",
        ruleset.rules.len(),
        ruleset.recency_window_days,
        ruleset.pr_threshold
    );
    let text = std::fs::read_to_string(&default_path)?;
    let firearm_block: String = text
        .lines()
        .skip_while(|l| !l.contains("recent_firearm_crime"))
        .take(4)
        .map(|l| format!("  {l}\n"))
        .collect();
    println!("\nexcerpt of {}:\n{firearm_block}", default_path.display());

    // double the recent-firearm weight and shorten the recency window
    let mut custom = ruleset.clone();
    custom.recency_window_days = 180;
    for rule in &mut custom.rules {
        if rule.id == "recent_firearm_crime" {
            if let RuleKind::Flag { weight, .. } = &mut rule.kind {
                *weight = 3.0;
            }
        }
    }
    let custom_path = dir.path().join("ruleset_custom.toml");
    custom.save(&custom_path)?;

    let base_run = RunConfig::for_synth_dir(dir.path(), config.cutoff, dir.path().join("a"));
    let custom_run = RunConfig {
        ruleset_path: Some(custom_path),
        ..RunConfig::for_synth_dir(dir.path(), config.cutoff, dir.path().join("b"))
    };
    let base = score_population(&base_run)?;
    let modified = score_population(&custom_run)?;

    let moved = base
        .scores
        .iter()
        .zip(&modified.scores)
        .filter(|(a, b)| a.total != b.total)
        .count();
    println!(
        "rescoring with the custom ruleset changed {moved} of {} totals",
        base.scores.len()
    );

    let top_base = base.ranked_keys(20)?;
    let top_custom = modified.ranked_keys(20)?;
    let overlap = top_base.iter().filter(|k| top_custom.contains(k)).count();
    println!("top-20 overlap between the two rulesets: {overlap}/20");
    Ok(())
}
