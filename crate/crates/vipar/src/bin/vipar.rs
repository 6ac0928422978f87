//! Batch pipeline driver: `synth | ingest | score | validate | evaluate`.
//!
//! Each command is a pure function of its input files and flags and writes
//! its artifacts into `--out`. Exit codes: 0 success, 1 data error, 2 usage
//! error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use vipar::pipeline::{run_evaluate, run_ingest, run_score, run_validate, RunConfig};
use vipar::synth::{generate, SynthConfig};

#[derive(Parser)]
#[command(
    name = "vipar",
    version,
    about = "Co-offending network scoring: build the network, score the population, validate the rules, evaluate ranked lists against future shootings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic corpus (six dataset files + ground truth)
    Synth(SynthArgs),
    /// Parse datasets, resolve identities, export the network for audit
    Ingest(RunArgs),
    /// Full scoring run: measures, group aggregates, VIPAR scores
    Score(RunArgs),
    /// Logistic-regression validation of the rule inputs
    Validate(RunArgs),
    /// Temporal hold-out evaluation of the score list vs the roster baseline
    Evaluate(RunArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Output directory for the generated corpus
    #[arg(long)]
    out: PathBuf,
    /// Seed for the deterministic generator
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Population size override
    #[arg(long)]
    persons: Option<usize>,
    /// Full generator config as TOML (overrides --seed/--persons)
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Directory holding arrests.csv, field_interviews.csv, offenses.csv,
    /// victimizations.csv
    #[arg(long)]
    events_dir: PathBuf,
    /// Chronic-offender roster CSV
    #[arg(long)]
    cirv: PathBuf,
    /// Fatal and non-fatal shootings CSV (spans past the cutoff)
    #[arg(long)]
    shootings: PathBuf,
    /// Ruleset TOML; the built-in default ships 21 rules
    #[arg(long)]
    ruleset: Option<PathBuf>,
    /// Date scores are computed "as of" (default: the cutoff)
    #[arg(long)]
    snapshot: Option<NaiveDate>,
    /// Training/hold-out boundary (training side inclusive)
    #[arg(long)]
    cutoff: NaiveDate,
    /// Look-back window for "recent" rule inputs, in days
    #[arg(long)]
    recency_days: Option<i64>,
    /// Simplified-PageRank threshold for the high-centrality-friend flag
    #[arg(long)]
    pr_threshold: Option<f64>,
    /// Output directory for artifacts
    #[arg(long)]
    out: PathBuf,
    /// Ranked list size for evaluation (default: roster size)
    #[arg(long)]
    top_n: Option<usize>,
    /// Ridge penalty for validation regressions
    #[arg(long, default_value_t = 0.0)]
    ridge: f64,
    /// Drop events before this date
    #[arg(long)]
    window_start: Option<NaiveDate>,
    /// Drop events after this date
    #[arg(long)]
    window_end: Option<NaiveDate>,
}

impl From<&RunArgs> for RunConfig {
    fn from(args: &RunArgs) -> RunConfig {
        RunConfig {
            events_dir: args.events_dir.clone(),
            cirv_path: args.cirv.clone(),
            shootings_path: args.shootings.clone(),
            ruleset_path: args.ruleset.clone(),
            cutoff: args.cutoff,
            snapshot: args.snapshot,
            recency_days: args.recency_days,
            pr_threshold: args.pr_threshold,
            out_dir: args.out.clone(),
            top_n: args.top_n,
            window_start: args.window_start,
            window_end: args.window_end,
            ridge: args.ridge,
        }
    }
}

fn run() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Synth(args) => {
            let mut config = match &args.config {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    toml::from_str::<SynthConfig>(&text)
                        .with_context(|| format!("cannot parse {}", path.display()))?
                }
                None => SynthConfig::default(),
            };
            if args.config.is_none() {
                config.seed = args.seed;
                if let Some(persons) = args.persons {
                    let scale = persons as f64 / config.n_persons as f64;
                    config.n_groups = ((config.n_groups as f64 * scale).round() as usize).max(1);
                    config.cirv_size = (config.cirv_size as f64 * scale).round() as usize;
                    config.cirv_active_size =
                        (config.cirv_active_size as f64 * scale).round() as usize;
                    config.n_persons = persons;
                }
            }
            let output = generate(&config, &args.out)?;
            let echo = args.out.join("synth_config.toml");
            std::fs::write(&echo, toml::to_string_pretty(&config)?)
                .with_context(|| format!("cannot write {}", echo.display()))?;
            println!(
                "generated {} persons, {} training events, {} shootings ({} hold-out victims, {} suspects)",
                config.n_persons,
                output.n_training_events,
                output.n_training_shootings + output.n_holdout_shootings,
                output.n_holdout_victims,
                output.n_holdout_suspects
            );
            for file in &output.files {
                println!("  {}", file.display());
            }
            Ok(())
        }
        Command::Ingest(args) => {
            let (artifacts, population) = run_ingest(&RunConfig::from(&args))?;
            println!(
                "resolved {} persons from {} training events; {} edges, {} groups, {} row errors",
                population.persons.len(),
                population.events.len(),
                population.graph.edge_count(),
                population.groups.len(),
                population.row_errors.len()
            );
            for file in &artifacts.files {
                println!("  {}", file.display());
            }
            Ok(())
        }
        Command::Score(args) => {
            let (artifacts, population) = run_score(&RunConfig::from(&args))?;
            let max = population
                .scores
                .iter()
                .map(|s| s.total)
                .fold(f64::MIN, f64::max);
            println!(
                "scored {} persons (max total {:.2})",
                population.scores.len(),
                max
            );
            for file in &artifacts.files {
                println!("  {}", file.display());
            }
            Ok(())
        }
        Command::Validate(args) => {
            let (artifacts, tables) = run_validate(&RunConfig::from(&args))?;
            for table in &tables {
                println!("{} regression:", table.category);
                println!(
                    "  {:<36} {:>9} {:>8} {:>8} {:>8}",
                    "predictor", "b", "se", "p", "exp(b)"
                );
                for row in &table.rows {
                    println!(
                        "  {:<36} {:>9.4} {:>8.4} {:>8.4} {:>8.4}",
                        row.predictor, row.b, row.se, row.p_value, row.exp_b
                    );
                }
                for (first, second, r, _) in &table.collinearity {
                    println!("  warning: {first} and {second} correlate at r={r:.3}");
                }
            }
            for file in &artifacts.files {
                println!("  {}", file.display());
            }
            Ok(())
        }
        Command::Evaluate(args) => {
            let (artifacts, run) = run_evaluate(&RunConfig::from(&args))?;
            if run.victim_reports.iter().all(|r| r.n_outcomes == 0)
                && run.suspect_reports.iter().all(|r| r.n_outcomes == 0)
            {
                eprintln!("warning: no shooting outcomes after the cutoff; reports are empty");
            }
            let table_path = args.out.join("evaluation_table.txt");
            if let Ok(table) = std::fs::read_to_string(&table_path) {
                print!("{table}");
            }
            if let Some(cmp) = &run.victim_comparison {
                println!(
                    "victims: {} {:.1}% vs {} {:.1}% (ratio {:.2})",
                    cmp.first_name, cmp.first_rate, cmp.second_name, cmp.second_rate, cmp.rate_ratio
                );
            }
            for file in &artifacts.files {
                println!("  {}", file.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
