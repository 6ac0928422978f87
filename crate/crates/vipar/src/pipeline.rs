//! End-to-end orchestration: parse datasets, resolve identities, build the
//! network, score everyone, validate rule inputs, and evaluate ranked lists
//! against the hold-out.
//!
//! Every run is a pure function of its input files and flags; artifacts are
//! written in deterministic order so reruns are byte-identical. The
//! effective configuration is echoed into the output directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{
    compare_lists, format_report_table, match_and_rate, shooting_outcomes, temporal_split,
    write_reports, EvaluationReport, ListComparison, OutcomeSets, Tier,
};
use crate::ingest::{
    apply_cirv, load_cirv, parse_events, person_record, resolve_persons, within_window,
    EventRecord, EventType, Person, PersonIndex, PersonKey, RowError, PERSON_RECORD_HEADER,
};
use crate::measures::{
    cirv_roster, compute_person_measures, group_aggregates, person_histories, shooting_roster,
    write_group_measures, write_person_measures, GroupMeasures, PagerankOptions, PersonHistory,
    PersonMeasures, RecencyWindow,
};
use crate::network::{
    build_graph, components, group_assignment, write_components, write_edge_list,
    CoOffendingGraph, Group,
};
use crate::rules::{rank, score_person, write_scores, RuleSet, ViparScore};
use crate::stats::{collinearity_screen, logit_fit, CollinearityLevel, LogitFit};

/// One run's inputs and tunables. Optional fields fall back to the ruleset
/// (recency, threshold) or to the cutoff (snapshot).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub events_dir: PathBuf,
    pub cirv_path: PathBuf,
    pub shootings_path: PathBuf,
    pub ruleset_path: Option<PathBuf>,
    pub cutoff: NaiveDate,
    pub snapshot: Option<NaiveDate>,
    pub recency_days: Option<i64>,
    pub pr_threshold: Option<f64>,
    pub out_dir: PathBuf,
    pub top_n: Option<usize>,
    pub window_start: Option<NaiveDate>,
    pub window_end: Option<NaiveDate>,
    /// Ridge penalty for the validation regressions; zero by default.
    pub ridge: f64,
}

impl RunConfig {
    pub fn new(
        events_dir: impl Into<PathBuf>,
        cirv_path: impl Into<PathBuf>,
        shootings_path: impl Into<PathBuf>,
        cutoff: NaiveDate,
        out_dir: impl Into<PathBuf>,
    ) -> RunConfig {
        RunConfig {
            events_dir: events_dir.into(),
            cirv_path: cirv_path.into(),
            shootings_path: shootings_path.into(),
            ruleset_path: None,
            cutoff,
            snapshot: None,
            recency_days: None,
            pr_threshold: None,
            out_dir: out_dir.into(),
            top_n: None,
            window_start: None,
            window_end: None,
            ridge: 0.0,
        }
    }

    /// Points at a directory laid out by the synthetic generator.
    pub fn for_synth_dir(dir: &Path, cutoff: NaiveDate, out_dir: impl Into<PathBuf>) -> RunConfig {
        RunConfig::new(
            dir,
            dir.join("cirv.csv"),
            dir.join("shootings.csv"),
            cutoff,
            out_dir,
        )
    }

    fn resolve_ruleset(&self) -> Result<RuleSet> {
        let mut ruleset = match &self.ruleset_path {
            Some(path) => RuleSet::load(path)?,
            None => RuleSet::default(),
        };
        if let Some(days) = self.recency_days {
            ruleset.recency_window_days = days;
        }
        if let Some(threshold) = self.pr_threshold {
            ruleset.pr_threshold = threshold;
        }
        Ok(ruleset)
    }
}

/// Everything derivable from the training window.
pub struct ScoredPopulation {
    pub events: Vec<EventRecord>,
    pub persons: Vec<Person>,
    pub index: PersonIndex,
    pub graph: CoOffendingGraph,
    pub groups: Vec<Group>,
    pub group_of: Vec<usize>,
    pub person_measures: Vec<PersonMeasures>,
    pub histories: Vec<PersonHistory>,
    pub group_measures: Vec<GroupMeasures>,
    pub scores: Vec<ViparScore>,
    pub outcomes: OutcomeSets,
    pub cirv_entries: Vec<(PersonKey, bool)>,
    pub ruleset: RuleSet,
    pub snapshot: NaiveDate,
    pub row_errors: Vec<(String, RowError)>,
    pub dropped_out_of_window: usize,
}

impl ScoredPopulation {
    /// Keys of the top-`n` ranked persons.
    pub fn ranked_keys(&self, n: usize) -> Result<Vec<PersonKey>> {
        let ids = rank(&self.scores, n)?;
        Ok(ids
            .into_iter()
            .map(|id| self.persons[id.index()].key.clone())
            .collect())
    }
}

/// Runs the full scoring pipeline in memory.
pub fn score_population(config: &RunConfig) -> Result<ScoredPopulation> {
    let ruleset = config.resolve_ruleset()?;
    ruleset.validate()?;
    let snapshot = config.snapshot.unwrap_or(config.cutoff);

    // six input files: four event datasets, shootings, roster
    let mut all_events: Vec<EventRecord> = Vec::new();
    let mut row_errors: Vec<(String, RowError)> = Vec::new();
    let mut dropped = 0usize;
    let training_types = [
        EventType::Arrest,
        EventType::FieldInterview,
        EventType::Offense,
        EventType::Victimization,
    ];
    for event_type in training_types {
        let path = config.events_dir.join(event_type.file_name());
        let outcome = parse_events(&path, event_type)?;
        let file = event_type.file_name().to_string();
        row_errors.extend(outcome.row_errors.into_iter().map(|e| (file.clone(), e)));
        for event in outcome.events {
            if within_window(event.date, config.window_start, config.window_end) {
                all_events.push(event);
            } else {
                dropped += 1;
            }
        }
    }
    let shootings = parse_events(&config.shootings_path, EventType::Shooting)?;
    row_errors.extend(
        shootings
            .row_errors
            .into_iter()
            .map(|e| ("shootings.csv".to_string(), e)),
    );
    for event in shootings.events {
        if within_window(event.date, config.window_start, config.window_end) {
            all_events.push(event);
        } else {
            dropped += 1;
        }
    }

    let split = temporal_split(all_events, config.cutoff);
    let outcomes = shooting_outcomes(&split.holdout_shootings);
    let events = split.training;

    let (mut persons, index) = resolve_persons(&events, snapshot);
    let cirv = load_cirv(&config.cirv_path)?;
    row_errors.extend(
        cirv.row_errors
            .iter()
            .cloned()
            .map(|e| ("cirv.csv".to_string(), e)),
    );
    apply_cirv(&mut persons, &index, &cirv.entries);

    let graph = build_graph(&events, &index, persons.len());
    let groups = components(&graph);
    let group_of = group_assignment(&groups, persons.len());

    let cirv_mask = cirv_roster(&persons);
    let shooting_mask = shooting_roster(&events, &index, persons.len());
    let person_measures = compute_person_measures(
        &graph,
        &cirv_mask,
        &shooting_mask,
        ruleset.pr_threshold,
        PagerankOptions::default(),
    )?;
    let window = RecencyWindow::new(snapshot, ruleset.recency_window_days);
    let histories = person_histories(&persons, &events, &window);
    let group_measures = group_aggregates(&groups, &events, &index, &group_of, &window);

    let scores: Vec<ViparScore> = persons
        .iter()
        .map(|person| {
            let i = person.person_id.index();
            score_person(
                person,
                &person_measures[i],
                &histories[i],
                &group_measures[group_of[i]],
                &ruleset,
            )
        })
        .collect();

    Ok(ScoredPopulation {
        events,
        persons,
        index,
        graph,
        groups,
        group_of,
        person_measures,
        histories,
        group_measures,
        scores,
        outcomes,
        cirv_entries: cirv.entries,
        ruleset,
        snapshot,
        row_errors,
        dropped_out_of_window: dropped,
    })
}

#[derive(Debug, Serialize)]
struct ConfigEcho {
    events_dir: String,
    cirv_path: String,
    shootings_path: String,
    ruleset_path: Option<String>,
    cutoff: NaiveDate,
    snapshot: NaiveDate,
    recency_window_days: i64,
    pr_threshold: f64,
    top_n: Option<usize>,
    window_start: Option<NaiveDate>,
    window_end: Option<NaiveDate>,
}

fn echo_config(config: &RunConfig, population: &ScoredPopulation) -> Result<PathBuf> {
    let echo = ConfigEcho {
        events_dir: config.events_dir.display().to_string(),
        cirv_path: config.cirv_path.display().to_string(),
        shootings_path: config.shootings_path.display().to_string(),
        ruleset_path: config.ruleset_path.as_ref().map(|p| p.display().to_string()),
        cutoff: config.cutoff,
        snapshot: population.snapshot,
        recency_window_days: population.ruleset.recency_window_days,
        pr_threshold: population.ruleset.pr_threshold,
        top_n: config.top_n,
        window_start: config.window_start,
        window_end: config.window_end,
    };
    let path = config.out_dir.join("config.toml");
    let text = toml::to_string_pretty(&echo).map_err(|e| Error::Pipeline(e.to_string()))?;
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn write_row_errors(path: &Path, row_errors: &[(String, RowError)]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record(["file", "row", "message"])
        .map_err(|e| Error::csv(path, e))?;
    for (file, e) in row_errors {
        writer
            .write_record([file.as_str(), &e.row.to_string(), &e.message])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn write_persons(path: &Path, persons: &[Person]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record(PERSON_RECORD_HEADER)
        .map_err(|e| Error::csv(path, e))?;
    for person in persons {
        writer
            .write_record(person_record(person))
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Paths written by a command.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub files: Vec<PathBuf>,
}

fn ensure_out_dir(config: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&config.out_dir).map_err(|e| Error::io(&config.out_dir, e))
}

/// `ingest` command: parse, resolve, and export the network for audit.
pub fn run_ingest(config: &RunConfig) -> Result<(Artifacts, ScoredPopulation)> {
    ensure_out_dir(config)?;
    let population = score_population(config)?;
    let mut artifacts = Artifacts::default();

    let persons_path = config.out_dir.join("persons.csv");
    write_persons(&persons_path, &population.persons)?;
    artifacts.files.push(persons_path);

    let edges_path = config.out_dir.join("edges.csv");
    write_edge_list(&edges_path, &population.graph)?;
    artifacts.files.push(edges_path);

    let components_path = config.out_dir.join("components.csv");
    write_components(&components_path, &population.groups)?;
    artifacts.files.push(components_path);

    let errors_path = config.out_dir.join("row_errors.csv");
    write_row_errors(&errors_path, &population.row_errors)?;
    artifacts.files.push(errors_path);

    artifacts.files.push(echo_config(config, &population)?);
    Ok((artifacts, population))
}

/// `score` command: everything `ingest` writes plus measures and scores.
pub fn run_score(config: &RunConfig) -> Result<(Artifacts, ScoredPopulation)> {
    let (mut artifacts, population) = run_ingest(config)?;

    let scores_path = config.out_dir.join("scores.csv");
    write_scores(&scores_path, &population.persons, &population.scores)?;
    artifacts.files.push(scores_path);

    let measures_path = config.out_dir.join("person_measures.csv");
    write_person_measures(&measures_path, &population.person_measures)?;
    artifacts.files.push(measures_path);

    let group_path = config.out_dir.join("group_measures.csv");
    write_group_measures(&group_path, &population.groups, &population.group_measures)?;
    artifacts.files.push(group_path);

    let ruleset_path = config.out_dir.join("ruleset.toml");
    population.ruleset.save(&ruleset_path)?;
    artifacts.files.push(ruleset_path);

    Ok((artifacts, population))
}

/// One row of a regression report.
#[derive(Debug, Clone, Serialize)]
pub struct RegressionRow {
    pub predictor: String,
    pub b: f64,
    pub se: f64,
    pub p_value: f64,
    pub exp_b: f64,
}

/// One regression table plus its collinearity findings.
#[derive(Debug)]
pub struct ValidationTable {
    pub category: String,
    pub rows: Vec<RegressionRow>,
    pub fit: LogitFit,
    pub collinearity: Vec<(String, String, f64, CollinearityLevel)>,
}

fn regression_rows(names: &[&str], fit: &LogitFit) -> Vec<RegressionRow> {
    let mut rows = vec![RegressionRow {
        predictor: "intercept".to_string(),
        b: fit.coefficients[0],
        se: fit.std_errors[0],
        p_value: fit.p_values[0],
        exp_b: fit.odds_ratios[0],
    }];
    for (j, name) in names.iter().enumerate() {
        rows.push(RegressionRow {
            predictor: name.to_string(),
            b: fit.coefficients[j + 1],
            se: fit.std_errors[j + 1],
            p_value: fit.p_values[j + 1],
            exp_b: fit.odds_ratios[j + 1],
        });
    }
    rows
}

fn validation_table(
    category: &str,
    names: &[&str],
    columns: &[Vec<f64>],
    outcome: &[bool],
    ridge: f64,
) -> Result<ValidationTable> {
    let fit = logit_fit(columns, outcome, ridge)?;
    let rows = regression_rows(names, &fit);
    let collinearity = collinearity_screen(columns)
        .into_iter()
        .map(|f| (names[f.first].to_string(), names[f.second].to_string(), f.r, f.level))
        .collect();
    Ok(ValidationTable {
        category: category.to_string(),
        rows,
        fit,
        collinearity,
    })
}

fn write_validation_table(path: &Path, table: &ValidationTable) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record(["predictor", "b", "se", "p_value", "exp_b"])
        .map_err(|e| Error::csv(path, e))?;
    for row in &table.rows {
        writer
            .write_record([
                row.predictor.clone(),
                format!("{:.4}", row.b),
                format!("{:.4}", row.se),
                format!("{:.4}", row.p_value),
                format!("{:.4}", row.exp_b),
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Builds the hold-out outcome vector: did this person appear as a victim in
/// a post-cutoff shooting?
pub fn victim_outcome_vector(population: &ScoredPopulation) -> Vec<bool> {
    let victim_keys: BTreeSet<&PersonKey> = population
        .outcomes
        .victims
        .iter()
        .filter(|k| k.dob.is_some())
        .collect();
    population
        .persons
        .iter()
        .map(|p| p.key.dob.is_some() && victim_keys.contains(&p.key))
        .collect()
}

/// `validate` command: one logistic regression per rule category, mirroring
/// the variables the weights were judged against.
pub fn run_validate(config: &RunConfig) -> Result<(Artifacts, Vec<ValidationTable>)> {
    ensure_out_dir(config)?;
    let population = score_population(config)?;
    let outcome = victim_outcome_vector(&population);

    // regression sample: persons with a known age (dob present)
    let usable: Vec<usize> = population
        .persons
        .iter()
        .enumerate()
        .filter(|(_, p)| p.age_at_snapshot.is_some())
        .map(|(i, _)| i)
        .collect();
    let outcome: Vec<bool> = usable.iter().map(|&i| outcome[i]).collect();
    let b = |v: bool| if v { 1.0 } else { 0.0 };

    let personal_names = [
        "age",
        "cirv_member",
        "recent_misdemeanor_ge2",
        "misdemeanor_ge3",
        "recent_firearm_incident",
    ];
    let personal_columns: Vec<Vec<f64>> = vec![
        usable
            .iter()
            .map(|&i| population.persons[i].age_at_snapshot.unwrap_or_default())
            .collect(),
        usable
            .iter()
            .map(|&i| b(population.persons[i].cirv_status.is_member()))
            .collect(),
        usable
            .iter()
            .map(|&i| b(population.histories[i].recent_misdemeanors_committed >= 2))
            .collect(),
        usable
            .iter()
            .map(|&i| b(population.histories[i].misdemeanors_committed >= 3))
            .collect(),
        usable
            .iter()
            .map(|&i| b(population.histories[i].recent_firearm_incident))
            .collect(),
    ];

    let positional_names = [
        "pagerank",
        "high_pr_friend_d1",
        "cirv_friend_d1",
        "cirv_friend_d2",
        "cirv_friend_d3",
        "shooting_friend_d1",
        "shooting_friend_d2",
    ];
    let m = &population.person_measures;
    let positional_columns: Vec<Vec<f64>> = vec![
        usable.iter().map(|&i| m[i].simplified_pagerank).collect(),
        usable.iter().map(|&i| b(m[i].high_pr_friend_d1)).collect(),
        usable.iter().map(|&i| b(m[i].cirv_friend_d1)).collect(),
        usable.iter().map(|&i| b(m[i].cirv_friend_d2)).collect(),
        usable.iter().map(|&i| b(m[i].cirv_friend_d3)).collect(),
        usable.iter().map(|&i| b(m[i].shooting_friend_d1)).collect(),
        usable.iter().map(|&i| b(m[i].shooting_friend_d2)).collect(),
    ];

    let structural_names = [
        "group_violent_crimes_gt3",
        "group_violent_victimizations_gt3",
        "group_shootings_gt3",
        "group_members_gt20",
    ];
    let gm = |i: usize| &population.group_measures[population.group_of[i]];
    let structural_columns: Vec<Vec<f64>> = vec![
        usable.iter().map(|&i| b(gm(i).violent_crime_count > 3)).collect(),
        usable
            .iter()
            .map(|&i| b(gm(i).violent_victimization_count > 3))
            .collect(),
        usable.iter().map(|&i| b(gm(i).shooting_count > 3)).collect(),
        usable.iter().map(|&i| b(gm(i).member_count > 20)).collect(),
    ];

    let tables = vec![
        validation_table("personal", &personal_names, &personal_columns, &outcome, config.ridge)?,
        validation_table("positional", &positional_names, &positional_columns, &outcome, config.ridge)?,
        validation_table("structural", &structural_names, &structural_columns, &outcome, config.ridge)?,
    ];

    let mut artifacts = Artifacts::default();
    for table in &tables {
        let path = config
            .out_dir
            .join(format!("validation_{}.csv", table.category));
        write_validation_table(&path, table)?;
        artifacts.files.push(path);
    }

    let collinearity_path = config.out_dir.join("collinearity.csv");
    {
        let mut writer =
            csv::Writer::from_path(&collinearity_path).map_err(|e| Error::csv(&collinearity_path, e))?;
        writer
            .write_record(["category", "first", "second", "r", "level"])
            .map_err(|e| Error::csv(&collinearity_path, e))?;
        for table in &tables {
            for (first, second, r, level) in &table.collinearity {
                writer
                    .write_record([
                        table.category.as_str(),
                        first,
                        second,
                        &format!("{r:.4}"),
                        match level {
                            CollinearityLevel::Moderate => "moderate",
                            CollinearityLevel::Severe => "severe",
                        },
                    ])
                    .map_err(|e| Error::csv(&collinearity_path, e))?;
            }
        }
        writer
            .flush()
            .map_err(|e| Error::io(&collinearity_path, e))?;
    }
    artifacts.files.push(collinearity_path);
    artifacts.files.push(echo_config(config, &population)?);

    Ok((artifacts, tables))
}

/// Evaluation results for both lists against both outcome sets.
#[derive(Debug)]
pub struct EvaluationRun {
    pub victim_reports: Vec<EvaluationReport>,
    pub suspect_reports: Vec<EvaluationReport>,
    pub victim_comparison: Option<ListComparison>,
    pub suspect_comparison: Option<ListComparison>,
}

fn tiered_reports(
    list_name: &str,
    active: &[PersonKey],
    non_active: &[PersonKey],
    outcomes: &[PersonKey],
) -> Vec<EvaluationReport> {
    let combined: Vec<PersonKey> = active.iter().chain(non_active.iter()).cloned().collect();
    vec![
        match_and_rate(list_name, Tier::Active, active, outcomes),
        match_and_rate(list_name, Tier::NonActive, non_active, outcomes),
        match_and_rate(list_name, Tier::Combined, &combined, outcomes),
    ]
}

/// `evaluate` command: VIPAR list vs the roster baseline on hold-out
/// victims and suspects. VIPAR tier sizes mirror the roster tiers so the
/// comparison is size-matched.
pub fn run_evaluate(config: &RunConfig) -> Result<(Artifacts, EvaluationRun)> {
    ensure_out_dir(config)?;
    let population = score_population(config)?;

    let cirv_active: Vec<PersonKey> = population
        .cirv_entries
        .iter()
        .filter(|(_, active)| *active)
        .map(|(k, _)| k.clone())
        .collect();
    let cirv_non_active: Vec<PersonKey> = population
        .cirv_entries
        .iter()
        .filter(|(_, active)| !*active)
        .map(|(k, _)| k.clone())
        .collect();

    let total = config
        .top_n
        .unwrap_or(cirv_active.len() + cirv_non_active.len())
        .min(population.scores.len());
    let active_size = cirv_active.len().min(total);
    let ranked = population.ranked_keys(total.max(1))?;
    let vipar_active = &ranked[..active_size];
    let vipar_non_active = &ranked[active_size..];

    let mut victim_reports =
        tiered_reports("vipar", vipar_active, vipar_non_active, &population.outcomes.victims);
    victim_reports.extend(tiered_reports(
        "cirv",
        &cirv_active,
        &cirv_non_active,
        &population.outcomes.victims,
    ));
    let mut suspect_reports =
        tiered_reports("vipar", vipar_active, vipar_non_active, &population.outcomes.suspects);
    suspect_reports.extend(tiered_reports(
        "cirv",
        &cirv_active,
        &cirv_non_active,
        &population.outcomes.suspects,
    ));

    let victim_comparison = compare_lists(&victim_reports[2], &victim_reports[5]).ok();
    let suspect_comparison = compare_lists(&suspect_reports[2], &suspect_reports[5]).ok();

    let mut artifacts = Artifacts::default();
    let victims_path = config.out_dir.join("evaluation_victims.csv");
    write_reports(&victims_path, &victim_reports)?;
    artifacts.files.push(victims_path);
    let suspects_path = config.out_dir.join("evaluation_suspects.csv");
    write_reports(&suspects_path, &suspect_reports)?;
    artifacts.files.push(suspects_path);

    let table_path = config.out_dir.join("evaluation_table.txt");
    let mut table = format_report_table(
        &format!("hold-out victims (n={})", victim_reports[0].n_outcomes),
        &victim_reports,
    );
    table.push('\n');
    table.push_str(&format_report_table(
        &format!("hold-out suspects (n={})", suspect_reports[0].n_outcomes),
        &suspect_reports,
    ));
    if let Some(cmp) = &victim_comparison {
        table.push_str(&format!(
            "\nvictim rate ratio ({} / {}): {:.2}\n",
            cmp.first_name, cmp.second_name, cmp.rate_ratio
        ));
    }
    std::fs::write(&table_path, &table).map_err(|e| Error::io(&table_path, e))?;
    artifacts.files.push(table_path);

    let summary_path = config.out_dir.join("evaluation_summary.toml");
    write_summary(&summary_path, &victim_reports, &suspect_reports, &victim_comparison, &suspect_comparison)?;
    artifacts.files.push(summary_path);
    artifacts.files.push(echo_config(config, &population)?);

    Ok((
        artifacts,
        EvaluationRun {
            victim_reports,
            suspect_reports,
            victim_comparison,
            suspect_comparison,
        },
    ))
}

#[derive(Debug, Serialize)]
struct SummaryReport {
    list_name: String,
    tier: String,
    n_list: usize,
    n_outcomes: usize,
    n_hits: usize,
    excluded_no_dob: usize,
    hit_rate_percent: f64,
}

#[derive(Debug, Serialize)]
struct SummaryComparison {
    first: String,
    second: String,
    first_rate: f64,
    second_rate: f64,
    rate_ratio: f64,
}

#[derive(Debug, Serialize)]
struct SummaryDoc {
    victims: Vec<SummaryReport>,
    suspects: Vec<SummaryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    victim_comparison: Option<SummaryComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suspect_comparison: Option<SummaryComparison>,
}

fn summary_report(r: &EvaluationReport) -> SummaryReport {
    SummaryReport {
        list_name: r.list_name.clone(),
        tier: r.tier.as_str().to_string(),
        n_list: r.n_list,
        n_outcomes: r.n_outcomes,
        n_hits: r.n_hits,
        excluded_no_dob: r.excluded_no_dob,
        hit_rate_percent: r.hit_rate_percent,
    }
}

fn write_summary(
    path: &Path,
    victims: &[EvaluationReport],
    suspects: &[EvaluationReport],
    victim_comparison: &Option<ListComparison>,
    suspect_comparison: &Option<ListComparison>,
) -> Result<()> {
    let doc = SummaryDoc {
        victims: victims.iter().map(summary_report).collect(),
        suspects: suspects.iter().map(summary_report).collect(),
        victim_comparison: victim_comparison.as_ref().map(|c| SummaryComparison {
            first: c.first_name.clone(),
            second: c.second_name.clone(),
            first_rate: c.first_rate,
            second_rate: c.second_rate,
            rate_ratio: c.rate_ratio,
        }),
        suspect_comparison: suspect_comparison.as_ref().map(|c| SummaryComparison {
            first: c.first_name.clone(),
            second: c.second_name.clone(),
            first_rate: c.first_rate,
            second_rate: c.second_rate,
            rate_ratio: c.rate_ratio,
        }),
    };
    let text = toml::to_string_pretty(&doc).map_err(|e| Error::Pipeline(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, SynthConfig};

    fn small_setup() -> (tempfile::TempDir, tempfile::TempDir, RunConfig, SynthConfig) {
        let data_dir = tempfile::tempdir().unwrap();
        let out_dir = tempfile::tempdir().unwrap();
        let synth = SynthConfig::small(17);
        generate(&synth, data_dir.path()).unwrap();
        let config = RunConfig::for_synth_dir(data_dir.path(), synth.cutoff, out_dir.path());
        (data_dir, out_dir, config, synth)
    }

    #[test]
    fn score_pipeline_produces_one_score_per_person() {
        let (_d, _o, config, _s) = small_setup();
        let (artifacts, population) = run_score(&config).unwrap();
        assert_eq!(population.scores.len(), population.persons.len());
        assert!(population.persons.len() > 500);
        assert!(artifacts.files.iter().any(|f| f.ends_with("scores.csv")));
        assert!(population.row_errors.is_empty());
        // every total is the sum of its components
        for score in &population.scores {
            assert_eq!(score.total, score.personal + score.positional + score.structural);
        }
    }

    #[test]
    fn score_outputs_are_deterministic() {
        let data_dir = tempfile::tempdir().unwrap();
        let synth = SynthConfig::small(19);
        generate(&synth, data_dir.path()).unwrap();

        let out_a = tempfile::tempdir().unwrap();
        let out_b = tempfile::tempdir().unwrap();
        let config_a = RunConfig::for_synth_dir(data_dir.path(), synth.cutoff, out_a.path());
        let config_b = RunConfig::for_synth_dir(data_dir.path(), synth.cutoff, out_b.path());
        let (artifacts_a, _) = run_score(&config_a).unwrap();
        let (artifacts_b, _) = run_score(&config_b).unwrap();
        for (a, b) in artifacts_a.files.iter().zip(&artifacts_b.files) {
            if a.ends_with("config.toml") {
                continue; // echoes the differing out paths
            }
            assert_eq!(
                std::fs::read(a).unwrap(),
                std::fs::read(b).unwrap(),
                "{} differs",
                a.display()
            );
        }
    }

    #[test]
    fn validate_emits_three_tables_with_intercepts() {
        let (_d, _o, mut config, _s) = small_setup();
        // small samples quasi-separate on rare dummies; a light ridge keeps
        // the fit finite
        config.ridge = 0.05;
        let (artifacts, tables) = run_validate(&config).unwrap();
        assert_eq!(tables.len(), 3);
        for table in &tables {
            assert_eq!(table.rows[0].predictor, "intercept");
            for row in &table.rows {
                assert!((row.exp_b - row.b.exp()).abs() < 1e-9);
                assert!((0.0..=1.0).contains(&row.p_value));
            }
            assert!(table.fit.converged);
        }
        assert_eq!(
            artifacts
                .files
                .iter()
                .filter(|f| f.to_string_lossy().contains("validation_"))
                .count(),
            3
        );
    }

    #[test]
    fn evaluate_produces_tiered_reports_and_comparison() {
        let (_d, _o, config, synth) = small_setup();
        let (artifacts, run) = run_evaluate(&config).unwrap();
        assert_eq!(run.victim_reports.len(), 6);
        assert_eq!(run.suspect_reports.len(), 6);
        let vipar_combined = &run.victim_reports[2];
        assert_eq!(vipar_combined.list_name, "vipar");
        assert_eq!(vipar_combined.tier, Tier::Combined);
        assert_eq!(vipar_combined.n_list, synth.cirv_size);
        assert!(run.victim_comparison.is_some());
        assert!(artifacts
            .files
            .iter()
            .any(|f| f.ends_with("evaluation_summary.toml")));
    }

    #[test]
    fn vipar_outranks_random_on_planted_signal() {
        let (_d, _o, config, _s) = small_setup();
        let population = score_population(&config).unwrap();
        let n = 150.min(population.scores.len());
        let top = population.ranked_keys(n).unwrap();
        let top_report = match_and_rate("vipar", Tier::Combined, &top, &population.outcomes.victims);

        // size-matched random list: expected hit rate is n / population
        let expected_random = n as f64 / population.persons.len() as f64 * 100.0;
        assert!(
            top_report.hit_rate_percent > 2.0 * expected_random,
            "top-{n} rate {} vs random {expected_random:.1}",
            top_report.hit_rate_percent
        );
    }

    #[test]
    fn missing_dataset_is_a_fatal_error() {
        let out_dir = tempfile::tempdir().unwrap();
        let config = RunConfig::new(
            "/nonexistent",
            "/nonexistent/cirv.csv",
            "/nonexistent/shootings.csv",
            NaiveDate::from_ymd_opt(2014, 12, 31).unwrap(),
            out_dir.path(),
        );
        assert!(matches!(
            score_population(&config),
            Err(Error::UnreadableFile { .. })
        ));
    }
}
