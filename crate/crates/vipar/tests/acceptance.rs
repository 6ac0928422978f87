//! Acceptance gate: one test per criterion, each printing a pass line with
//! its runtime. Run with `cargo test --test acceptance -- --nocapture` to
//! see every line.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vipar::eval::{match_and_rate, Tier};
use vipar::ingest::{
    resolve_persons, EventRecord, EventType, Participant, PersonId, PersonKey, Role,
};
use vipar::measures::{reference_pagerank, simplified_pagerank, PagerankOptions};
use vipar::network::{build_graph, components, group_assignment, k_neighborhood, CoOffendingGraph};
use vipar::pipeline::{run_evaluate, run_score, run_validate, score_population, RunConfig};
use vipar::rules::{age_weight, default_ruleset, evaluate_rules, RuleInputs};
use vipar::stats::{log_likelihood, log_likelihood_gradient, logit_fit};
use vipar::synth::{generate, SynthConfig};

fn date(s: &str) -> NaiveDate {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
}

fn finish(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {criterion} took {elapsed:?}, budget {budget:?}"
    );
    println!("criterion {criterion}: PASS ({elapsed:?})");
}

// --- criterion 1: age-weight table reproduction -------------------------

#[test]
fn criterion_1_age_weight_table() {
    let started = Instant::now();

    assert_eq!(age_weight(18.0).unwrap(), 5.2);
    assert_eq!(age_weight(70.0).unwrap(), 0.0);

    // published min-max weights per age band, bracketing the formula at the
    // integer band endpoints
    let bands: [(f64, f64, f64, f64); 7] = [
        (13.0, 17.0, 5.3, 5.7),
        (18.0, 24.0, 4.6, 5.2),
        (25.0, 30.0, 4.0, 4.5),
        (31.0, 40.0, 3.0, 3.9),
        (41.0, 50.0, 2.0, 2.9),
        (51.0, 60.0, 1.0, 1.9),
        (61.0, 95.0, 0.0, 0.9),
    ];
    for (lo, hi, wmin, wmax) in bands {
        let mut tenths = (lo * 10.0).round() as i64;
        let end = (hi * 10.0).round() as i64;
        while tenths <= end {
            let age = tenths as f64 / 10.0;
            let w = age_weight(age).unwrap();
            assert!(
                w >= wmin && w <= wmax,
                "age {age}: weight {w} outside [{wmin}, {wmax}]"
            );
            tenths += 1;
        }
        assert_eq!(age_weight(lo).unwrap(), wmax, "band start {lo}");
    }

    finish("1 (age-weight table)", started, Duration::from_secs(1));
}

// --- criterion 2: centrality formula arithmetic -------------------------

#[test]
fn criterion_2_simplified_pagerank_arithmetic() {
    let started = Instant::now();

    assert_eq!(simplified_pagerank(1, 1), 0.15);

    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    for _ in 0..10_000 {
        let degree: u32 = rng.random_range(0..2_000_000);
        let events: u32 = rng.random_range(0..2_000_000);
        // independent arithmetic route: single division of an exact integer
        let independent = f64::from(degree + 2 * events) / 20.0;
        assert_eq!(simplified_pagerank(degree, events), independent);
    }

    finish("2 (centrality arithmetic)", started, Duration::from_secs(1));
}

// --- criterion 3: published rates and odds ratios -----------------------

#[test]
fn criterion_3_published_rate_arithmetic() {
    let started = Instant::now();

    let keys = |prefix: &str, range: std::ops::Range<usize>| -> Vec<PersonKey> {
        range
            .map(|i| PersonKey::new(&format!("{prefix} {i}"), Some(date("1990-01-01"))).unwrap())
            .collect()
    };

    // 149 identified suspects: 34 tier-1 hits, 14 tier-2 hits
    let suspects = keys("S", 0..149);
    let mut tier1 = keys("PAD1", 0..(1379 - 34));
    tier1.extend(suspects[..34].iter().cloned());
    let mut tier2 = keys("PAD2", 0..(1836 - 14));
    tier2.extend(suspects[34..48].iter().cloned());
    let combined: Vec<PersonKey> = tier1.iter().chain(tier2.iter()).cloned().collect();

    assert_eq!(match_and_rate("l", Tier::Active, &tier1, &suspects).hit_rate_percent, 22.8);
    assert_eq!(match_and_rate("l", Tier::NonActive, &tier2, &suspects).hit_rate_percent, 9.4);
    assert_eq!(match_and_rate("l", Tier::Combined, &combined, &suspects).hit_rate_percent, 32.2);

    // 477 victims, 123 hits
    let victims = keys("V", 0..477);
    let mut list = keys("PAD3", 0..(3215 - 123));
    list.extend(victims[..123].iter().cloned());
    assert_eq!(match_and_rate("l", Tier::Combined, &list, &victims).hit_rate_percent, 25.8);

    // odds-ratio columns from the printed coefficients
    let published: [(f64, f64); 16] = [
        // personal
        (-0.043, 0.957),
        (1.374, 3.951),
        (0.649, 1.913),
        (1.465, 4.327),
        (0.597, 1.817),
        // positional
        (0.779, 2.179),
        (0.752, 2.121),
        (0.403, 1.496),
        (0.135, 1.144),
        (0.339, 1.403),
        (0.609, 1.839),
        (0.098, 1.103),
        // structural
        (0.567, 1.762),
        (0.333, 1.395),
        (0.792, 2.207),
        (0.886, 2.426),
    ];
    for (b, exp_b) in published {
        assert!(
            (b.exp() - exp_b).abs() <= 0.001,
            "exp({b}) = {} vs published {exp_b}",
            b.exp()
        );
    }

    finish("3 (published rates)", started, Duration::from_secs(1));
}

// --- criterion 4: graph oracles ------------------------------------------

fn random_corpus(rng: &mut ChaCha8Rng, n_persons: usize, n_events: usize) -> Vec<EventRecord> {
    (0..n_events)
        .map(|i| {
            let size = rng.random_range(1..=4usize);
            let participants = (0..size)
                .map(|_| Participant {
                    key: PersonKey::new(
                        &format!("P {}", rng.random_range(0..n_persons)),
                        Some(date("1990-01-01")),
                    )
                    .unwrap(),
                    role: Role::Suspect,
                })
                .collect();
            EventRecord {
                event_id: format!("E{i}"),
                event_type: EventType::Offense,
                date: date("2014-06-01"),
                crime_flags: BTreeSet::new(),
                participants,
            }
        })
        .collect()
}

fn bfs_depth_limited(g: &CoOffendingGraph, start: PersonId, k: u8) -> BTreeSet<PersonId> {
    let mut dist: HashMap<PersonId, u8> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        let d = dist[&node];
        if d == k {
            continue;
        }
        for &next in g.neighbors(node) {
            dist.entry(next).or_insert_with(|| {
                queue.push_back(next);
                d + 1
            });
        }
    }
    dist.into_iter()
        .filter(|&(n, _)| n != start)
        .map(|(n, _)| n)
        .collect()
}

#[test]
fn criterion_4_graph_oracles() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);

    for round in 0..100 {
        let n_persons = rng.random_range(30..=1000);
        let n_events = n_persons * 2;
        let events = random_corpus(&mut rng, n_persons, n_events);
        let (persons, index) = resolve_persons(&events, date("2014-12-31"));
        let graph = build_graph(&events, &index, persons.len());

        // build_graph vs brute-force pair enumeration
        let mut expected_edges: BTreeMap<(PersonId, PersonId), u32> = BTreeMap::new();
        for slots in &index.event_participants {
            let distinct: Vec<PersonId> = slots
                .iter()
                .map(|&(id, _)| id)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            for i in 0..distinct.len() {
                for j in (i + 1)..distinct.len() {
                    *expected_edges.entry((distinct[i], distinct[j])).or_insert(0) += 1;
                }
            }
        }
        let actual_edges: BTreeMap<(PersonId, PersonId), u32> =
            graph.edges().map(|(u, v, c)| ((u, v), c)).collect();
        assert_eq!(actual_edges, expected_edges, "round {round}");

        // k_neighborhood vs depth-limited BFS on sampled nodes
        for _ in 0..15 {
            let p = PersonId(rng.random_range(0..persons.len()) as u32);
            for k in 1..=3u8 {
                assert_eq!(
                    k_neighborhood(&graph, p, k).unwrap(),
                    bfs_depth_limited(&graph, p, k),
                    "round {round}, person {p}, k {k}"
                );
            }
        }

        // components vs repeated-BFS labeling
        let mut label = vec![usize::MAX; graph.node_count()];
        let mut next_label = 0usize;
        for start in 0..graph.node_count() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next_label;
            let mut queue = VecDeque::from([PersonId(start as u32)]);
            while let Some(node) = queue.pop_front() {
                for &nb in graph.neighbors(node) {
                    if label[nb.index()] == usize::MAX {
                        label[nb.index()] = next_label;
                        queue.push_back(nb);
                    }
                }
            }
            next_label += 1;
        }
        let groups = components(&graph);
        assert_eq!(groups.len(), next_label, "round {round}");
        let assignment = group_assignment(&groups, graph.node_count());
        let mut mapping: HashMap<usize, usize> = HashMap::new();
        for i in 0..graph.node_count() {
            let mapped = *mapping.entry(label[i]).or_insert(assignment[i]);
            assert_eq!(mapped, assignment[i], "round {round}: partition mismatch");
        }
    }

    finish("4 (graph oracles)", started, Duration::from_secs(30));
}

// --- criterion 5: logit and pagerank numerics ----------------------------

#[test]
fn criterion_5_logit_and_pagerank_numerics() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);

    // analytic gradient vs central finite differences
    for instance in 0..20 {
        let n = 200 + instance * 10;
        let p = rng.random_range(1..=3usize);
        let mut columns = vec![Vec::with_capacity(n); p];
        let mut outcome = Vec::with_capacity(n);
        for _ in 0..n {
            let mut eta: f64 = -0.4;
            for column in columns.iter_mut() {
                let v: f64 = rng.random_range(-2.0..2.0);
                column.push(v);
                eta += 0.6 * v;
            }
            outcome.push(rng.random::<f64>() < 1.0 / (1.0 + (-eta).exp()));
        }
        let beta: Vec<f64> = (0..=p).map(|_| rng.random_range(-1.0..1.0)).collect();
        let ridge = if instance % 2 == 0 { 0.0 } else { 0.25 };
        let analytic = log_likelihood_gradient(&columns, &outcome, &beta, ridge);
        let h = 1e-5;
        for j in 0..beta.len() {
            let mut hi = beta.clone();
            hi[j] += h;
            let mut lo = beta.clone();
            lo[j] -= h;
            let fd = (log_likelihood(&columns, &outcome, &hi, ridge)
                - log_likelihood(&columns, &outcome, &lo, ridge))
                / (2.0 * h);
            let scale = analytic[j].abs().max(fd.abs()).max(1.0);
            assert!(
                (analytic[j] - fd).abs() / scale < 1e-4,
                "instance {instance} component {j}: analytic {} vs fd {}",
                analytic[j],
                fd
            );
        }
    }

    // planted-coefficient recovery at n = 20,000
    let n = 20_000;
    let mut column = Vec::with_capacity(n);
    let mut outcome = Vec::with_capacity(n);
    for _ in 0..n {
        let x: f64 = rng.random_range(-2.0..2.0);
        let eta = -2.0 + 0.8 * x;
        column.push(x);
        outcome.push(rng.random::<f64>() < 1.0 / (1.0 + (-eta).exp()));
    }
    let fit = logit_fit(&[column], &outcome, 0.0).unwrap();
    assert!(fit.converged);
    assert!(
        (fit.coefficients[1] - 0.8).abs() < 0.1,
        "recovered slope {}",
        fit.coefficients[1]
    );

    // reference pagerank vs dense matrix oracle on graphs up to 50 nodes
    for _ in 0..10 {
        let n_persons = rng.random_range(5..=50);
        let events = random_corpus(&mut rng, n_persons, n_persons * 2);
        let (persons, index) = resolve_persons(&events, date("2014-12-31"));
        let graph = build_graph(&events, &index, persons.len());
        let n = graph.node_count();

        let fast = reference_pagerank(
            &graph,
            PagerankOptions {
                tolerance: 1e-13,
                max_iterations: 3000,
                ..Default::default()
            },
        )
        .unwrap();

        // dense transition matrix, full matrix-vector power iteration
        let damping = 0.85;
        let mut transition = vec![vec![0.0f64; n]; n];
        for u in 0..n {
            let pu = PersonId(u as u32);
            let deg = graph.degree_centrality(pu);
            if deg == 0 {
                for row in transition.iter_mut() {
                    row[u] = 1.0 / n as f64;
                }
            } else {
                for &v in graph.neighbors(pu) {
                    transition[v.index()][u] = 1.0 / f64::from(deg);
                }
            }
        }
        let mut x = vec![1.0 / n as f64; n];
        for _ in 0..3000 {
            let mut next = vec![0.0; n];
            for v in 0..n {
                let mut acc = 0.0;
                for u in 0..n {
                    acc += transition[v][u] * x[u];
                }
                next[v] = (1.0 - damping) / n as f64 + damping * acc;
            }
            x = next;
        }
        let mean = x.iter().sum::<f64>() / n as f64;
        for (a, oracle) in fast.iter().zip(x.iter().map(|v| v / mean)) {
            assert!((a - oracle).abs() < 1e-6, "pagerank {a} vs oracle {oracle}");
        }
    }

    finish("5 (logit + pagerank numerics)", started, Duration::from_secs(60));
}

// --- shared default corpus for criteria 6 and 7 --------------------------

struct Corpus {
    _dir: tempfile::TempDir,
    path: PathBuf,
    config: SynthConfig,
}

fn default_corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        let config = SynthConfig::default();
        generate(&config, dir.path()).expect("generate corpus");
        Corpus {
            path: dir.path().to_path_buf(),
            _dir: dir,
            config,
        }
    })
}

// --- criterion 6: predictive lift ----------------------------------------

#[test]
fn criterion_6_predictive_lift() {
    let started = Instant::now();
    let corpus = default_corpus();
    let out = tempfile::tempdir().unwrap();

    let config = RunConfig::for_synth_dir(&corpus.path, corpus.config.cutoff, out.path());
    let population = score_population(&config).unwrap();
    let n = 1379;
    let top = population.ranked_keys(n).unwrap();
    let report = match_and_rate("vipar", Tier::Combined, &top, &population.outcomes.victims);

    // a uniformly random size-matched list catches each outcome person with
    // probability n / population
    let random_rate = 100.0 * n as f64 / population.persons.len() as f64;
    let lift = report.hit_rate_percent / random_rate;
    assert!(
        lift >= 3.0,
        "lift {lift:.2} (rate {:.1}% vs random {random_rate:.1}%)",
        report.hit_rate_percent
    );

    // static list frozen two years before the cutoff
    let frozen_out = tempfile::tempdir().unwrap();
    let frozen_config = RunConfig {
        cutoff: corpus.config.cutoff - chrono::Duration::days(730),
        ..RunConfig::for_synth_dir(&corpus.path, corpus.config.cutoff, frozen_out.path())
    };
    let frozen = score_population(&frozen_config).unwrap();
    let frozen_top = frozen.ranked_keys(n.min(frozen.scores.len())).unwrap();
    let frozen_report =
        match_and_rate("frozen", Tier::Combined, &frozen_top, &population.outcomes.victims);
    assert!(
        report.hit_rate_percent > frozen_report.hit_rate_percent,
        "fresh {:.1}% vs frozen {:.1}%",
        report.hit_rate_percent,
        frozen_report.hit_rate_percent
    );

    println!(
        "  lift {lift:.2} over random; fresh {:.1}% vs frozen {:.1}%",
        report.hit_rate_percent, frozen_report.hit_rate_percent
    );
    finish("6 (predictive lift)", started, Duration::from_secs(300));
}

// --- criterion 7: determinism --------------------------------------------

#[test]
fn criterion_7_pipeline_determinism() {
    let started = Instant::now();
    let corpus = default_corpus();

    // regenerating the corpus from the same config is byte-identical
    let regen = tempfile::tempdir().unwrap();
    generate(&corpus.config, regen.path()).unwrap();
    for name in [
        "arrests.csv",
        "field_interviews.csv",
        "offenses.csv",
        "victimizations.csv",
        "shootings.csv",
        "cirv.csv",
        "ground_truth.csv",
    ] {
        assert_eq!(
            std::fs::read(corpus.path.join(name)).unwrap(),
            std::fs::read(regen.path().join(name)).unwrap(),
            "{name} differs across generations"
        );
    }

    // score, validation, and evaluation artifacts are byte-identical on rerun
    let run = |out: &std::path::Path| {
        let config = RunConfig {
            ridge: 0.01,
            ..RunConfig::for_synth_dir(&corpus.path, corpus.config.cutoff, out)
        };
        run_score(&config).unwrap();
        run_validate(&config).unwrap();
        run_evaluate(&config).unwrap();
    };
    let out_a = tempfile::tempdir().unwrap();
    let out_b = tempfile::tempdir().unwrap();
    run(out_a.path());
    run(out_b.path());

    let mut names: Vec<String> = std::fs::read_dir(out_a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert!(names.iter().any(|n| n == "scores.csv"));
    assert!(names.iter().any(|n| n == "validation_personal.csv"));
    assert!(names.iter().any(|n| n == "evaluation_summary.toml"));
    for name in &names {
        let a = std::fs::read(out_a.path().join(name)).unwrap();
        let b = std::fs::read(out_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs across reruns");
    }

    finish("7 (determinism)", started, Duration::from_secs(300));
}

// --- criterion 8: scoring monotonicity ------------------------------------

fn random_inputs(rng: &mut ChaCha8Rng) -> RuleInputs {
    RuleInputs {
        age: if rng.random::<f64>() < 0.9 {
            Some(rng.random_range(0..900) as f64 / 10.0)
        } else {
            None
        },
        simplified_pagerank: rng.random_range(0.0..3.0),
        cirv_member: rng.random(),
        recent_violent_victimization: rng.random(),
        recent_violent_crime: rng.random(),
        any_firearm_incident: rng.random(),
        recent_firearm_incident: rng.random(),
        misdemeanors_committed: rng.random_range(0..12),
        recent_misdemeanors_committed: rng.random_range(0..6),
        misdemeanor_victimizations: rng.random_range(0..6),
        high_pagerank_friend_d1: rng.random(),
        cirv_friend_d1: rng.random(),
        cirv_friend_d2: rng.random(),
        cirv_friend_d3: rng.random(),
        shooting_friend_d1: rng.random(),
        shooting_friend_d2: rng.random(),
        group_violent_crimes: rng.random_range(0..15),
        group_violent_victimizations: rng.random_range(0..15),
        group_recent_violent_victimizations: rng.random_range(0..10),
        group_shootings: rng.random_range(0..15),
        group_recent_shootings: rng.random_range(0..8),
        group_member_count: rng.random_range(1..40),
    }
}

#[test]
fn criterion_8_scoring_monotonicity() {
    let started = Instant::now();
    let ruleset = default_ruleset();
    let mut rng = ChaCha8Rng::seed_from_u64(1008);

    type Setter = fn(&mut RuleInputs);
    let setters: [Setter; 11] = [
        |i| i.cirv_member = true,
        |i| i.recent_violent_victimization = true,
        |i| i.recent_violent_crime = true,
        |i| i.any_firearm_incident = true,
        |i| i.recent_firearm_incident = true,
        |i| i.high_pagerank_friend_d1 = true,
        |i| i.cirv_friend_d1 = true,
        |i| i.cirv_friend_d2 = true,
        |i| i.cirv_friend_d3 = true,
        |i| i.shooting_friend_d1 = true,
        |i| i.shooting_friend_d2 = true,
    ];

    for _ in 0..1000 {
        let base = random_inputs(&mut rng);
        let base_total = evaluate_rules(PersonId(0), &base, &ruleset).total;

        for set in setters {
            let mut flipped = base;
            set(&mut flipped);
            let total = evaluate_rules(PersonId(0), &flipped, &ruleset).total;
            assert!(total >= base_total, "boolean flip decreased the total");
        }

        if let Some(age) = base.age {
            let younger_age = (age * rng.random::<f64>() * 10.0).floor() / 10.0;
            let mut younger = base;
            younger.age = Some(younger_age);
            let younger_total = evaluate_rules(PersonId(0), &younger, &ruleset).total;
            assert!(
                younger_total >= base_total,
                "decreasing age {age} -> {younger_age} decreased the total"
            );
        }
    }

    finish("8 (scoring monotonicity)", started, Duration::from_secs(10));
}
