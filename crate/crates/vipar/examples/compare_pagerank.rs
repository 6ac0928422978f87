//! Compare the degree/event centrality score against a conventional
//! power-iteration PageRank on the same network. The two are different
//! quantities but should order people very similarly.
//!
//!     cargo run --example compare_pagerank

use vipar::ingest::{parse_events, resolve_persons, EventType, PersonId};
use vipar::measures::{reference_pagerank, simplified_pagerank, PagerankOptions};
use vipar::network::build_graph;
use vipar::stats::spearman_rho;
use vipar::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let config = SynthConfig::small(42);
    generate(&config, dir.path())?;

    let mut events = Vec::new();
    for event_type in EventType::ALL {
        let outcome = parse_events(&dir.path().join(event_type.file_name()), event_type)?;
        events.extend(outcome.events.into_iter().filter(|e| e.date <= config.cutoff));
    }
    let (persons, index) = resolve_persons(&events, config.cutoff);
    let graph = build_graph(&events, &index, persons.len());

    let simplified: Vec<f64> = (0..graph.node_count())
        .map(|i| {
            let p = PersonId(i as u32);
            simplified_pagerank(graph.degree_centrality(p), graph.event_count(p))
        })
        .collect();
    let reference = reference_pagerank(&graph, PagerankOptions::default())?;

    let rho = spearman_rho(&simplified, &reference)?;
    println!(
        "{} persons; rank correlation between the two centralities: {rho:.3}",
        graph.node_count()
    );

    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let max = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max);
    println!(
        "simplified: mean {:.3}, max {:.2}; reference (mean-1 normalized): mean {:.3}, max {:.2}",
        mean(&simplified),
        max(&simplified),
        mean(&reference),
        max(&reference)
    );

    let mut order: Vec<usize> = (0..simplified.len()).collect();
    order.sort_by(|&a, &b| simplified[b].total_cmp(&simplified[a]));
    println!("\n{:<26} {:>7} {:>7} {:>11} {:>10}", "person", "degree", "events", "simplified", "reference");
    for &i in order.iter().take(8) {
        let p = PersonId(i as u32);
        println!(
            "{:<26} {:>7} {:>7} {:>11.2} {:>10.2}",
            persons[i].key.full_name,
            graph.degree_centrality(p),
            graph.event_count(p),
            simplified[i],
            reference[i]
        );
    }
    Ok(())
}
