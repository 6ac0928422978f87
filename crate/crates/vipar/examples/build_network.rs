//! Parse the datasets, resolve identities, and inspect the co-offending
//! network: degrees, shared-event weights, k-degree neighborhoods, groups.
//!
//!     cargo run --example build_network

use vipar::ingest::{load_cirv, parse_events, resolve_persons, EventType, PersonId};
use vipar::network::{build_graph, components, k_neighborhood};
use vipar::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let config = SynthConfig::small(42);
    generate(&config, dir.path())?;

    // the four training datasets plus shootings
    let mut events = Vec::new();
    for event_type in EventType::ALL {
        let outcome = parse_events(&dir.path().join(event_type.file_name()), event_type)?;
        println!(
            "{:<20} {:>6} rows, {} row errors",
            event_type.file_name(),
            outcome.events.len(),
            outcome.row_errors.len()
        );
        events.extend(
            outcome
                .events
                .into_iter()
                .filter(|e| e.date <= config.cutoff),
        );
    }
    let roster = load_cirv(&dir.path().join("cirv.csv"))?;
    println!(
        "cirv.csv             {:>6} entries ({} active)",
        roster.entries.len(),
        roster.active_count()
    );

    let (persons, index) = resolve_persons(&events, config.cutoff);
    let graph = build_graph(&events, &index, persons.len());
    println!(
        "\nnetwork: {} persons, {} edges, average degree {:.2}",
        graph.node_count(),
        graph.edge_count(),
        2.0 * graph.edge_count() as f64 / graph.node_count() as f64
    );

    // the busiest person and their neighborhood rings
    let busiest = (0..graph.node_count())
        .map(|i| PersonId(i as u32))
        .max_by_key(|&p| graph.degree_centrality(p))
        .expect("non-empty graph");
    println!(
        "\nbusiest person: {} (degree {}, {} events)",
        persons[busiest.index()].key,
        graph.degree_centrality(busiest),
        graph.event_count(busiest)
    );
    for k in 1..=3 {
        let ring = k_neighborhood(&graph, busiest, k)?;
        println!("  within {k} hop(s): {} persons", ring.len());
    }

    let groups = components(&graph);
    let mut sizes: Vec<usize> = groups.iter().map(|g| g.len()).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    println!(
        "\ngroups: {} components; largest sizes {:?}",
        groups.len(),
        &sizes[..sizes.len().min(8)]
    );
    let over_20 = groups.iter().filter(|g| g.len() > 20).map(|g| g.len()).sum::<usize>();
    println!(
        "persons in groups larger than 20: {} ({:.1}%)",
        over_20,
        100.0 * over_20 as f64 / graph.node_count() as f64
    );
    Ok(())
}
