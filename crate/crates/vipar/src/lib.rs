//! Co-offending network analysis and rule-based vulnerability scoring.
//!
//! The crate ingests police contact datasets (arrests, field interviews,
//! offenses, victimizations, shootings) plus a chronic-offender roster,
//! links everyone who shared an event into an undirected co-offending
//! network, and assigns each person an additive VIPAR vulnerability score
//! built from three weighted rule categories:
//!
//! * **personal** — age, roster membership, and criminal-history rules
//! * **positional** — where the person sits in the network (PageRank-style
//!   centrality, high-centrality friends, roster or shooting friends)
//! * **structural** — properties of the person's co-offending group
//!   (violence volume, shootings, size)
//!
//! Supporting machinery covers logistic-regression validation of the rule
//! inputs, temporal hold-out evaluation of ranked lists against future
//! shooting outcomes, and a seeded synthetic-data generator so the full
//! pipeline runs without real police data.
//!
//! Start with the runnable examples (`cargo run --example ...`):
//!
//! * `synthesize` — generate a seeded synthetic corpus
//! * `build_network` — parse datasets and inspect the co-offending graph
//! * `score_population` — compute VIPAR scores end to end
//! * `compare_pagerank` — the degree/event centrality vs reference PageRank
//! * `validate_rules` — logistic regressions mirroring the rule categories
//! * `evaluate_holdout` — hit rates of ranked lists against future shootings
//! * `custom_ruleset` — edit rule weights without recompiling
//!
//! The `vipar` binary wraps the same pipeline as subcommands
//! (`synth | ingest | score | validate | evaluate`).

pub mod error;
pub mod eval;
pub mod ingest;
pub mod measures;
pub mod network;
pub mod pipeline;
pub mod rules;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use ingest::{EventRecord, Person, PersonId, PersonKey};
pub use network::CoOffendingGraph;
pub use pipeline::RunConfig;
pub use rules::{RuleSet, ViparScore};
pub use synth::SynthConfig;
