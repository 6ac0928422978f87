//! Per-person network measures and per-group structural aggregates.
//!
//! The centerpiece is the simplified centrality score
//! `(degree_centrality / 2 + event_count) / 10`: degree gets half the weight
//! of the event total, and the sum is standardized by ten because the
//! highest event mode in the source data sits around ten. A conventional
//! power-iteration PageRank (mean-normalized to 1 so both variants share the
//! "greater than one" threshold) is computed alongside it as a cross-check.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::ingest::{CrimeFlag, EventRecord, Person, PersonId, PersonIndex, Role};
use crate::network::{CoOffendingGraph, Group};

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;
pub const DEFAULT_PR_THRESHOLD: f64 = 1.0;
pub const DEFAULT_RECENCY_DAYS: i64 = 365;

/// Degree/event centrality: `(degree_centrality / 2 + event_count) / 10`.
pub fn simplified_pagerank(degree_centrality: u32, event_count: u32) -> f64 {
    (f64::from(degree_centrality) / 2.0 + f64::from(event_count)) / 10.0
}

/// Power-iteration settings for the reference PageRank.
#[derive(Debug, Clone, Copy)]
pub struct PagerankOptions {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PagerankOptions {
    fn default() -> Self {
        PagerankOptions {
            damping: DEFAULT_DAMPING,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Standard PageRank by power iteration, treating every undirected edge as a
/// pair of directed arcs and isolated nodes as dangling. The result is
/// rescaled so the mean value is exactly one.
pub fn reference_pagerank(graph: &CoOffendingGraph, opts: PagerankOptions) -> Result<Vec<f64>> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(opts.damping > 0.0 && opts.damping < 1.0) {
        return Err(Error::InvalidDamping(opts.damping));
    }

    let d = opts.damping;
    let uniform = 1.0 / n as f64;
    let mut x = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for iteration in 0..opts.max_iterations {
        let dangling: f64 = (0..n)
            .filter(|&i| graph.degree_centrality(PersonId(i as u32)) == 0)
            .map(|i| x[i])
            .sum();
        let base = (1.0 - d) * uniform + d * dangling * uniform;
        for v in next.iter_mut() {
            *v = base;
        }
        for (u, &xu) in x.iter().enumerate() {
            let pu = PersonId(u as u32);
            let deg = graph.degree_centrality(pu);
            if deg == 0 {
                continue;
            }
            let share = d * xu / f64::from(deg);
            for &v in graph.neighbors(pu) {
                next[v.index()] += share;
            }
        }
        residual = x
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if residual < opts.tolerance {
            let mean = x.iter().sum::<f64>() / n as f64;
            for v in x.iter_mut() {
                *v /= mean;
            }
            return Ok(x);
        }
        let _ = iteration;
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

/// Network-position flags and centrality values for one person.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PersonMeasures {
    pub degree_centrality: u32,
    pub event_count: u32,
    pub simplified_pagerank: f64,
    pub reference_pagerank: f64,
    /// Some first-degree friend has simplified PageRank above the threshold.
    pub high_pr_friend_d1: bool,
    pub cirv_friend_d1: bool,
    pub cirv_friend_d2: bool,
    /// Computed for regression reporting; carries no weight in the default
    /// ruleset.
    pub cirv_friend_d3: bool,
    pub shooting_friend_d1: bool,
    pub shooting_friend_d2: bool,
}

/// Membership masks derived from rosters, indexed by person.
pub fn cirv_roster(persons: &[Person]) -> Vec<bool> {
    persons.iter().map(|p| p.cirv_status.is_member()).collect()
}

/// Everyone who appears in a shooting-flagged event, in any role.
pub fn shooting_roster(events: &[EventRecord], index: &PersonIndex, n_persons: usize) -> Vec<bool> {
    let mut roster = vec![false; n_persons];
    for (event, slots) in events.iter().zip(&index.event_participants) {
        if event.has_flag(CrimeFlag::Shooting) {
            for &(id, _) in slots {
                roster[id.index()] = true;
            }
        }
    }
    roster
}

/// One person's positional flags, computed from a single depth-3 walk.
/// `spr` must hold every person's simplified PageRank.
pub fn positional_flags(
    graph: &CoOffendingGraph,
    person: PersonId,
    cirv: &[bool],
    shooting: &[bool],
    spr: &[f64],
    pr_threshold: f64,
) -> Result<PersonMeasures> {
    let mut m = PersonMeasures {
        degree_centrality: graph.degree_centrality(person),
        event_count: graph.event_count(person),
        simplified_pagerank: spr[person.index()],
        ..Default::default()
    };

    // single BFS to depth 3; flags at depth k are cumulative over <= k
    let mut depth: BTreeMap<PersonId, u8> = BTreeMap::new();
    depth.insert(person, 0);
    let mut queue = std::collections::VecDeque::from([person]);
    while let Some(node) = queue.pop_front() {
        let d = depth[&node];
        if d == 3 {
            continue;
        }
        for &next in graph.neighbors(node) {
            if let std::collections::btree_map::Entry::Vacant(e) = depth.entry(next) {
                e.insert(d + 1);
                queue.push_back(next);
            }
        }
    }

    for (&node, &d) in &depth {
        if node == person {
            continue;
        }
        let i = node.index();
        if d == 1 {
            if spr[i] > pr_threshold {
                m.high_pr_friend_d1 = true;
            }
            if cirv[i] {
                m.cirv_friend_d1 = true;
            }
            if shooting[i] {
                m.shooting_friend_d1 = true;
            }
        }
        if d <= 2 {
            if cirv[i] {
                m.cirv_friend_d2 = true;
            }
            if shooting[i] {
                m.shooting_friend_d2 = true;
            }
        }
        if cirv[i] {
            m.cirv_friend_d3 = true;
        }
    }
    Ok(m)
}

/// Measures for the whole population. Fails only if the reference PageRank
/// does not converge.
pub fn compute_person_measures(
    graph: &CoOffendingGraph,
    cirv: &[bool],
    shooting: &[bool],
    pr_threshold: f64,
    opts: PagerankOptions,
) -> Result<Vec<PersonMeasures>> {
    let n = graph.node_count();
    let spr: Vec<f64> = (0..n)
        .map(|i| {
            let p = PersonId(i as u32);
            simplified_pagerank(graph.degree_centrality(p), graph.event_count(p))
        })
        .collect();
    let reference = reference_pagerank(graph, opts)?;

    let mut out = Vec::with_capacity(n);
    for (i, &pr) in reference.iter().enumerate() {
        let mut m = positional_flags(graph, PersonId(i as u32), cirv, shooting, &spr, pr_threshold)?;
        m.reference_pagerank = pr;
        out.push(m);
    }
    Ok(out)
}

/// Look-back window: `snapshot - days < date <= snapshot`.
#[derive(Debug, Clone, Copy)]
pub struct RecencyWindow {
    pub snapshot: NaiveDate,
    pub days: i64,
}

impl RecencyWindow {
    pub fn new(snapshot: NaiveDate, days: i64) -> Self {
        RecencyWindow { snapshot, days }
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        let delta = (self.snapshot - date).num_days();
        delta >= 0 && delta < self.days
    }
}

/// Criminal-history inputs for the personal rules, counted per distinct
/// event. "Committed" means a suspect or arrestee role; firearm involvement
/// covers suspect, arrestee, and victim roles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PersonHistory {
    pub recent_violent_victimization: bool,
    pub recent_violent_crime: bool,
    pub any_firearm_incident: bool,
    pub recent_firearm_incident: bool,
    pub misdemeanors_committed: u32,
    pub recent_misdemeanors_committed: u32,
    pub misdemeanor_victimizations: u32,
}

pub fn person_history(
    person: &Person,
    events: &[EventRecord],
    window: &RecencyWindow,
) -> PersonHistory {
    // collapse multiple roles in one event before counting
    let mut per_event: BTreeMap<usize, (bool, bool)> = BTreeMap::new(); // (committing, victim)
    for p in &person.participations {
        let entry = per_event.entry(p.event_idx).or_insert((false, false));
        entry.0 |= p.role.is_committing();
        entry.1 |= p.role == Role::Victim;
    }

    let mut h = PersonHistory::default();
    for (&event_idx, &(committing, victim)) in &per_event {
        let event = &events[event_idx];
        let recent = window.contains(event.date);
        let violent = event.has_flag(CrimeFlag::Violent);
        let misdemeanor = event.has_flag(CrimeFlag::Misdemeanor);
        let firearm = event.has_flag(CrimeFlag::Firearm);

        if violent && victim && recent {
            h.recent_violent_victimization = true;
        }
        if violent && committing && recent {
            h.recent_violent_crime = true;
        }
        if firearm && (committing || victim) {
            h.any_firearm_incident = true;
            if recent {
                h.recent_firearm_incident = true;
            }
        }
        if misdemeanor && committing {
            h.misdemeanors_committed += 1;
            if recent {
                h.recent_misdemeanors_committed += 1;
            }
        }
        if misdemeanor && victim {
            h.misdemeanor_victimizations += 1;
        }
    }
    h
}

pub fn person_histories(
    persons: &[Person],
    events: &[EventRecord],
    window: &RecencyWindow,
) -> Vec<PersonHistory> {
    persons
        .iter()
        .map(|p| person_history(p, events, window))
        .collect()
}

/// Violence volume of one co-offending group. Every event counts once per
/// group even when several members share it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GroupMeasures {
    pub member_count: u32,
    pub violent_crime_count: u32,
    pub violent_victimization_count: u32,
    pub recent_violent_victimization_count: u32,
    pub shooting_count: u32,
    pub recent_shooting_count: u32,
}

/// Aggregates events onto groups. Output is parallel to `groups`.
pub fn group_aggregates(
    groups: &[Group],
    events: &[EventRecord],
    index: &PersonIndex,
    assignment: &[usize],
    window: &RecencyWindow,
) -> Vec<GroupMeasures> {
    let mut out: Vec<GroupMeasures> = groups
        .iter()
        .map(|g| GroupMeasures {
            member_count: g.len() as u32,
            ..Default::default()
        })
        .collect();

    for (event, slots) in events.iter().zip(&index.event_participants) {
        let recent = window.contains(event.date);
        let violent = event.has_flag(CrimeFlag::Violent);
        let shooting = event.has_flag(CrimeFlag::Shooting);

        // which groups this event touches, and in what capacity
        let mut committing: BTreeMap<usize, ()> = BTreeMap::new();
        let mut victimized: BTreeMap<usize, ()> = BTreeMap::new();
        let mut touched: BTreeMap<usize, ()> = BTreeMap::new();
        for &(id, role) in slots {
            let g = assignment[id.index()];
            touched.insert(g, ());
            if role.is_committing() {
                committing.insert(g, ());
            }
            if role == Role::Victim {
                victimized.insert(g, ());
            }
        }

        if violent {
            for &g in committing.keys() {
                out[g].violent_crime_count += 1;
            }
            for &g in victimized.keys() {
                out[g].violent_victimization_count += 1;
                if recent {
                    out[g].recent_violent_victimization_count += 1;
                }
            }
        }
        if shooting {
            for &g in touched.keys() {
                out[g].shooting_count += 1;
                if recent {
                    out[g].recent_shooting_count += 1;
                }
            }
        }
    }
    out
}

/// Measures export: one row per person.
pub fn write_person_measures(path: &Path, measures: &[PersonMeasures]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record([
            "person_id",
            "degree_centrality",
            "event_count",
            "simplified_pagerank",
            "reference_pagerank",
            "high_pr_friend_d1",
            "cirv_friend_d1",
            "cirv_friend_d2",
            "cirv_friend_d3",
            "shooting_friend_d1",
            "shooting_friend_d2",
        ])
        .map_err(|e| Error::csv(path, e))?;
    for (i, m) in measures.iter().enumerate() {
        writer
            .write_record([
                i.to_string(),
                m.degree_centrality.to_string(),
                m.event_count.to_string(),
                format!("{:.6}", m.simplified_pagerank),
                format!("{:.6}", m.reference_pagerank),
                (m.high_pr_friend_d1 as u8).to_string(),
                (m.cirv_friend_d1 as u8).to_string(),
                (m.cirv_friend_d2 as u8).to_string(),
                (m.cirv_friend_d3 as u8).to_string(),
                (m.shooting_friend_d1 as u8).to_string(),
                (m.shooting_friend_d2 as u8).to_string(),
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Measures export: one row per group.
pub fn write_group_measures(path: &Path, groups: &[Group], measures: &[GroupMeasures]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record([
            "group_id",
            "member_count",
            "violent_crime_count",
            "violent_victimization_count",
            "recent_violent_victimization_count",
            "shooting_count",
            "recent_shooting_count",
        ])
        .map_err(|e| Error::csv(path, e))?;
    for (group, m) in groups.iter().zip(measures) {
        writer
            .write_record([
                group.group_id.to_string(),
                m.member_count.to_string(),
                m.violent_crime_count.to_string(),
                m.violent_victimization_count.to_string(),
                m.recent_violent_victimization_count.to_string(),
                m.shooting_count.to_string(),
                m.recent_shooting_count.to_string(),
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
