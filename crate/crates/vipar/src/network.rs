//! Co-offending network construction and traversal.
//!
//! Two persons are linked when they appear in the same event; the edge weight
//! counts how many distinct events they shared. Construction is single-writer,
//! after which the graph is frozen and all queries are read-only.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::{EventRecord, PersonId, PersonIndex};

/// Undirected co-offending multigraph over dense person ids.
#[derive(Debug, Clone)]
pub struct CoOffendingGraph {
    /// Sorted, deduplicated neighbor lists.
    adj: Vec<Vec<PersonId>>,
    /// Edge (u, v) with u < v mapped to the number of distinct shared events.
    edge_counts: BTreeMap<(PersonId, PersonId), u32>,
    /// Distinct events each person appears in (any role, solo included).
    event_counts: Vec<u32>,
}

impl CoOffendingGraph {
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_counts.len()
    }

    /// Distinct immediate neighbors ("number of immediate friends").
    pub fn degree_centrality(&self, person: PersonId) -> u32 {
        self.adj[person.index()].len() as u32
    }

    /// Distinct events the person appears in.
    pub fn event_count(&self, person: PersonId) -> u32 {
        self.event_counts[person.index()]
    }

    pub fn neighbors(&self, person: PersonId) -> &[PersonId] {
        &self.adj[person.index()]
    }

    /// Distinct-event count of the (u, v) edge, if present.
    pub fn shared_events(&self, u: PersonId, v: PersonId) -> Option<u32> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_counts.get(&key).copied()
    }

    /// Edges in deterministic (u, v) order with their event counts.
    pub fn edges(&self) -> impl Iterator<Item = (PersonId, PersonId, u32)> + '_ {
        self.edge_counts.iter().map(|(&(u, v), &c)| (u, v, c))
    }

    fn check_person(&self, person: PersonId) -> Result<()> {
        if person.index() >= self.adj.len() {
            return Err(Error::UnknownPerson(person.0));
        }
        Ok(())
    }
}

/// Builds the graph from resolved events. Every unordered pair of distinct
/// participants in an event gains one shared-event count; a person counts
/// each event once toward their event total no matter how many roles they
/// held in it.
pub fn build_graph(
    events: &[EventRecord],
    index: &PersonIndex,
    n_persons: usize,
) -> CoOffendingGraph {
    debug_assert_eq!(events.len(), index.event_participants.len());
    let mut edge_counts: BTreeMap<(PersonId, PersonId), u32> = BTreeMap::new();
    let mut event_counts = vec![0u32; n_persons];

    for slots in &index.event_participants {
        let distinct: BTreeSet<PersonId> = slots.iter().map(|&(id, _)| id).collect();
        for &id in &distinct {
            event_counts[id.index()] += 1;
        }
        let members: Vec<PersonId> = distinct.into_iter().collect();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                *edge_counts.entry((members[i], members[j])).or_insert(0) += 1;
            }
        }
    }

    let mut adj = vec![Vec::new(); n_persons];
    for &(u, v) in edge_counts.keys() {
        adj[u.index()].push(v);
        adj[v.index()].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    CoOffendingGraph {
        adj,
        edge_counts,
        event_counts,
    }
}

/// All persons within path distance `k` of `person`, excluding the person
/// themself. Depth is capped at 3 ("friends of friends of friends").
pub fn k_neighborhood(
    graph: &CoOffendingGraph,
    person: PersonId,
    k: u8,
) -> Result<BTreeSet<PersonId>> {
    graph.check_person(person)?;
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidDepth(k));
    }

    let mut seen = BTreeSet::new();
    let mut frontier = VecDeque::new();
    seen.insert(person);
    frontier.push_back((person, 0u8));
    while let Some((node, depth)) = frontier.pop_front() {
        if depth == k {
            continue;
        }
        for &next in graph.neighbors(node) {
            if seen.insert(next) {
                frontier.push_back((next, depth + 1));
            }
        }
    }
    seen.remove(&person);
    Ok(seen)
}

/// A maximal connected set of persons; structural rule weights apply to all
/// of its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    /// Lowest member person id, which makes the labeling deterministic.
    pub group_id: PersonId,
    /// Sorted members.
    pub members: Vec<PersonId>,
}

impl Group {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        // path compression
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// Partitions all nodes into connected components. Isolated nodes form
/// singleton groups; output is sorted by group id.
pub fn components(graph: &CoOffendingGraph) -> Vec<Group> {
    let n = graph.node_count();
    let mut uf = UnionFind::new(n);
    for (u, v, _) in graph.edges() {
        uf.union(u.0, v.0);
    }

    let mut members: BTreeMap<u32, Vec<PersonId>> = BTreeMap::new();
    for i in 0..n as u32 {
        let root = uf.find(i);
        members.entry(root).or_default().push(PersonId(i));
    }
    members
        .into_values()
        .map(|members| Group {
            group_id: members[0],
            members,
        })
        .collect()
}

/// Person index -> position of their group in the `groups` slice.
pub fn group_assignment(groups: &[Group], n_persons: usize) -> Vec<usize> {
    let mut assignment = vec![usize::MAX; n_persons];
    for (gi, group) in groups.iter().enumerate() {
        for &m in &group.members {
            assignment[m.index()] = gi;
        }
    }
    debug_assert!(assignment.iter().all(|&g| g != usize::MAX));
    assignment
}

/// Audit export: `u,v,event_count` per edge.
pub fn write_edge_list(path: &Path, graph: &CoOffendingGraph) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record(["u", "v", "event_count"])
        .map_err(|e| Error::csv(path, e))?;
    for (u, v, c) in graph.edges() {
        writer
            .write_record([u.to_string(), v.to_string(), c.to_string()])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Audit export: `person_id,group_id` per person.
pub fn write_components(path: &Path, groups: &[Group]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record(["person_id", "group_id"])
        .map_err(|e| Error::csv(path, e))?;
    for group in groups {
        for &m in &group.members {
            writer
                .write_record([m.to_string(), group.group_id.to_string()])
                .map_err(|e| Error::csv(path, e))?;
        }
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
