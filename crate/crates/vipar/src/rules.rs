//! The weighted rule engine behind the VIPAR score.
//!
//! A score is the sum of three additive components. Personal rules read a
//! person's age and criminal history, positional rules read their place in
//! the co-offending network, and structural rules read their group's
//! violence volume; every group member receives the same structural
//! contribution. All weights live in a ruleset that can be edited as TOML
//! without recompiling.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Person, PersonId};
use crate::measures::{GroupMeasures, PersonHistory, PersonMeasures, DEFAULT_PR_THRESHOLD, DEFAULT_RECENCY_DAYS};

/// Which score component a rule contributes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleCategory {
    Personal,
    Positional,
    Structural,
}

/// Boolean signals a rule can fire on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoolSignal {
    CirvMember,
    RecentViolentVictimization,
    RecentViolentCrime,
    AnyFirearmIncident,
    RecentFirearmIncident,
    HighPagerankFriendD1,
    CirvFriendD1,
    CirvFriendD2,
    CirvFriendD3,
    ShootingFriendD1,
    ShootingFriendD2,
}

/// Count signals a rule can threshold or bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountSignal {
    MisdemeanorsCommitted,
    RecentMisdemeanorsCommitted,
    MisdemeanorVictimizations,
    GroupViolentCrimes,
    GroupViolentVictimizations,
    GroupRecentViolentVictimizations,
    GroupShootings,
    GroupRecentShootings,
    GroupMemberCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    /// `count >= threshold`
    Ge,
    /// `count > threshold`
    Gt,
}

impl Cmp {
    fn holds(self, count: u32, threshold: u32) -> bool {
        match self {
            Cmp::Ge => count >= threshold,
            Cmp::Gt => count > threshold,
        }
    }
}

/// One count range with its weight. `max` is inclusive; `None` means open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub min: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<u32>,
    pub weight: f64,
}

impl Bucket {
    fn contains(&self, count: u32) -> bool {
        count >= self.min && self.max.is_none_or(|m| count <= m)
    }
}

/// How a rule turns its inputs into a contribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RuleKind {
    /// Fixed weight when a boolean signal is set.
    Flag { signal: BoolSignal, weight: f64 },
    /// Fixed weight when a count satisfies the comparison.
    CountThreshold {
        signal: CountSignal,
        cmp: Cmp,
        threshold: u32,
        weight: f64,
    },
    /// Mutually exclusive count ranges; the highest matching weight fires.
    CountBuckets {
        signal: CountSignal,
        buckets: Vec<Bucket>,
    },
    /// `max(0, cap - age / divisor)`, clamped above at `cap`. Skipped when
    /// the age is unknown.
    AgeCurve { cap: f64, divisor: f64 },
    /// Adds the person's own simplified PageRank value.
    PagerankValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub id: String,
    pub category: RuleCategory,
    #[serde(flatten)]
    pub kind: RuleKind,
}

/// The full rule configuration, serializable as TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    /// Look-back for "recent" signals, in days before the snapshot.
    pub recency_window_days: i64,
    /// Simplified-PageRank threshold for the high-centrality-friend flag.
    pub pr_threshold: f64,
    pub rules: Vec<Rule>,
}

impl Default for RuleSet {
    fn default() -> Self {
        default_ruleset()
    }
}

fn flag(id: &str, category: RuleCategory, signal: BoolSignal, weight: f64) -> Rule {
    Rule {
        id: id.to_string(),
        category,
        kind: RuleKind::Flag { signal, weight },
    }
}

fn count_rule(
    id: &str,
    category: RuleCategory,
    signal: CountSignal,
    cmp: Cmp,
    threshold: u32,
    weight: f64,
) -> Rule {
    Rule {
        id: id.to_string(),
        category,
        kind: RuleKind::CountThreshold {
            signal,
            cmp,
            threshold,
            weight,
        },
    }
}

fn violence_buckets(id: &str, signal: CountSignal) -> Rule {
    Rule {
        id: id.to_string(),
        category: RuleCategory::Structural,
        kind: RuleKind::CountBuckets {
            signal,
            buckets: vec![
                Bucket { min: 2, max: Some(4), weight: 1.0 },
                Bucket { min: 5, max: Some(9), weight: 2.0 },
                Bucket { min: 10, max: None, weight: 3.0 },
            ],
        },
    }
}

/// The shipped 21-rule configuration (25 weights counting the bucket
/// sub-weights).
pub fn default_ruleset() -> RuleSet {
    use BoolSignal::*;
    use CountSignal::*;
    use RuleCategory::*;

    let rules = vec![
        // personal
        Rule {
            id: "age".to_string(),
            category: Personal,
            kind: RuleKind::AgeCurve { cap: 7.0, divisor: 10.0 },
        },
        flag("cirv_member", Personal, CirvMember, 1.0),
        flag("recent_violent_victimization", Personal, RecentViolentVictimization, 1.0),
        flag("recent_violent_crime", Personal, RecentViolentCrime, 1.0),
        flag("any_firearm_crime", Personal, AnyFirearmIncident, 1.0),
        flag("recent_firearm_crime", Personal, RecentFirearmIncident, 1.5),
        count_rule("misdemeanors_committed_gt3", Personal, MisdemeanorsCommitted, Cmp::Gt, 3, 1.0),
        count_rule("recent_misdemeanors_ge2", Personal, RecentMisdemeanorsCommitted, Cmp::Ge, 2, 1.0),
        count_rule("misdemeanor_victimizations_ge3", Personal, MisdemeanorVictimizations, Cmp::Ge, 3, 1.0),
        // positional
        Rule {
            id: "pagerank".to_string(),
            category: Positional,
            kind: RuleKind::PagerankValue,
        },
        flag("high_pr_friend_d1", Positional, HighPagerankFriendD1, 1.0),
        flag("cirv_friend_d1", Positional, CirvFriendD1, 0.5),
        flag("shooting_friend_d1", Positional, ShootingFriendD1, 1.0),
        // structural
        violence_buckets("group_violent_crimes", GroupViolentCrimes),
        violence_buckets("group_violent_victimizations", GroupViolentVictimizations),
        count_rule("group_recent_violent_victimizations_ge7", Structural, GroupRecentViolentVictimizations, Cmp::Ge, 7, 2.0),
        count_rule("group_recent_shootings_ge1", Structural, GroupRecentShootings, Cmp::Ge, 1, 2.0),
        count_rule("group_shootings_ge3", Structural, GroupShootings, Cmp::Ge, 3, 1.0),
        count_rule("group_members_gt20", Structural, GroupMemberCount, Cmp::Gt, 20, 1.0),
        count_rule("group_shootings_gt10", Structural, GroupShootings, Cmp::Gt, 10, 1.0),
        count_rule("group_recent_shootings_gt5", Structural, GroupRecentShootings, Cmp::Gt, 5, 1.0),
    ];

    RuleSet {
        recency_window_days: DEFAULT_RECENCY_DAYS,
        pr_threshold: DEFAULT_PR_THRESHOLD,
        rules,
    }
}

impl RuleSet {
    /// Unique ids and nonnegative weights.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for rule in &self.rules {
            if !seen.insert(rule.id.as_str()) {
                return Err(Error::DuplicateRuleId(rule.id.clone()));
            }
            let weights: Vec<f64> = match &rule.kind {
                RuleKind::Flag { weight, .. } | RuleKind::CountThreshold { weight, .. } => {
                    vec![*weight]
                }
                RuleKind::CountBuckets { buckets, .. } => {
                    buckets.iter().map(|b| b.weight).collect()
                }
                RuleKind::AgeCurve { cap, .. } => vec![*cap],
                RuleKind::PagerankValue => vec![],
            };
            for w in weights {
                if w < 0.0 || w.is_nan() {
                    return Err(Error::NegativeWeight {
                        rule_id: rule.id.clone(),
                        weight: w,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<RuleSet> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let ruleset: RuleSet = toml::from_str(&text).map_err(|e| Error::RulesetParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        ruleset.validate()?;
        Ok(ruleset)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string_pretty(self).map_err(|e| Error::RulesetParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Flattened signal bundle one person is scored on.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RuleInputs {
    pub age: Option<f64>,
    pub simplified_pagerank: f64,
    pub cirv_member: bool,
    pub recent_violent_victimization: bool,
    pub recent_violent_crime: bool,
    pub any_firearm_incident: bool,
    pub recent_firearm_incident: bool,
    pub misdemeanors_committed: u32,
    pub recent_misdemeanors_committed: u32,
    pub misdemeanor_victimizations: u32,
    pub high_pagerank_friend_d1: bool,
    pub cirv_friend_d1: bool,
    pub cirv_friend_d2: bool,
    pub cirv_friend_d3: bool,
    pub shooting_friend_d1: bool,
    pub shooting_friend_d2: bool,
    pub group_violent_crimes: u32,
    pub group_violent_victimizations: u32,
    pub group_recent_violent_victimizations: u32,
    pub group_shootings: u32,
    pub group_recent_shootings: u32,
    pub group_member_count: u32,
}

impl RuleInputs {
    pub fn assemble(
        person: &Person,
        measures: &PersonMeasures,
        history: &PersonHistory,
        group: &GroupMeasures,
    ) -> RuleInputs {
        RuleInputs {
            age: person.age_at_snapshot,
            simplified_pagerank: measures.simplified_pagerank,
            cirv_member: person.cirv_status.is_member(),
            recent_violent_victimization: history.recent_violent_victimization,
            recent_violent_crime: history.recent_violent_crime,
            any_firearm_incident: history.any_firearm_incident,
            recent_firearm_incident: history.recent_firearm_incident,
            misdemeanors_committed: history.misdemeanors_committed,
            recent_misdemeanors_committed: history.recent_misdemeanors_committed,
            misdemeanor_victimizations: history.misdemeanor_victimizations,
            high_pagerank_friend_d1: measures.high_pr_friend_d1,
            cirv_friend_d1: measures.cirv_friend_d1,
            cirv_friend_d2: measures.cirv_friend_d2,
            cirv_friend_d3: measures.cirv_friend_d3,
            shooting_friend_d1: measures.shooting_friend_d1,
            shooting_friend_d2: measures.shooting_friend_d2,
            group_violent_crimes: group.violent_crime_count,
            group_violent_victimizations: group.violent_victimization_count,
            group_recent_violent_victimizations: group.recent_violent_victimization_count,
            group_shootings: group.shooting_count,
            group_recent_shootings: group.recent_shooting_count,
            group_member_count: group.member_count,
        }
    }

    fn bool_signal(&self, signal: BoolSignal) -> bool {
        match signal {
            BoolSignal::CirvMember => self.cirv_member,
            BoolSignal::RecentViolentVictimization => self.recent_violent_victimization,
            BoolSignal::RecentViolentCrime => self.recent_violent_crime,
            BoolSignal::AnyFirearmIncident => self.any_firearm_incident,
            BoolSignal::RecentFirearmIncident => self.recent_firearm_incident,
            BoolSignal::HighPagerankFriendD1 => self.high_pagerank_friend_d1,
            BoolSignal::CirvFriendD1 => self.cirv_friend_d1,
            BoolSignal::CirvFriendD2 => self.cirv_friend_d2,
            BoolSignal::CirvFriendD3 => self.cirv_friend_d3,
            BoolSignal::ShootingFriendD1 => self.shooting_friend_d1,
            BoolSignal::ShootingFriendD2 => self.shooting_friend_d2,
        }
    }

    fn count_signal(&self, signal: CountSignal) -> u32 {
        match signal {
            CountSignal::MisdemeanorsCommitted => self.misdemeanors_committed,
            CountSignal::RecentMisdemeanorsCommitted => self.recent_misdemeanors_committed,
            CountSignal::MisdemeanorVictimizations => self.misdemeanor_victimizations,
            CountSignal::GroupViolentCrimes => self.group_violent_crimes,
            CountSignal::GroupViolentVictimizations => self.group_violent_victimizations,
            CountSignal::GroupRecentViolentVictimizations => {
                self.group_recent_violent_victimizations
            }
            CountSignal::GroupShootings => self.group_shootings,
            CountSignal::GroupRecentShootings => self.group_recent_shootings,
            CountSignal::GroupMemberCount => self.group_member_count,
        }
    }
}

/// Age contribution: `max(0, cap - age / divisor)`, clamped above at `cap`.
/// With the default cap of 7 the influence of age reaches zero at 70 and
/// stays there for older persons.
pub fn age_weight(age: f64) -> Result<f64> {
    age_curve(age, 7.0, 10.0)
}

fn age_curve(age: f64, cap: f64, divisor: f64) -> Result<f64> {
    if age < 0.0 {
        return Err(Error::NegativeAge(age));
    }
    let raw = (cap - age / divisor).clamp(0.0, cap);
    // ages carry one-decimal precision, so true weights are short decimals;
    // snap to a micro grid so they compare exactly against decimal literals
    Ok((raw * 1e6).round() / 1e6)
}

/// Per-person additive score, split by component, with a fired-rule audit
/// trail.
#[derive(Debug, Clone, PartialEq)]
pub struct ViparScore {
    pub person_id: PersonId,
    pub personal: f64,
    pub positional: f64,
    pub structural: f64,
    pub total: f64,
    pub fired_rules: Vec<(String, f64)>,
}

/// Evaluates every rule against one input bundle. The total is the exact sum
/// of the three component subtotals.
pub fn evaluate_rules(person_id: PersonId, inputs: &RuleInputs, ruleset: &RuleSet) -> ViparScore {
    let mut personal = 0.0;
    let mut positional = 0.0;
    let mut structural = 0.0;
    let mut fired_rules = Vec::new();

    for rule in &ruleset.rules {
        let contribution = match &rule.kind {
            RuleKind::Flag { signal, weight } => {
                if inputs.bool_signal(*signal) {
                    Some(*weight)
                } else {
                    None
                }
            }
            RuleKind::CountThreshold {
                signal,
                cmp,
                threshold,
                weight,
            } => {
                if cmp.holds(inputs.count_signal(*signal), *threshold) {
                    Some(*weight)
                } else {
                    None
                }
            }
            RuleKind::CountBuckets { signal, buckets } => {
                let count = inputs.count_signal(*signal);
                buckets
                    .iter()
                    .filter(|b| b.contains(count))
                    .map(|b| b.weight)
                    .fold(None, |acc: Option<f64>, w| {
                        Some(acc.map_or(w, |a| a.max(w)))
                    })
            }
            RuleKind::AgeCurve { cap, divisor } => match inputs.age {
                // negative ages cannot reach scoring; resolution clamps at 0
                Some(age) => age_curve(age, *cap, *divisor).ok().filter(|w| *w > 0.0),
                None => None,
            },
            RuleKind::PagerankValue => {
                if inputs.simplified_pagerank > 0.0 {
                    Some(inputs.simplified_pagerank)
                } else {
                    None
                }
            }
        };
        if let Some(weight) = contribution {
            match rule.category {
                RuleCategory::Personal => personal += weight,
                RuleCategory::Positional => positional += weight,
                RuleCategory::Structural => structural += weight,
            }
            fired_rules.push((rule.id.clone(), weight));
        }
    }

    ViparScore {
        person_id,
        personal,
        positional,
        structural,
        total: personal + positional + structural,
        fired_rules,
    }
}

/// Scores one resolved person.
pub fn score_person(
    person: &Person,
    measures: &PersonMeasures,
    history: &PersonHistory,
    group: &GroupMeasures,
    ruleset: &RuleSet,
) -> ViparScore {
    let inputs = RuleInputs::assemble(person, measures, history, group);
    evaluate_rules(person.person_id, &inputs, ruleset)
}

/// Top-`n` person ids by descending total; ties break toward the lower
/// person id.
pub fn rank(scores: &[ViparScore], n: usize) -> Result<Vec<PersonId>> {
    if n == 0 || n > scores.len() {
        return Err(Error::InvalidListSize {
            requested: n,
            available: scores.len(),
        });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total
            .total_cmp(&scores[a].total)
            .then(scores[a].person_id.cmp(&scores[b].person_id))
    });
    Ok(order.into_iter().take(n).map(|i| scores[i].person_id).collect())
}

/// Score export: one row per person with the component split and the fired
/// rule ids.
pub fn write_scores(path: &Path, persons: &[Person], scores: &[ViparScore]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record([
            "person_id",
            "full_name",
            "dob",
            "personal",
            "positional",
            "structural",
            "total",
            "fired_rules",
        ])
        .map_err(|e| Error::csv(path, e))?;
    for (person, score) in persons.iter().zip(scores) {
        debug_assert_eq!(person.person_id, score.person_id);
        let fired = score
            .fired_rules
            .iter()
            .map(|(id, _)| id.as_str())
            .collect::<Vec<_>>()
            .join("|");
        writer
            .write_record([
                person.person_id.to_string(),
                person.key.full_name.clone(),
                person
                    .key
                    .dob
                    .map(|d| d.format("%Y-%m-%d").to_string())
                    .unwrap_or_default(),
                format!("{:.4}", score.personal),
                format!("{:.4}", score.positional),
                format!("{:.4}", score.structural),
                format!("{:.4}", score.total),
                fired,
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
