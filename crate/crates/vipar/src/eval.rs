//! Temporal hold-out evaluation of ranked lists.
//!
//! Scoring uses events up to a cutoff date; everything after the cutoff is
//! reduced to shooting outcomes (victims and, where identified, suspects).
//! A hit is an exact normalized (name, dob) match between a predicted list
//! entry and an outcome person. Outcomes that cannot be keyed — no date of
//! birth — are excluded from the denominator and reported separately.

use std::collections::BTreeSet;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::ingest::{EventRecord, EventType, PersonKey, Role};

/// Events at or before the cutoff train the model; shooting events after it
/// become the outcome set.
#[derive(Debug, Default)]
pub struct TemporalSplit {
    pub training: Vec<EventRecord>,
    pub holdout_shootings: Vec<EventRecord>,
}

pub fn temporal_split(events: Vec<EventRecord>, cutoff: NaiveDate) -> TemporalSplit {
    let mut split = TemporalSplit::default();
    for event in events {
        if event.date <= cutoff {
            split.training.push(event);
        } else if event.event_type == EventType::Shooting {
            split.holdout_shootings.push(event);
        }
        // non-shooting events after the cutoff carry no outcome information
    }
    split
}

/// Unique outcome persons from the hold-out shootings, victims and suspects
/// separately. Suspect outcomes cover suspect and arrestee roles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutcomeSets {
    pub victims: Vec<PersonKey>,
    pub suspects: Vec<PersonKey>,
}

pub fn shooting_outcomes(holdout: &[EventRecord]) -> OutcomeSets {
    let mut victims = BTreeSet::new();
    let mut suspects = BTreeSet::new();
    for event in holdout {
        for p in &event.participants {
            match p.role {
                Role::Victim => {
                    victims.insert(p.key.clone());
                }
                Role::Suspect | Role::Arrestee => {
                    suspects.insert(p.key.clone());
                }
                Role::Stopped => {}
            }
        }
    }
    OutcomeSets {
        victims: victims.into_iter().collect(),
        suspects: suspects.into_iter().collect(),
    }
}

/// Which slice of a ranked list a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Active,
    NonActive,
    Combined,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Active => "active",
            Tier::NonActive => "non_active",
            Tier::Combined => "combined",
        }
    }
}

/// Hit-rate summary of one predicted list against one outcome set.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub list_name: String,
    pub tier: Tier,
    /// Nominal size of the predicted list, unmatchable entries included.
    pub n_list: usize,
    /// Unique keyed outcome persons (the denominator).
    pub n_outcomes: usize,
    pub n_hits: usize,
    /// Unique outcome persons dropped for lacking a date of birth.
    pub excluded_no_dob: usize,
    /// `round(100 * n_hits / n_outcomes, 1)`.
    pub hit_rate_percent: f64,
    /// Fingerprint of the keyed outcome set, for comparison safety.
    pub outcome_digest: u64,
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Counts exact (name, dob) matches between a predicted list and an outcome
/// set. Duplicate outcome entries for one person count once; predicted
/// entries without a dob can never match.
pub fn match_and_rate(
    list_name: &str,
    tier: Tier,
    predicted: &[PersonKey],
    outcomes: &[PersonKey],
) -> EvaluationReport {
    let mut keyed: BTreeSet<&PersonKey> = BTreeSet::new();
    let mut unkeyable: BTreeSet<&PersonKey> = BTreeSet::new();
    for key in outcomes {
        if key.dob.is_some() {
            keyed.insert(key);
        } else {
            unkeyable.insert(key);
        }
    }

    let predicted_keyed: BTreeSet<&PersonKey> =
        predicted.iter().filter(|k| k.dob.is_some()).collect();
    let n_hits = keyed.intersection(&predicted_keyed).count();
    let n_outcomes = keyed.len();

    let mut hasher = DefaultHasher::new();
    for key in &keyed {
        key.hash(&mut hasher);
    }
    let outcome_digest = hasher.finish();

    let hit_rate_percent = if n_outcomes == 0 {
        0.0
    } else {
        round1(100.0 * n_hits as f64 / n_outcomes as f64)
    };

    EvaluationReport {
        list_name: list_name.to_string(),
        tier,
        n_list: predicted.len(),
        n_outcomes,
        n_hits,
        excluded_no_dob: unkeyable.len(),
        hit_rate_percent,
        outcome_digest,
    }
}

/// Side-by-side hit rates of two reports over the same outcome set.
#[derive(Debug, Clone, PartialEq)]
pub struct ListComparison {
    pub first_name: String,
    pub second_name: String,
    pub first_rate: f64,
    pub second_rate: f64,
    /// `first_rate / second_rate`; infinite when the second list scored no
    /// hits.
    pub rate_ratio: f64,
}

pub fn compare_lists(first: &EvaluationReport, second: &EvaluationReport) -> Result<ListComparison> {
    if first.outcome_digest != second.outcome_digest || first.n_outcomes != second.n_outcomes {
        return Err(Error::MismatchedOutcomes);
    }
    let rate_ratio = if second.hit_rate_percent > 0.0 {
        first.hit_rate_percent / second.hit_rate_percent
    } else if first.hit_rate_percent > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    Ok(ListComparison {
        first_name: first.list_name.clone(),
        second_name: second.list_name.clone(),
        first_rate: first.hit_rate_percent,
        second_rate: second.hit_rate_percent,
        rate_ratio,
    })
}

pub const REPORT_HEADER: [&str; 7] = [
    "list_name",
    "tier",
    "n_list",
    "n_outcomes",
    "n_hits",
    "excluded_no_dob",
    "hit_rate_percent",
];

/// Reports as CSV rows.
pub fn write_reports(path: &Path, reports: &[EvaluationReport]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer.write_record(REPORT_HEADER).map_err(|e| Error::csv(path, e))?;
    for r in reports {
        writer
            .write_record([
                r.list_name.clone(),
                r.tier.as_str().to_string(),
                r.n_list.to_string(),
                r.n_outcomes.to_string(),
                r.n_hits.to_string(),
                r.excluded_no_dob.to_string(),
                format!("{:.1}", r.hit_rate_percent),
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Fixed-width table for terminal reading.
pub fn format_report_table(title: &str, reports: &[EvaluationReport]) -> String {
    let mut out = String::new();
    out.push_str(title);
    out.push('\n');
    out.push_str(&format!(
        "{:<24} {:>10} {:>7} {:>10} {:>6} {:>9}\n",
        "list", "tier", "size", "outcomes", "hits", "rate"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<24} {:>10} {:>7} {:>10} {:>6} {:>8.1}%\n",
            r.list_name,
            r.tier.as_str(),
            r.n_list,
            r.n_outcomes,
            r.n_hits,
            r.hit_rate_percent
        ));
    }
    out
}
