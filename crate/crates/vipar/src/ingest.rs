//! Dataset parsing and identity resolution.
//!
//! Police contact data arrives as per-dataset CSV files (arrests, field
//! interviews, offenses, victimizations, shootings) plus a chronic-offender
//! roster. Every file is UTF-8, comma-delimited with a header row, dates in
//! ISO-8601. Participants are encoded as repeated quoted `name,dob,role`
//! cells after the fixed columns, so one row is one incident with all of its
//! parties.
//!
//! Identity resolution is exact: two records refer to the same person iff the
//! normalized full name and the date of birth both match.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which dataset an event row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    Arrest,
    FieldInterview,
    Offense,
    Victimization,
    Shooting,
}

impl EventType {
    pub const ALL: [EventType; 5] = [
        EventType::Arrest,
        EventType::FieldInterview,
        EventType::Offense,
        EventType::Victimization,
        EventType::Shooting,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventType::Arrest => "arrest",
            EventType::FieldInterview => "field_interview",
            EventType::Offense => "offense",
            EventType::Victimization => "victimization",
            EventType::Shooting => "shooting",
        }
    }

    pub fn parse(s: &str) -> Option<EventType> {
        match s {
            "arrest" => Some(EventType::Arrest),
            "field_interview" => Some(EventType::FieldInterview),
            "offense" => Some(EventType::Offense),
            "victimization" => Some(EventType::Victimization),
            "shooting" => Some(EventType::Shooting),
            _ => None,
        }
    }

    /// Conventional file name for this dataset inside an events directory.
    pub fn file_name(self) -> &'static str {
        match self {
            EventType::Arrest => "arrests.csv",
            EventType::FieldInterview => "field_interviews.csv",
            EventType::Offense => "offenses.csv",
            EventType::Victimization => "victimizations.csv",
            EventType::Shooting => "shootings.csv",
        }
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Typed crime attributes of an event, pipe-separated in the CSV cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrimeFlag {
    Violent,
    Misdemeanor,
    Firearm,
    Shooting,
}

impl CrimeFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            CrimeFlag::Violent => "violent",
            CrimeFlag::Misdemeanor => "misdemeanor",
            CrimeFlag::Firearm => "firearm",
            CrimeFlag::Shooting => "shooting",
        }
    }

    pub fn parse(s: &str) -> Option<CrimeFlag> {
        match s {
            "violent" => Some(CrimeFlag::Violent),
            "misdemeanor" => Some(CrimeFlag::Misdemeanor),
            "firearm" => Some(CrimeFlag::Firearm),
            "shooting" => Some(CrimeFlag::Shooting),
            _ => None,
        }
    }
}

/// How a person appears in an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Suspect,
    Victim,
    Arrestee,
    Stopped,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Suspect => "suspect",
            Role::Victim => "victim",
            Role::Arrestee => "arrestee",
            Role::Stopped => "stopped",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "suspect" => Some(Role::Suspect),
            "victim" => Some(Role::Victim),
            "arrestee" => Some(Role::Arrestee),
            "stopped" => Some(Role::Stopped),
            _ => None,
        }
    }

    /// Roles that indicate the person committed (or is suspected of
    /// committing) the offense.
    pub fn is_committing(self) -> bool {
        matches!(self, Role::Suspect | Role::Arrestee)
    }
}

/// Exact-match identity key: normalized full name plus date of birth.
///
/// Two keys denote the same person iff the name and the dob both match; a
/// missing dob matches only another missing dob under the same name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PersonKey {
    pub full_name: String,
    pub dob: Option<NaiveDate>,
}

impl PersonKey {
    /// Builds a key from a raw name, normalizing it first. Errors if the
    /// name is empty after normalization.
    pub fn new(raw_name: &str, dob: Option<NaiveDate>) -> Result<PersonKey> {
        let full_name = normalize_name(raw_name);
        if full_name.is_empty() {
            return Err(Error::EmptyPersonName);
        }
        Ok(PersonKey { full_name, dob })
    }
}

impl fmt::Display for PersonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dob {
            Some(d) => write!(f, "{} ({d})", self.full_name),
            None => write!(f, "{} (dob unknown)", self.full_name),
        }
    }
}

/// Normalizes a person name for exact matching: uppercase, punctuation
/// replaced by spaces, internal whitespace collapsed, trimmed.
pub fn normalize_name(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for ch in raw.chars() {
        if ch.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            for up in ch.to_uppercase() {
                out.push(up);
            }
        } else {
            // whitespace and punctuation both act as separators
            pending_space = true;
        }
    }
    out
}

/// One participant slot on an event row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub key: PersonKey,
    pub role: Role,
}

/// One police contact: arrest, stop, offense, victimization, or shooting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRecord {
    pub event_id: String,
    pub event_type: EventType,
    pub date: NaiveDate,
    pub crime_flags: BTreeSet<CrimeFlag>,
    pub participants: Vec<Participant>,
}

impl EventRecord {
    pub fn has_flag(&self, flag: CrimeFlag) -> bool {
        self.crime_flags.contains(&flag)
    }
}

/// A row that failed to parse; the rest of the file is still usable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// 1-based data row number (header excluded).
    pub row: usize,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

/// Well-formed events plus per-row errors from one file.
#[derive(Debug, Default)]
pub struct ParseOutcome {
    pub events: Vec<EventRecord>,
    pub row_errors: Vec<RowError>,
}

const EVENT_HEADER: [&str; 5] = ["event_id", "event_type", "date", "crime_flags", "participants"];
const CIRV_HEADER: [&str; 3] = ["full_name", "dob", "status"];

/// Parses one event dataset. `schema` declares which dataset the file is;
/// rows carrying a different event type are rejected as row errors.
///
/// Shooting events are normalized to carry the violent, firearm, and
/// shooting flags.
pub fn parse_events(path: &Path, schema: EventType) -> Result<ParseOutcome> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::UnreadableFile {
                path: path.to_path_buf(),
                source: std::io::Error::other(e.to_string()),
            },
            _ => Error::csv(path, e),
        })?;

    let header = reader.headers().map_err(|e| Error::csv(path, e))?;
    if header.len() < EVENT_HEADER.len()
        || EVENT_HEADER.iter().zip(header.iter()).any(|(want, got)| *want != got)
    {
        return Err(Error::HeaderMismatch {
            path: path.to_path_buf(),
            expected: EVENT_HEADER.iter().map(|s| s.to_string()).collect(),
        });
    }

    let mut outcome = ParseOutcome::default();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                outcome.row_errors.push(RowError {
                    row,
                    message: format!("malformed record: {e}"),
                });
                continue;
            }
        };
        match parse_event_row(&record, schema) {
            Ok(event) => outcome.events.push(event),
            Err(message) => outcome.row_errors.push(RowError { row, message }),
        }
    }
    Ok(outcome)
}

fn parse_event_row(record: &csv::StringRecord, schema: EventType) -> std::result::Result<EventRecord, String> {
    let event_id = record.get(0).unwrap_or("").trim().to_string();
    if event_id.is_empty() {
        return Err("missing event_id".to_string());
    }
    let type_cell = record.get(1).unwrap_or("").trim();
    let event_type =
        EventType::parse(type_cell).ok_or_else(|| format!("unknown event type {type_cell:?}"))?;
    if event_type != schema {
        return Err(format!(
            "event type mismatch: file declares {schema}, row says {event_type}"
        ));
    }
    let date_cell = record.get(2).unwrap_or("").trim();
    let date = NaiveDate::parse_from_str(date_cell, "%Y-%m-%d")
        .map_err(|_| format!("invalid date {date_cell:?}"))?;

    let mut crime_flags = BTreeSet::new();
    let flags_cell = record.get(3).unwrap_or("").trim();
    if !flags_cell.is_empty() {
        for part in flags_cell.split('|') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let flag =
                CrimeFlag::parse(part).ok_or_else(|| format!("unknown crime flag {part:?}"))?;
            crime_flags.insert(flag);
        }
    }
    if event_type == EventType::Shooting {
        crime_flags.insert(CrimeFlag::Violent);
        crime_flags.insert(CrimeFlag::Firearm);
        crime_flags.insert(CrimeFlag::Shooting);
    }

    let mut participants = Vec::new();
    for cell in record.iter().skip(4) {
        let cell = cell.trim();
        if cell.is_empty() {
            continue;
        }
        participants.push(parse_participant(cell)?);
    }
    if participants.is_empty() {
        return Err("no participants".to_string());
    }

    Ok(EventRecord {
        event_id,
        event_type,
        date,
        crime_flags,
        participants,
    })
}

/// A participant cell is `name,dob,role`; the name may itself contain commas,
/// so the cell is split from the right.
fn parse_participant(cell: &str) -> std::result::Result<Participant, String> {
    let (rest, role_part) = cell
        .rsplit_once(',')
        .ok_or_else(|| format!("malformed participant {cell:?}"))?;
    let (name_part, dob_part) = rest
        .rsplit_once(',')
        .ok_or_else(|| format!("malformed participant {cell:?}"))?;
    let role_str = role_part.trim();
    let role = Role::parse(role_str).ok_or_else(|| format!("unknown role {role_str:?}"))?;
    let dob_str = dob_part.trim();
    let dob = if dob_str.is_empty() {
        None
    } else {
        Some(
            NaiveDate::parse_from_str(dob_str, "%Y-%m-%d")
                .map_err(|_| format!("invalid date {dob_str:?}"))?,
        )
    };
    let key = PersonKey::new(name_part, dob).map_err(|_| "empty participant name".to_string())?;
    Ok(Participant { key, role })
}

/// Serializes events back into the dataset CSV format. Round-trips through
/// [`parse_events`] bit-for-bit on the parsed representation.
pub fn write_events(path: &Path, events: &[EventRecord]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    writer
        .write_record(EVENT_HEADER)
        .map_err(|e| Error::csv(path, e))?;
    for event in events {
        let flags = event
            .crime_flags
            .iter()
            .map(|f| f.as_str())
            .collect::<Vec<_>>()
            .join("|");
        let mut record = vec![
            event.event_id.clone(),
            event.event_type.as_str().to_string(),
            event.date.format("%Y-%m-%d").to_string(),
            flags,
        ];
        for p in &event.participants {
            let dob = p.key.dob.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default();
            record.push(format!("{},{},{}", p.key.full_name, dob, p.role.as_str()));
        }
        writer.write_record(&record).map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Membership status on the chronic-offender (CIRV) roster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CirvStatus {
    NotListed,
    Active,
    NonActive,
}

impl CirvStatus {
    pub fn is_member(self) -> bool {
        !matches!(self, CirvStatus::NotListed)
    }
}

/// Parsed CIRV roster: deduplicated entries plus row errors.
#[derive(Debug, Default)]
pub struct CirvOutcome {
    /// (person, active) sorted by key; duplicate rows collapse with active
    /// status winning.
    pub entries: Vec<(PersonKey, bool)>,
    pub row_errors: Vec<RowError>,
}

impl CirvOutcome {
    pub fn active_count(&self) -> usize {
        self.entries.iter().filter(|(_, active)| *active).count()
    }

    pub fn non_active_count(&self) -> usize {
        self.entries.len() - self.active_count()
    }
}

/// Parses the CIRV roster CSV (`full_name,dob,status` with status `active`
/// or `non_active`).
pub fn load_cirv(path: &Path) -> Result<CirvOutcome> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::UnreadableFile {
                path: path.to_path_buf(),
                source: std::io::Error::other(e.to_string()),
            },
            _ => Error::csv(path, e),
        })?;
    let header = reader.headers().map_err(|e| Error::csv(path, e))?;
    if header.len() < CIRV_HEADER.len()
        || CIRV_HEADER.iter().zip(header.iter()).any(|(want, got)| *want != got)
    {
        return Err(Error::HeaderMismatch {
            path: path.to_path_buf(),
            expected: CIRV_HEADER.iter().map(|s| s.to_string()).collect(),
        });
    }

    let mut dedup: BTreeMap<PersonKey, bool> = BTreeMap::new();
    let mut row_errors = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                row_errors.push(RowError {
                    row,
                    message: format!("malformed record: {e}"),
                });
                continue;
            }
        };
        match parse_cirv_row(&record) {
            Ok((key, active)) => {
                // active status dominates over non-active duplicates
                let slot = dedup.entry(key).or_insert(active);
                *slot = *slot || active;
            }
            Err(message) => row_errors.push(RowError { row, message }),
        }
    }
    Ok(CirvOutcome {
        entries: dedup.into_iter().collect(),
        row_errors,
    })
}

fn parse_cirv_row(record: &csv::StringRecord) -> std::result::Result<(PersonKey, bool), String> {
    let name = record.get(0).unwrap_or("");
    let dob_str = record.get(1).unwrap_or("").trim();
    let dob = if dob_str.is_empty() {
        None
    } else {
        Some(
            NaiveDate::parse_from_str(dob_str, "%Y-%m-%d")
                .map_err(|_| format!("invalid date {dob_str:?}"))?,
        )
    };
    let status = record.get(2).map(str::trim).unwrap_or("");
    let active = match status {
        "active" => true,
        "non_active" => false,
        "" => return Err("missing active flag".to_string()),
        other => return Err(format!("unknown status {other:?}")),
    };
    let key = PersonKey::new(name, dob).map_err(|_| "empty person name".to_string())?;
    Ok((key, active))
}

/// Writes a CIRV roster CSV.
pub fn write_cirv(path: &Path, entries: &[(PersonKey, bool)]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer.write_record(CIRV_HEADER).map_err(|e| Error::csv(path, e))?;
    for (key, active) in entries {
        let dob = key.dob.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default();
        writer
            .write_record([
                key.full_name.as_str(),
                dob.as_str(),
                if *active { "active" } else { "non_active" },
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Dense person identifier assigned during identity resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PersonId(pub u32);

impl PersonId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One event appearance of a person.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Participation {
    /// Index into the event list the person was resolved against.
    pub event_idx: usize,
    pub date: NaiveDate,
    pub role: Role,
}

/// An identity-resolved individual.
#[derive(Debug, Clone)]
pub struct Person {
    pub person_id: PersonId,
    pub key: PersonKey,
    /// Age in years at the snapshot date, one-decimal precision. `None` when
    /// the date of birth is unknown; such persons are still scored but are
    /// un-matchable during evaluation.
    pub age_at_snapshot: Option<f64>,
    /// Sorted by (date, event index).
    pub participations: Vec<Participation>,
    pub cirv_status: CirvStatus,
}

/// Lookup structures produced alongside the person list.
#[derive(Debug, Default)]
pub struct PersonIndex {
    pub by_key: HashMap<PersonKey, PersonId>,
    /// For each event (parallel to the input), the resolved participant slots.
    pub event_participants: Vec<Vec<(PersonId, Role)>>,
}

/// Collapses event participants into unique persons.
///
/// Person ids are dense and assigned in key order, so the output is
/// independent of event order. Every participant slot becomes exactly one
/// participation.
pub fn resolve_persons(events: &[EventRecord], snapshot: NaiveDate) -> (Vec<Person>, PersonIndex) {
    let mut keys: BTreeSet<&PersonKey> = BTreeSet::new();
    for event in events {
        for p in &event.participants {
            keys.insert(&p.key);
        }
    }

    let mut by_key: HashMap<PersonKey, PersonId> = HashMap::with_capacity(keys.len());
    let mut persons: Vec<Person> = Vec::with_capacity(keys.len());
    for (i, key) in keys.into_iter().enumerate() {
        let person_id = PersonId(i as u32);
        by_key.insert(key.clone(), person_id);
        persons.push(Person {
            person_id,
            key: key.clone(),
            age_at_snapshot: key.dob.map(|dob| age_at(dob, snapshot)),
            participations: Vec::new(),
            cirv_status: CirvStatus::NotListed,
        });
    }

    let mut event_participants = Vec::with_capacity(events.len());
    for (event_idx, event) in events.iter().enumerate() {
        let mut slots = Vec::with_capacity(event.participants.len());
        for p in &event.participants {
            let id = by_key[&p.key];
            slots.push((id, p.role));
            persons[id.index()].participations.push(Participation {
                event_idx,
                date: event.date,
                role: p.role,
            });
        }
        event_participants.push(slots);
    }
    for person in &mut persons {
        person.participations.sort_by_key(|p| (p.date, p.event_idx));
    }

    (
        persons,
        PersonIndex {
            by_key,
            event_participants,
        },
    )
}

/// Age in years at `snapshot`, rounded to one decimal and clamped at zero.
pub fn age_at(dob: NaiveDate, snapshot: NaiveDate) -> f64 {
    let days = (snapshot - dob).num_days() as f64;
    let years = days / 365.25;
    (years.max(0.0) * 10.0).round() / 10.0
}

/// Applies CIRV roster statuses to resolved persons. Returns how many roster
/// entries matched someone in the population (active, non-active).
pub fn apply_cirv(
    persons: &mut [Person],
    index: &PersonIndex,
    roster: &[(PersonKey, bool)],
) -> (usize, usize) {
    let mut matched_active = 0;
    let mut matched_non_active = 0;
    for (key, active) in roster {
        if let Some(id) = index.by_key.get(key) {
            persons[id.index()].cirv_status = if *active {
                matched_active += 1;
                CirvStatus::Active
            } else {
                matched_non_active += 1;
                CirvStatus::NonActive
            };
        }
    }
    (matched_active, matched_non_active)
}

/// True when `date` falls inside the closed study window.
pub fn within_window(date: NaiveDate, start: Option<NaiveDate>, end: Option<NaiveDate>) -> bool {
    start.is_none_or(|s| date >= s) && end.is_none_or(|e| date <= e)
}

/// Leap-year-safe helper used by the synthetic generator when deriving dates
/// of birth.
pub fn subtract_days(date: NaiveDate, days: i64) -> NaiveDate {
    date - chrono::Duration::days(days)
}

/// Stable textual export of a person for audit CSVs.
pub fn person_record(person: &Person) -> Vec<String> {
    vec![
        person.person_id.to_string(),
        person.key.full_name.clone(),
        person
            .key
            .dob
            .map(|d| d.format("%Y-%m-%d").to_string())
            .unwrap_or_default(),
        person
            .age_at_snapshot
            .map(|a| format!("{a:.1}"))
            .unwrap_or_default(),
        match person.cirv_status {
            CirvStatus::NotListed => "not_listed".to_string(),
            CirvStatus::Active => "active".to_string(),
            CirvStatus::NonActive => "non_active".to_string(),
        },
        person.participations.len().to_string(),
    ]
}

/// Header matching [`person_record`].
pub const PERSON_RECORD_HEADER: [&str; 6] =
    ["person_id", "full_name", "dob", "age_at_snapshot", "cirv_status", "participations"];
