//! Seeded synthetic corpus generator.
//!
//! Produces the full set of dataset files (four event CSVs, shootings,
//! chronic-offender roster) plus a ground-truth file, with planted group
//! structure and a planted per-person risk signal. Post-cutoff shooting
//! victims are drawn with probability logistic in that planted risk — youth,
//! own violence, and violent-group membership — so ranked-list evaluation
//! and regression recovery have a known answer.
//!
//! Generation runs single-threaded off one seeded stream; identical configs
//! produce byte-identical files.

use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{
    write_cirv, write_events, CrimeFlag, EventRecord, EventType, Participant, PersonKey, Role,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_persons: usize,
    /// Planted co-offending groups; sizes are skewed but bounded so the
    /// structural measures keep contrast between groups.
    pub n_groups: usize,
    pub group_size_alpha: f64,
    /// Co-offending events per person-year within a group.
    pub event_rate: f64,
    /// Single-participant events per person-year.
    pub solo_event_rate: f64,
    /// Chance a group event pulls one participant from another group.
    pub bridge_fraction: f64,
    /// Share of groups with elevated violence.
    pub violent_group_fraction: f64,
    /// Violence propensity inside violent groups, in [0, 1].
    pub violent_group_propensity: f64,
    /// Violence propensity everywhere else, in [0, 1].
    pub base_propensity: f64,
    /// Training-window shootings per person-year, scaled by propensity.
    pub shooting_rate: f64,
    pub age_min: f64,
    pub age_max: f64,
    /// Exponent biasing ages toward the young end (higher = younger).
    pub age_skew: f64,
    pub missing_dob_fraction: f64,
    pub window_start: NaiveDate,
    pub cutoff: NaiveDate,
    pub window_end: NaiveDate,
    /// Roster size and its active tier, selected by noisy planted risk.
    pub cirv_size: usize,
    pub cirv_active_size: usize,
    /// Uniform noise amplitude on the roster selection score.
    pub cirv_noise: f64,
    /// Post-cutoff victimization model: p = sigmoid(intercept + slope * risk).
    pub outcome_intercept: f64,
    pub outcome_slope: f64,
    /// Chance a hold-out shooting has an identified suspect.
    pub suspect_fraction: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 42,
            n_persons: 10_000,
            n_groups: 1_250,
            group_size_alpha: 4.0,
            event_rate: 0.25,
            solo_event_rate: 0.15,
            bridge_fraction: 0.005,
            violent_group_fraction: 0.15,
            violent_group_propensity: 0.7,
            base_propensity: 0.05,
            shooting_rate: 0.02,
            age_min: 13.0,
            age_max: 80.0,
            age_skew: 1.8,
            missing_dob_fraction: 0.02,
            window_start: NaiveDate::from_ymd_opt(2010, 1, 1).unwrap(),
            cutoff: NaiveDate::from_ymd_opt(2014, 12, 31).unwrap(),
            window_end: NaiveDate::from_ymd_opt(2015, 12, 31).unwrap(),
            cirv_size: 3_215,
            cirv_active_size: 1_379,
            cirv_noise: 0.25,
            outcome_intercept: -6.3,
            outcome_slope: 8.0,
            suspect_fraction: 0.35,
        }
    }
}

impl SynthConfig {
    /// Small preset for fast tests: same shape at a tenth of the scale.
    pub fn small(seed: u64) -> Self {
        SynthConfig {
            seed,
            n_persons: 1_000,
            n_groups: 125,
            cirv_size: 322,
            cirv_active_size: 138,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InfeasibleConfig(msg.to_string()));
        if self.n_persons == 0 {
            return fail("n_persons must be positive");
        }
        if self.n_groups == 0 || self.n_groups > self.n_persons {
            return fail("n_groups must be in 1..=n_persons");
        }
        if !(self.window_start < self.cutoff && self.cutoff < self.window_end) {
            return fail("window must satisfy start < cutoff < end");
        }
        if self.cirv_size > self.n_persons {
            return fail("cirv_size exceeds the population");
        }
        if self.cirv_active_size > self.cirv_size {
            return fail("cirv_active_size exceeds cirv_size");
        }
        for (name, rate) in [
            ("event_rate", self.event_rate),
            ("solo_event_rate", self.solo_event_rate),
            ("shooting_rate", self.shooting_rate),
            ("cirv_noise", self.cirv_noise),
        ] {
            if !(rate >= 0.0 && rate.is_finite()) {
                return fail(&format!("{name} must be a nonnegative finite number"));
            }
        }
        for (name, frac) in [
            ("bridge_fraction", self.bridge_fraction),
            ("violent_group_fraction", self.violent_group_fraction),
            ("violent_group_propensity", self.violent_group_propensity),
            ("base_propensity", self.base_propensity),
            ("missing_dob_fraction", self.missing_dob_fraction),
            ("suspect_fraction", self.suspect_fraction),
        ] {
            if !(0.0..=1.0).contains(&frac) {
                return fail(&format!("{name} must lie in [0, 1]"));
            }
        }
        if !(self.age_min >= 0.0 && self.age_max > self.age_min && self.age_skew > 0.0) {
            return fail("age distribution parameters are inconsistent");
        }
        Ok(())
    }

    fn training_years(&self) -> f64 {
        (self.cutoff - self.window_start).num_days() as f64 / 365.25
    }
}

/// What the generator wrote, with planted ground truth retained in memory.
#[derive(Debug)]
pub struct SynthOutput {
    pub files: Vec<PathBuf>,
    /// Planted risk per synthetic person, parallel to generation order.
    pub planted_risk: Vec<f64>,
    /// Person key per synthetic person.
    pub keys: Vec<PersonKey>,
    pub n_training_events: usize,
    pub n_training_shootings: usize,
    pub n_holdout_shootings: usize,
    pub n_holdout_victims: usize,
    pub n_holdout_suspects: usize,
}

const SURNAMES: [&str; 60] = [
    "ADLER", "BAKER", "BARNES", "BECKER", "BELLOWS", "BENSON", "BISHOP", "BOONE", "BOWERS",
    "BRENNAN", "CALDWELL", "CARVER", "CHAPMAN", "COLEMAN", "CONWAY", "CRANE", "DALTON", "DAWSON",
    "DELGADO", "DONOVAN", "DRAKE", "DUFFY", "EASTON", "FARLEY", "FINLEY", "FLETCHER", "FOSTER",
    "GARNER", "GIBSON", "GRADY", "HALSEY", "HARMON", "HOLDEN", "INGRAM", "JARVIS", "KEATING",
    "LANDRY", "LOCKHART", "MARSH", "MCCABE", "NOLAN", "OAKES", "PALMER", "QUIGLEY", "RAMSEY",
    "RHODES", "SAWYER", "SHEPARD", "SLOANE", "TANNER", "THAYER", "UNDERHILL", "VANCE", "WALSH",
    "WHEELER", "WHITFIELD", "YATES", "YORK", "ZELLER", "ZIMMER",
];

const GIVEN_NAMES: [&str; 50] = [
    "ALEX", "AMOS", "ANDRE", "BENNY", "BLAKE", "CALEB", "CARLA", "CELIA", "DANTE", "DARLA",
    "EDDIE", "ELENA", "EZRA", "FAYE", "FELIX", "GINA", "GLEN", "HANK", "HAZEL", "IRIS", "IVAN",
    "JONAS", "JUNE", "KARL", "KIRA", "LANE", "LENA", "LEVI", "LOLA", "MARCO", "MAVIS", "MILO",
    "NADIA", "NEIL", "NORA", "OTIS", "PALOMA", "QUINN", "RALPH", "RENA", "RUBY", "SAUL", "SELMA",
    "THEO", "TESSA", "UMA", "VERA", "WADE", "WILLA", "ZANE",
];

/// Knuth sampling in chunks so large means stay numerically safe. A zero
/// mean draws nothing from the stream and returns zero.
fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> u32 {
    let mut remaining = mean;
    let mut count = 0u32;
    while remaining > 0.0 {
        let chunk = remaining.min(30.0);
        remaining -= chunk;
        let limit = (-chunk).exp();
        let mut product = 1.0f64;
        loop {
            product *= rng.random::<f64>();
            if product <= limit {
                break;
            }
            count += 1;
        }
    }
    count
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn uniform_date(rng: &mut ChaCha8Rng, from: NaiveDate, to: NaiveDate) -> NaiveDate {
    let span = (to - from).num_days();
    from + chrono::Duration::days(rng.random_range(0..=span))
}

/// Dates cluster around a group's heat period: 45% triangular around the
/// center, the rest uniform background, clamped to the window.
fn heat_biased_date(
    rng: &mut ChaCha8Rng,
    from: NaiveDate,
    to: NaiveDate,
    heat_center: NaiveDate,
) -> NaiveDate {
    if rng.random::<f64>() < 0.45 {
        let offset =
            ((rng.random::<f64>() + rng.random::<f64>() - 1.0) * 270.0).round() as i64;
        (heat_center + chrono::Duration::days(offset)).clamp(from, to)
    } else {
        uniform_date(rng, from, to)
    }
}

struct SynthPerson {
    key: PersonKey,
    age: f64,
    group: usize,
    violent_events: u32,
    recent_violent_events: u32,
}

/// Generates the corpus into `out_dir` (created if missing). File names are
/// fixed: the four event datasets, `shootings.csv`, `cirv.csv`, and
/// `ground_truth.csv`.
pub fn generate(config: &SynthConfig, out_dir: &Path) -> Result<SynthOutput> {
    config.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // --- groups: skewed but bounded size weights, then per-person
    // assignment; a handful of groups run several times the typical size
    // without one component swallowing the population ---
    let weights: Vec<f64> = (0..config.n_groups)
        .map(|_| 0.3 + 3.0 * rng.random::<f64>().powf(config.group_size_alpha))
        .collect();
    let total_weight: f64 = weights.iter().sum();
    let cumulative: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / total_weight;
            Some(*acc)
        })
        .collect();
    let pick_group = |rng: &mut ChaCha8Rng| -> usize {
        let u: f64 = rng.random();
        cumulative.partition_point(|&c| c < u).min(config.n_groups - 1)
    };

    let propensities: Vec<f64> = (0..config.n_groups)
        .map(|_| {
            if rng.random::<f64>() < config.violent_group_fraction {
                config.violent_group_propensity
            } else {
                config.base_propensity
            }
        })
        .collect();

    // street dynamics: each group's violence concentrates around a heat
    // period; groups hot near the cutoff drive the hold-out outcomes, and a
    // list frozen earlier cannot see them
    let window_days = (config.window_end - config.window_start).num_days();
    let heat_centers: Vec<NaiveDate> = (0..config.n_groups)
        .map(|_| config.window_start + chrono::Duration::days(rng.random_range(0..=window_days)))
        .collect();
    let heat_proximity: Vec<f64> = heat_centers
        .iter()
        .map(|&heat| {
            let gap = (config.cutoff - heat).num_days().abs() as f64;
            (1.0 - gap / 730.0).max(0.0)
        })
        .collect();

    // --- persons: unique keys, ages skewed young ---
    let mut used_keys: HashSet<(String, Option<NaiveDate>)> = HashSet::new();
    let mut persons: Vec<SynthPerson> = Vec::with_capacity(config.n_persons);
    let mut group_members: Vec<Vec<usize>> = vec![Vec::new(); config.n_groups];
    for i in 0..config.n_persons {
        let u: f64 = rng.random();
        let age = config.age_min + (config.age_max - config.age_min) * u.powf(config.age_skew);
        let dob = if rng.random::<f64>() < config.missing_dob_fraction {
            None
        } else {
            Some(config.cutoff - chrono::Duration::days((age * 365.25).round() as i64))
        };
        let name = loop {
            let surname = SURNAMES[rng.random_range(0..SURNAMES.len())];
            let given = GIVEN_NAMES[rng.random_range(0..GIVEN_NAMES.len())];
            let initial = (b'A' + rng.random_range(0..26u8)) as char;
            let candidate = format!("{surname} {given} {initial}");
            if used_keys.insert((candidate.clone(), dob)) {
                break candidate;
            }
        };
        let group = pick_group(&mut rng);
        group_members[group].push(i);
        persons.push(SynthPerson {
            key: PersonKey::new(&name, dob)?,
            age,
            group,
            violent_events: 0,
            recent_violent_events: 0,
        });
    }

    // --- training events ---
    let years = config.training_years();
    let mut events: Vec<EventRecord> = Vec::new();
    let mut event_counter = 0usize;
    let next_event_id = |counter: &mut usize| {
        *counter += 1;
        format!("E{:07}", *counter)
    };

    let last_training_day = config.cutoff;
    let recency_start = config.cutoff - chrono::Duration::days(365);
    for g in 0..config.n_groups {
        let members = &group_members[g];
        if members.len() < 2 {
            continue;
        }
        let propensity = propensities[g];
        let n_events = poisson(&mut rng, config.event_rate * members.len() as f64 * years);
        for _ in 0..n_events {
            let mut size = 2usize;
            let u: f64 = rng.random();
            if u < 0.10 {
                size = 4;
            } else if u < 0.35 {
                size = 3;
            }
            size = size.min(members.len());

            // partial shuffle for distinct members
            let mut chosen: Vec<usize> = Vec::with_capacity(size);
            let mut pool: Vec<usize> = members.clone();
            for _ in 0..size {
                let j = rng.random_range(0..pool.len());
                chosen.push(pool.swap_remove(j));
            }
            if rng.random::<f64>() < config.bridge_fraction {
                let outsider = rng.random_range(0..config.n_persons);
                if !chosen.contains(&outsider) {
                    let last = chosen.len() - 1;
                    chosen[last] = outsider;
                }
            }

            let type_draw: f64 = rng.random();
            let event_type = if type_draw < 0.45 {
                EventType::FieldInterview
            } else if type_draw < 0.70 {
                EventType::Offense
            } else if type_draw < 0.90 {
                EventType::Victimization
            } else {
                EventType::Arrest
            };
            let date =
                heat_biased_date(&mut rng, config.window_start, last_training_day, heat_centers[g]);

            // stops carry no crime attributes; the other datasets do
            let mut crime_flags = BTreeSet::new();
            let mut violent = false;
            if event_type != EventType::FieldInterview {
                violent = rng.random::<f64>() < propensity;
                let firearm = violent && rng.random::<f64>() < 0.35;
                let misdemeanor = rng.random::<f64>() < if violent { 0.15 } else { 0.6 };
                if violent {
                    crime_flags.insert(CrimeFlag::Violent);
                }
                if firearm {
                    crime_flags.insert(CrimeFlag::Firearm);
                }
                if misdemeanor {
                    crime_flags.insert(CrimeFlag::Misdemeanor);
                }
            }

            let participants: Vec<Participant> = chosen
                .iter()
                .enumerate()
                .map(|(slot, &p)| Participant {
                    key: persons[p].key.clone(),
                    role: match event_type {
                        EventType::Arrest => Role::Arrestee,
                        EventType::FieldInterview => Role::Stopped,
                        EventType::Offense => Role::Suspect,
                        EventType::Victimization => {
                            if slot == 0 {
                                Role::Victim
                            } else {
                                Role::Suspect
                            }
                        }
                        EventType::Shooting => unreachable!("shootings generated separately"),
                    },
                })
                .collect();

            if violent {
                for &p in &chosen {
                    persons[p].violent_events += 1;
                    if date >= recency_start {
                        persons[p].recent_violent_events += 1;
                    }
                }
            }

            events.push(EventRecord {
                event_id: next_event_id(&mut event_counter),
                event_type,
                date,
                crime_flags,
                participants,
            });
        }
    }

    // solo contacts keep isolated persons visible to the pipeline
    for i in 0..config.n_persons {
        let n = poisson(&mut rng, config.solo_event_rate * years);
        for _ in 0..n {
            let type_draw: f64 = rng.random();
            let event_type = if type_draw < 0.4 {
                EventType::Arrest
            } else if type_draw < 0.8 {
                EventType::FieldInterview
            } else {
                EventType::Victimization
            };
            let date = uniform_date(&mut rng, config.window_start, last_training_day);
            let mut crime_flags = BTreeSet::new();
            if event_type != EventType::FieldInterview {
                let propensity = propensities[persons[i].group];
                if rng.random::<f64>() < propensity * 0.5 {
                    crime_flags.insert(CrimeFlag::Violent);
                    persons[i].violent_events += 1;
                    if date >= recency_start {
                        persons[i].recent_violent_events += 1;
                    }
                }
                if rng.random::<f64>() < 0.5 {
                    crime_flags.insert(CrimeFlag::Misdemeanor);
                }
            }
            let role = match event_type {
                EventType::Arrest => Role::Arrestee,
                EventType::FieldInterview => Role::Stopped,
                _ => Role::Victim,
            };
            events.push(EventRecord {
                event_id: next_event_id(&mut event_counter),
                event_type,
                date,
                crime_flags,
                participants: vec![Participant {
                    key: persons[i].key.clone(),
                    role,
                }],
            });
        }
    }

    // training-window shootings, concentrated in violent groups
    let mut shootings: Vec<EventRecord> = Vec::new();
    for g in 0..config.n_groups {
        let members = &group_members[g];
        if members.is_empty() {
            continue;
        }
        let mean = config.shooting_rate * members.len() as f64 * years * propensities[g];
        let n = poisson(&mut rng, mean);
        for _ in 0..n {
            let date =
                heat_biased_date(&mut rng, config.window_start, last_training_day, heat_centers[g]);
            let victim = members[rng.random_range(0..members.len())];
            let mut involved = vec![victim];
            let mut participants = vec![Participant {
                key: persons[victim].key.clone(),
                role: Role::Victim,
            }];
            if members.len() >= 2 && rng.random::<f64>() < 0.5 {
                let shooter = loop {
                    let s = members[rng.random_range(0..members.len())];
                    if s != victim {
                        break s;
                    }
                };
                participants.push(Participant {
                    key: persons[shooter].key.clone(),
                    role: Role::Suspect,
                });
                involved.push(shooter);
            }
            for &p in &involved {
                persons[p].violent_events += 1;
                if date >= recency_start {
                    persons[p].recent_violent_events += 1;
                }
            }
            shootings.push(EventRecord {
                event_id: next_event_id(&mut event_counter),
                event_type: EventType::Shooting,
                date,
                crime_flags: BTreeSet::new(), // normalized on parse
                participants,
            });
        }
    }
    let n_training_shootings = shootings.len();

    // --- planted risk: youth + prior violence (recent counts double) +
    // membership in a currently hot violent group ---
    let planted_risk: Vec<f64> = persons
        .iter()
        .map(|p| {
            let youth = (config.age_max - p.age) / (config.age_max - config.age_min);
            let own_violence =
                (f64::from(p.violent_events + p.recent_violent_events) / 4.0).min(1.0);
            let group_violence =
                propensities[p.group] * (0.4 + 0.6 * heat_proximity[p.group]);
            0.35 * youth + 0.35 * own_violence + 0.30 * group_violence
        })
        .collect();

    // --- hold-out shootings from the outcome model ---
    let holdout_start = config.cutoff + chrono::Duration::days(1);
    let mut n_holdout_victims = 0usize;
    let mut n_holdout_suspects = 0usize;
    let mut n_holdout_shootings = 0usize;
    for i in 0..config.n_persons {
        let p_victim = sigmoid(config.outcome_intercept + config.outcome_slope * planted_risk[i]);
        if rng.random::<f64>() >= p_victim {
            continue;
        }
        n_holdout_victims += 1;
        n_holdout_shootings += 1;
        let mut participants = vec![Participant {
            key: persons[i].key.clone(),
            role: Role::Victim,
        }];
        let members = &group_members[persons[i].group];
        if members.len() >= 2 && rng.random::<f64>() < config.suspect_fraction {
            // risk-weighted pick: best of three candidates
            let mut best: Option<usize> = None;
            for _ in 0..3 {
                let c = members[rng.random_range(0..members.len())];
                if c == i {
                    continue;
                }
                if best.is_none_or(|b| planted_risk[c] > planted_risk[b]) {
                    best = Some(c);
                }
            }
            if let Some(suspect) = best {
                n_holdout_suspects += 1;
                participants.push(Participant {
                    key: persons[suspect].key.clone(),
                    role: Role::Suspect,
                });
            }
        }
        shootings.push(EventRecord {
            event_id: next_event_id(&mut event_counter),
            event_type: EventType::Shooting,
            date: uniform_date(&mut rng, holdout_start, config.window_end),
            crime_flags: BTreeSet::new(),
            participants,
        });
    }

    // --- roster: an intelligence list compiled at the last gathering
    // session — it sees accumulated (pre-recency) violence, static group
    // reputations, and seniority, but not the emerging youth or the groups
    // heating up right now ---
    let mut roster_order: Vec<usize> = (0..config.n_persons).collect();
    let selection_scores: Vec<f64> = persons
        .iter()
        .map(|p| {
            let stale_violence = p.violent_events.saturating_sub(p.recent_violent_events);
            let chronic = (f64::from(stale_violence) / 4.0).min(1.0);
            let seniority = (p.age - config.age_min) / (config.age_max - config.age_min);
            0.5 * chronic
                + 0.3 * propensities[p.group]
                + 0.2 * seniority
                + config.cirv_noise * (rng.random::<f64>() - 0.5)
        })
        .collect();
    roster_order.sort_by(|&a, &b| {
        selection_scores[b]
            .total_cmp(&selection_scores[a])
            .then(a.cmp(&b))
    });
    let roster: Vec<(PersonKey, bool)> = roster_order
        .iter()
        .take(config.cirv_size)
        .enumerate()
        .map(|(rank, &i)| (persons[i].key.clone(), rank < config.cirv_active_size))
        .collect();

    // --- write files, rows sorted by date then id inside each dataset ---
    let mut files = Vec::new();
    let sort_key = |e: &EventRecord| (e.date, e.event_id.clone());

    let n_training_events = events.len();
    for event_type in [
        EventType::Arrest,
        EventType::FieldInterview,
        EventType::Offense,
        EventType::Victimization,
    ] {
        let mut subset: Vec<EventRecord> = events
            .iter()
            .filter(|e| e.event_type == event_type)
            .cloned()
            .collect();
        subset.sort_by_key(sort_key);
        let path = out_dir.join(event_type.file_name());
        write_events(&path, &subset)?;
        files.push(path);
    }
    shootings.sort_by_key(sort_key);
    let shootings_path = out_dir.join(EventType::Shooting.file_name());
    write_events(&shootings_path, &shootings)?;
    files.push(shootings_path);

    let cirv_path = out_dir.join("cirv.csv");
    write_cirv(&cirv_path, &roster)?;
    files.push(cirv_path);

    let truth_path = out_dir.join("ground_truth.csv");
    write_ground_truth(&truth_path, &persons, &planted_risk)?;
    files.push(truth_path);

    Ok(SynthOutput {
        files,
        planted_risk,
        keys: persons.into_iter().map(|p| p.key).collect(),
        n_training_events,
        n_training_shootings,
        n_holdout_shootings,
        n_holdout_victims,
        n_holdout_suspects,
    })
}

fn write_ground_truth(path: &Path, persons: &[SynthPerson], risk: &[f64]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    writer
        .write_record(["person_id", "full_name", "dob", "planted_risk"])
        .map_err(|e| Error::csv(path, e))?;
    for (i, (person, r)) in persons.iter().zip(risk).enumerate() {
        writer
            .write_record([
                i.to_string(),
                person.key.full_name.clone(),
                person
                    .key
                    .dob
                    .map(|d| d.format("%Y-%m-%d").to_string())
                    .unwrap_or_default(),
                format!("{r:.6}"),
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Reads `ground_truth.csv` back as (key, planted risk) pairs.
pub fn load_ground_truth(path: &Path) -> Result<Vec<(PersonKey, f64)>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let name = record.get(1).unwrap_or("");
        let dob_str = record.get(2).unwrap_or("");
        let dob = if dob_str.is_empty() {
            None
        } else {
            NaiveDate::parse_from_str(dob_str, "%Y-%m-%d").ok()
        };
        let risk: f64 = record.get(3).unwrap_or("0").parse().unwrap_or(0.0);
        out.push((PersonKey::new(name, dob)?, risk));
    }
    Ok(out)
}
