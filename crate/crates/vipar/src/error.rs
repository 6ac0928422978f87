use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type. Variants are prefixed with the subsystem that
/// produced them so CLI messages identify the failing stage.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ingest: cannot read {path}: {source}")]
    UnreadableFile {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("ingest: {path}: header mismatch, expected columns {expected:?}")]
    HeaderMismatch { path: PathBuf, expected: Vec<String> },

    #[error("ingest: empty person name")]
    EmptyPersonName,

    #[error("network: unknown person id {0}")]
    UnknownPerson(u32),

    #[error("network: neighborhood depth must be 1, 2, or 3 (got {0})")]
    InvalidDepth(u8),

    #[error("measures: graph has no nodes")]
    EmptyGraph,

    #[error("measures: damping factor must lie in (0, 1) (got {0})")]
    InvalidDamping(f64),

    #[error("measures: power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("rules: age must be nonnegative (got {0})")]
    NegativeAge(f64),

    #[error("rules: duplicate rule id {0:?}")]
    DuplicateRuleId(String),

    #[error("rules: rule {rule_id:?} has negative weight {weight}")]
    NegativeWeight { rule_id: String, weight: f64 },

    #[error("rules: requested list size {requested} is invalid for {available} scored persons")]
    InvalidListSize { requested: usize, available: usize },

    #[error("rules: cannot parse ruleset {path}: {message}")]
    RulesetParse { path: PathBuf, message: String },

    #[error("stats: no outcome variation (outcome must contain both classes)")]
    NoOutcomeVariation,

    #[error("stats: predictor and outcome lengths disagree ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("stats: input too short (need at least {need} observations, got {got})")]
    TooFewObservations { need: usize, got: usize },

    #[error("stats: zero variance in input vector")]
    ZeroVariance,

    #[error("stats: apparent perfect separation (coefficients diverged); retry with ridge > 0")]
    PerfectSeparation,

    #[error("stats: information matrix is singular (collinear predictors?)")]
    SingularInformation,

    #[error("eval: reports cover different outcome sets")]
    MismatchedOutcomes,

    #[error("synth: infeasible config: {0}")]
    InfeasibleConfig(String),

    #[error("pipeline: {0}")]
    Pipeline(String),

    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("csv: {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
