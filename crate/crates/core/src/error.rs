use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("malformed date `{value}` ({context})")]
    MalformedDate { value: String, context: String },

    #[error("unknown schema `{0}`")]
    UnknownSchema(String),

    #[error("{file}:{line}: unresolvable reference: {message}")]
    UnresolvedReference { file: String, line: usize, message: String },

    #[error("corpus validation failed: {0}")]
    Invalid(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("no journal metrics for category `{category}` in {year}")]
    NoMetrics { category: String, year: i32 },

    #[error("journal `{0}` is not ranked in any category")]
    Unranked(String),

    #[error("rank {rank} out of range 1..={total}")]
    RankOutOfRange { rank: u64, total: u64 },

    #[error("no baseline for cell {0}")]
    MissingBaseline(String),

    #[error("zero baseline with {citations} citations in cell {cell}")]
    ZeroBaseline { cell: String, citations: u64 },

    #[error("paper `{0}` has no category under the active schema")]
    Unclassified(String),

    #[error("paper `{0}` has no authors; entity attribution is undefined")]
    AnonymousPaper(String),

    #[error("entity `{0}` has no output")]
    NoOutput(String),

    #[error("citation edges are not available; {0} needs edge-level data")]
    EdgesUnavailable(&'static str),

    #[error("citation edge {citing} -> {cited} has no date")]
    UndatedEdge { citing: String, cited: String },

    #[error("paper `{0}` has no date information")]
    Undated(String),

    #[error("quota is zero; no paper can be selected")]
    ZeroQuota,

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Data/usage problems, as opposed to failures of a well-formed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::Parse { .. }
                | Error::DuplicateId { .. }
                | Error::MalformedDate { .. }
                | Error::UnknownSchema(_)
                | Error::UnresolvedReference { .. }
                | Error::Invalid(_)
                | Error::Config(_)
        )
    }
}
