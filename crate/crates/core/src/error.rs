use thiserror::Error;

use crate::certify::Certificate;
use crate::report::StageRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why an embedder gave up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    SetConstruction,
    Connection,
    TooManyBad,
    Fallback,
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FailureReason::SetConstruction => "set-construction",
            FailureReason::Connection => "connection",
            FailureReason::TooManyBad => "too-many-bad",
            FailureReason::Fallback => "fallback",
        };
        f.write_str(s)
    }
}

/// Exclusion tally for a core pair that found no length-4 connection.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ExclusionTally {
    pub candidates: usize,
    pub bad: usize,
    pub in_core_set: usize,
    pub used: usize,
    pub connector_used: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no vertices or no edges")]
    EmptyGraph,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0} is not a supported prime power")]
    BadField(u32),
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph contains a 6-cycle: {0:?}")]
    NotC6Free(Vec<usize>),
    #[error("distance budget undefined: 15n/t = {0} <= 1")]
    DegenerateBudget(f64),
    #[error("instance too large for exhaustive search: n = {n} > {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("stage failed at core {core}: {constraint}")]
    StageFailed { core: usize, constraint: String },
    #[error("no hats: every vertex of X has degree at most 1")]
    NoHats,
    #[error("sparsification failed after {} attempts", attempts.len())]
    SparsifyFailed { attempts: Vec<serde_json::Value> },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("no acceptable balanced bipartition after {0} attempts")]
    BalanceFailed(usize),
    #[error("dependent random choice failed after {} attempts", attempts.len())]
    SelectFailed { attempts: Vec<serde_json::Value> },
    #[error("no connector for pair {pair:?}: {tally:?}")]
    NoConnector {
        pair: (usize, usize),
        tally: ExclusionTally,
        partial: Box<Certificate>,
    },
    #[error("embedding failed ({reason}); best partial certificate has {} cores", partial.ell())]
    EmbedFailed {
        partial: Box<Certificate>,
        reason: FailureReason,
        trace: Vec<StageRecord>,
    },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("internal invariant breached: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Best partial certificate carried by an embedding failure, if any.
    pub fn partial(&self) -> Option<&Certificate> {
        match self {
            Error::EmbedFailed { partial, .. } | Error::NoConnector { partial, .. } => Some(partial),
            _ => None,
        }
    }
}
