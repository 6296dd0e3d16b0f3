use thiserror::Error;

use crate::wsn::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("weight {0} is outside [-1, 1]")]
    WeightOutOfRange(f64),

    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),

    #[error("edge ({0}, {1}) already exists; use update_weight to re-rate")]
    DuplicateEdge(NodeId, NodeId),

    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(NodeId, NodeId),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("unknown node label {0:?}")]
    UnknownLabel(String),

    #[error("rating {raw} exceeds scale half-width {r_max}")]
    RatingOutOfScale { raw: f64, r_max: f64 },

    #[error("invalid rating scale {0}; half-width must be positive")]
    InvalidScale(f64),

    #[error("warm-start scores cover {warm} nodes but graph has only {graph}")]
    NodeSetMismatch { warm: usize, graph: usize },

    #[error("gadget cannot be realized: {0}")]
    Unrealizable(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("target {0} is also an attacker")]
    TargetIsAttacker(NodeId),

    #[error("attacker {0} is assigned to more than one role")]
    OverlappingAttackers(NodeId),

    #[error("instance too large for exhaustive search: {candidates} candidate move sets (limit {limit})")]
    InstanceTooLarge { candidates: u128, limit: u128 },

    #[error("insufficient candidates: requested {requested}, only {available} qualify")]
    InsufficientCandidates { requested: usize, available: usize },

    #[error("bound precondition violated: {0}")]
    BoundPrecondition(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
