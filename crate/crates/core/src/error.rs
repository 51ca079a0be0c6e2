use thiserror::Error;

/// Errors raised by graph loading, oracles and the clustering drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("line {line}: self-loop on node `{label}`")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: probability {value} outside (0, 1]")]
    ProbabilityOutOfRange { line: usize, value: f64 },

    #[error("line {line}: duplicate edge `{u}`-`{v}`")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node id {id} out of range for a graph with {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },

    #[error("graph has {uncertain} uncertain edges, exact enumeration is limited to {limit}")]
    TooManyUncertainEdges { uncertain: usize, limit: usize },

    #[error("instance has {n} nodes, brute force is limited to {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("cannot condition on the absence of certain edge {0}")]
    ZeroProbabilityCondition(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CoreError::InvalidParameter(msg.into()))
}
