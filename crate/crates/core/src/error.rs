use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("duplicate vertex id \"{0}\"")]
    DuplicateVertex(String),
    #[error("duplicate edge id \"{0}\"")]
    DuplicateEdge(String),
    #[error("edge \"{edge}\" has dangling endpoint \"{vertex}\"")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("unknown vertex \"{0}\"")]
    UnknownVertex(String),
    #[error("vertex set {0} is not hereditary")]
    NotHereditary(String),
    #[error("invalid kernel-covariance pair: {}", .0.join("; "))]
    InvalidPair(Vec<String>),
    #[error("kernel {kernel} is not contained in target kernel {target}")]
    KernelNotBelow { kernel: String, target: String },
    #[error("expected a non-empty list of pairs")]
    EmptyPairList,
    #[error("acyclic required: graph contains a cycle")]
    CyclicGraph,
    #[error("truncation {truncation} too small for level {level} (need level + 1 <= truncation)")]
    TruncationTooSmall { level: usize, truncation: usize },
    #[error("vertex \"{0}\" is not regular")]
    NotRegular(String),
    #[error("copy id \"{0}\" collides with an existing id")]
    CopyNameCollision(String),
    #[error("enumeration over {vertices} vertices exceeds the limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("matrix dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Error {
    /// Whether the failure means the computation is unsupported rather than
    /// the input being malformed.
    pub fn is_unsupported(&self) -> bool {
        matches!(self, Error::CyclicGraph | Error::TooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
