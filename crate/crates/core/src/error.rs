use alloc::string::String;

/// Errors produced by the graph, lift, spectral and search routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("directed edge {0} is not in the graph")]
    UnknownEdge(usize),
    #[error("directed edge {edge}: {reason}")]
    MalformedEdge { edge: usize, reason: &'static str },
    #[error("tail/head/involution arrays have different lengths")]
    LengthMismatch,
    #[error("malformed morphism: {0}")]
    MalformedMorphism(&'static str),
    #[error("malformed ordering: {0}")]
    MalformedOrdering(&'static str),
    #[error("the operation is undefined on the empty graph")]
    EmptyGraph,

    #[error("cover degree n must be at least 1")]
    ZeroDegree,
    #[error("model does not admit degree {n}: {reason}")]
    ParityMismatch { n: usize, reason: &'static str },
    #[error("base graph has half-loops but the model has no half-loop rule")]
    MissingHalfLoopRule,
    #[error("assignment violates sigma(inv e) = sigma(e)^-1 at base edge {0}")]
    InverseConstraint(usize),
    #[error("permutation assignment does not match the base graph ({0})")]
    AssignmentShape(&'static str),
    #[error("not a permutation of [{0}]")]
    NotAPermutation(usize),

    #[error("base eigenvalue {re}+{im}i has no cover eigenvalue within tolerance")]
    UnmatchedEigenvalue { re: f64, im: f64 },
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph has half-loops")]
    HasHalfLoops,
    #[error("Hashimoto matrix of size {0} exceeds the dense solver cap")]
    DenseCapExceeded(usize),

    #[error("walk enumeration budget of {0} partial walks exceeded")]
    BudgetExceeded(u64),
    #[error("walk length must be at least 1")]
    ZeroLength,
    #[error("invalid walk: {0}")]
    InvalidWalk(&'static str),
    #[error("invalid bead set: {0}")]
    InvalidBeadSet(&'static str),
    #[error("edge lengths must be positive (orbit {0})")]
    ZeroEdgeLength(usize),

    #[error("edge {0} is a loop")]
    LoopEdge(usize),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("degree d = {0} must be at least 3")]
    DegreeTooSmall(usize),

    #[error("exhaustive check requested on {0} vertices (limit {1})")]
    TooLargeForExhaustive(usize, usize),
    #[error("parameter out of range: {0}")]
    OutOfRange(&'static str),
    #[error("size constraint violated: {0}")]
    SizeViolation(&'static str),
    #[error("exact rational overflow")]
    Overflow,
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
