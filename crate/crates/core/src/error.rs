use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size {0} is outside 1..=64")]
    GroundSize(usize),
    #[error("uniformity k={k} is invalid for ground set size n={n}")]
    Uniformity { n: usize, k: usize },
    #[error("element {element} is outside the ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("edge {edge} has {found} elements, expected {expected}")]
    EdgeCardinality { edge: String, found: usize, expected: usize },
    #[error("edge {0} appears more than once")]
    DuplicateEdge(String),
    #[error("edge {0} is not strictly increasing")]
    UnsortedEdge(String),
    #[error("uniformity mismatch: {0} vs {1}")]
    UniformityMismatch(usize, usize),
    #[error("operation is undefined on the empty family")]
    EmptyFamily,
    #[error("shift requires x < y, got x={x}, y={y}")]
    ShiftOrder { x: usize, y: usize },
    #[error("edge {0} is not a member of the family")]
    NotAMember(String),
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("too many components ({0}); partition enumeration is capped at 30")]
    TooManyComponents(usize),
    #[error("universe of {0} candidate sets exceeds the search limit of 512")]
    UniverseTooLarge(u64),
    #[error("malformed family JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
