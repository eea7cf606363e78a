use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("element {element} is a loop")]
    Loop { element: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("matrix has no columns")]
    EmptyMatrix,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("edge {index} is a self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("graph is disconnected ({components} components); compute per component")]
    Disconnected { components: usize },
    #[error("uniform matroid U({r},{n}) requires 1 <= r <= n")]
    InvalidUniform { r: usize, n: usize },
    #[error("ground set of size {0} is too large for exhaustive enumeration")]
    GroundTooLarge(usize),
    #[error("flat axiom ({axiom}) violated: {witness}")]
    AxiomViolation { axiom: u8, witness: String },
    #[error("flats are not comparable")]
    Incomparable,
    #[error("element {element} is a coloop, so the dual has a loop")]
    Coloop { element: usize },
    #[error("deleted and contracted sets overlap at element {0}")]
    OverlappingMinor(usize),
    #[error("contraction creates a loop at element {element}")]
    MinorLoop { element: usize },
    #[error("rank {rank} is below the required minimum {required}")]
    RankTooSmall { rank: usize, required: usize },

    #[error("weights are not strictly submodular: {witness}")]
    InvalidWeights { witness: String },
    #[error("expected an element of degree {expected}, found degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("product degree {degree} exceeds top degree {top}")]
    DegreeOverflow { degree: usize, top: usize },
    #[error("expected {expected} Kähler elements, found {found}")]
    WrongTupleLength { expected: usize, found: usize },
    #[error("degree {q} is out of range (top degree {top})")]
    DegreeOutOfRange { q: usize, top: usize },
    #[error("matrix {index} is not positive semidefinite")]
    NotPsd { index: usize },
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
