use thiserror::Error;

/// Errors raised by the algebraic and combinatorial routines of this crate.
///
/// Every variant carries a stable message; the CLI maps the whole enum to a
/// single "domain error" exit class.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension {d} exceeds the supported bound {max}")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("basis is not of full rank")]
    NotFullRank,

    #[error("vectors do not linearly span R^{0}")]
    NotSpanning(usize),

    #[error("closure of the seed does not span R^{0}")]
    DegenerateSeed(usize),

    #[error("inner product {value} is not in {{0,1}}")]
    NonBinarySlack { value: String },

    #[error("inner product {value} with generator {index} is not in {{0,1}}")]
    NonBinaryProduct { index: usize, value: String },

    #[error("matrix has a repeated {0}")]
    RepeatedLine(&'static str),

    #[error("matrix has rank 0")]
    RankZero,

    #[error("no triangular core exists in this slack matrix")]
    NoCore,

    #[error("vector is not a 0/1 vector")]
    NonBinary,

    #[error("point set is not a face of the correlation cone")]
    NotAFace,

    #[error("certificate is not a point of the correlation cone")]
    NotInCone,

    #[error("vector is not in the lattice")]
    NotInLattice,

    #[error("no face point yields a consistent linear system")]
    EmptyDecode,

    #[error("graph has an isolated node {0}")]
    IsolatedNode(usize),

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("store: {0}")]
    Store(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
