//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::lattice::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square")]
    NotSquare,

    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("negative intersection between distinct curves at ({0}, {1})")]
    NegativeOffDiagonal(usize, usize),

    #[error("matrix is singular")]
    Singular,

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("graph syntax error: {0}")]
    GraphSyntax(String),

    #[error("vertex {id} has weight {weight}: not minimal (weights must be >= 2)")]
    NotMinimal { id: String, weight: u32 },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),

    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),

    #[error("invalid E-type descriptor: {0}")]
    InvalidEnType(String),

    #[error("not a contractible exceptional configuration: intersection matrix is not negative definite")]
    NotNegativeDefinite,

    #[error("no Zariski decomposition over this lattice: support {0:?} is not negative definite")]
    NoDecomposition(Vec<String>),

    #[error("internal error: negative part has a negative coefficient at {0}")]
    NotEffective(String),

    #[error("theorem inapplicable: D^2 = {d2} is not greater than delta_x = {delta}")]
    Inapplicable { d2: Box<Rational>, delta: Box<Rational> },

    #[error("divisor is not nef: D.{curve} = {value} < 0")]
    NotNef { curve: String, value: Rational },

    #[error("divisor is not ample")]
    NotAmple,

    #[error("multiplier must be positive, got {0}")]
    NonPositiveMultiplier(i64),

    #[error("graph is not an ADE configuration")]
    NotAde,

    #[error("missing pairing for curve {0:?}")]
    MissingPairing(String),

    #[error("E-type id {0} out of range 1..=15")]
    TypeOutOfRange(u32),

    #[error("mu must be at least {min}, got {mu}")]
    MuOutOfRange { mu: u32, min: u32 },

    #[error("invalid enumeration spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable short code, used in diagnostics and by callers that branch on
    /// the failure class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NotSquare => "not-square",
            Error::NotSymmetric(..) => "not-symmetric",
            Error::NegativeOffDiagonal(..) => "negative-off-diagonal",
            Error::Singular => "singular",
            Error::InvalidRational(_) => "invalid-rational",
            Error::GraphSyntax(_) => "syntax",
            Error::NotMinimal { .. } => "not-minimal",
            Error::Disconnected => "disconnected",
            Error::EmptyGraph => "empty-graph",
            Error::DuplicateVertex(_) => "duplicate-vertex",
            Error::UnknownVertex(_) => "unknown-vertex",
            Error::InvalidEnType(_) => "invalid-en-type",
            Error::NotNegativeDefinite => "not-negative-definite",
            Error::NoDecomposition(_) => "no-decomposition",
            Error::NotEffective(_) => "not-effective",
            Error::Inapplicable { .. } => "inapplicable",
            Error::NotNef { .. } => "not-nef",
            Error::NotAmple => "not-ample",
            Error::NonPositiveMultiplier(_) => "non-positive-multiplier",
            Error::NotAde => "not-ade",
            Error::MissingPairing(_) => "missing-pairing",
            Error::TypeOutOfRange(_) => "type-out-of-range",
            Error::MuOutOfRange { .. } => "mu-out-of-range",
            Error::InvalidSpec(_) => "invalid-spec",
            Error::InvalidInput(_) => "invalid-input",
        }
    }
}
