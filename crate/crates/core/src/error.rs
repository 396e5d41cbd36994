use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("(-q)^e is only defined for integer e, got e = {exponent}")]
    NonIntegerSignedPower { exponent: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("size {n} exceeds the supported maximum {max}")]
    SizeTooLarge { n: usize, max: usize },

    #[error("size {n} is below the supported minimum {min}")]
    SizeTooSmall { n: usize, min: usize },

    #[error("q must be nonzero")]
    ZeroQ,

    #[error("{value} has no exact rational {root}-th root")]
    NoExactRoot { value: String, root: u32 },

    #[error("matrix is not lower Hessenberg: entry ({row}, {col}) is nonzero")]
    NotHessenberg { row: usize, col: usize },

    #[error("index set must be four strictly increasing indices below {n}")]
    BadIndexSet { n: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("input {index} is not a preserver exponent")]
    NotAPreserver { index: usize },

    #[error("preserver space not closed under the ternary product (internal error)")]
    ClosureViolation,

    #[error("target exponent x = {x} must be an integer")]
    NonIntegerTargetExponent { x: String },

    #[error("exponent matrix must have integer entries, entry ({row}, {col}) = {value}")]
    NonIntegerExponent { row: usize, col: usize, value: String },

    #[error("target vector is not in the column space of the incidence matrix")]
    InconsistentTarget,

    #[error("q0 = {0} is a singular point of the identity (q0 must avoid -1, 0, 1)")]
    QAtSingularity(String),

    #[error("block G is singular")]
    SingularG,

    #[error("converter with a rank-one leading block found; this contradicts the n = 2 classification")]
    RankOneParadox,

    #[error("leading blocks must have constant entries to extract parameters")]
    NonConstantBlock,

    #[error("zero-locus biconditional failed (internal error)")]
    BiconditionalViolated,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
