use thiserror::Error;

/// Errors raised by the library. Every fallible public operation returns this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible quadratic fields: Q(sqrt {0}) and Q(sqrt {1})")]
    FieldMismatch(u8, u8),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("could not parse type spec {spec:?}: {reason}")]
    TypeParse { spec: String, reason: String },
    #[error("Coxeter matrix is invalid: {0}")]
    InvalidCoxeterMatrix(String),
    #[error("not a finite Coxeter type: {0}")]
    NotFinite(String),
    #[error("type {0} has no exact reflection representation over Q(sqrt 2) or Q(sqrt 5)")]
    NotMatrixMode(String),
    #[error("type {spec} too large for enumeration: order {order} exceeds cap {cap}")]
    TooLarge { spec: String, order: u128, cap: u128 },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("counting budget exceeded: {needed} cells needed, budget {budget}; use brute force or a smaller signature")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("brute-force size guard: {words} words exceeds limit {limit}")]
    BruteForceTooLarge { words: u128, limit: u128 },
    #[error("signature stream exhausted after covering {covered} of {total} classes; uncovered: {uncovered:?}")]
    StreamExhausted { covered: usize, total: usize, uncovered: Vec<String> },
    #[error("tie pair {0} has no verified tie word")]
    MissingTieWord(String),
    #[error("fingerprint ambiguous for F4: cuspidal classes share characteristic polynomials")]
    FingerprintAmbiguous,
    #[error("fingerprint injectivity not established for type {0}")]
    FingerprintUnsupported(String),
    #[error("cuspidal datum incomplete: {0}")]
    MissingDatum(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("candidate set has {candidates} words, above the guard {guard}; rerun in extended mode")]
    CandidateGuard { candidates: u128, guard: u128 },
    #[error("k = {k} exceeds the {available} available target letters")]
    TooManyInsertions { k: usize, available: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("representation invalid: {0}")]
    InvalidRepresentation(String),
    #[error("polynomial is not in the semigroup generated by the catalog; remainder has {terms} terms")]
    NotInSemigroup { terms: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("group too large for regular representation: order {0} > 12")]
    RegularTooLarge(usize),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("arithmetic overflow in fixed-width fast path")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
