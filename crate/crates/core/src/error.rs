use thiserror::Error;

/// Errors from the set-theoretic and statistical layers.
///
/// These are structural problems with a model. Axiom violations are not
/// errors, they come back as failing [`crate::AxiomReport`]s.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("duplicate subset label `{0}`")]
    DuplicateLabel(String),
    #[error("subsets `{first}` and `{second}` have the same extension")]
    DuplicateExtension { first: String, second: String },
    #[error("subset `{subset}` contains `{element}`, which is not in the ground set")]
    UnknownElement { subset: String, element: String },
    #[error("no subset labelled `{0}` in the family")]
    NotFound(String),
    #[error("ground set of {0} elements exceeds the cap of {1}")]
    GroundSetTooLarge(usize, usize),
    #[error("family exceeds the cap of {0} subsets")]
    FamilyTooLarge(usize),
    #[error("pair ({given}, {select}) is outside the domain of the conditional probability")]
    OutsideDomain { given: String, select: String },
    #[error("probability {value} for ({given}, {select}) is outside [0, 1]")]
    OutOfRange { given: String, select: String, value: f64 },
    #[error("missing probability for ({given}, {select})")]
    Incomplete { given: String, select: String },
    #[error("zero measure for nonempty `{0}` contradicts S 2.3")]
    ZeroMeasure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("models do not share a ground set")]
    GroundSetMismatch,
    #[error("invalid probability literal `{0}`")]
    BadLiteral(String),
}

/// Errors from the Hilbert-space, operational and macrostate layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not Hermitian: max |M - M^dagger| = {0:e}")]
    NotHermitian(f64),
    #[error("negative eigenvalue {0:e}")]
    Negative(f64),
    #[error("eigenvalue {0} above 1")]
    AboveOne(f64),
    #[error("trace {0} differs from 1")]
    Trace(f64),
    #[error("weights must be nonnegative and sum to 1 (sum = {0})")]
    Weights(f64),
    #[error("function undefined at eigenvalue {0:e}")]
    Domain(f64),
    #[error("dimension {0} exceeds the cap of {1}")]
    DimensionCap(usize, usize),
    #[error("operators do not sum to the identity (max deviation {0:e})")]
    NotNormalized(f64),
    #[error("operation is not trace non-increasing (max eigenvalue of sum K^dagger K = {0})")]
    NotContracting(f64),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("duplicate outcome `{0}`")]
    DuplicateOutcome(String),
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("negative rate {0}")]
    NegativeRate(f64),
    #[error("integration unstable at t = {time}: {reason}; try a smaller dt")]
    Unstable { time: f64, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Either kind of error, for code that spans both layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
