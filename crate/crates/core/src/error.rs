use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("base-extension degree s must be at least 1")]
    ZeroBaseDegree,
    #[error("relative degree t must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("field of size {size} exceeds the enumeration cap of {cap} elements")]
    FieldTooLarge { size: u64, cap: u64 },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("invalid field spec {0:?}, expected e.g. \"gf(2^4)/gf(2)\"")]
    InvalidFieldSpec(String),
    #[error("invalid field element {0:?}")]
    InvalidElement(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is outside the span of the basis")]
    NotInSpan,
    #[error("vectors are not linearly independent over the base field")]
    DependentBasis,
    #[error("cannot extend basis of rank {rank} to dimension {target}")]
    ImpossibleExtension { rank: usize, target: usize },
    #[error("pair kernel needs distinct points")]
    EqualPoints,

    #[error("evaluation points are not distinct")]
    DuplicatePoints,
    #[error("invalid code dimensions: need 1 <= k < n, got n={n}, k={k}")]
    BadCodeDimensions { n: usize, k: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("positions are repeated or out of range")]
    BadPositions,
    #[error("polynomial degree too high: {0}")]
    DegreeTooHigh(String),

    #[error("code is not repairable by trace schemes: need n-k >= |B|^(t-1) = {required}, have n-k = {have}")]
    Infeasible { required: u64, have: usize },
    #[error("invalid failure pattern: {0}")]
    InvalidPattern(String),
    #[error("no repair scheme for a three-erasure pattern with dim K123 = l = {l} and t = {t} (the l = t-2 scheme requires t > 3)")]
    Unsupported { l: usize, t: usize },
    #[error("gamma system has no admissible solution: {0}")]
    GammaSystem(String),
    #[error("invalid repair plan: {0}")]
    InvalidPlan(String),
    #[error("dataflow violation: {0}")]
    Dataflow(String),
    #[error("word is not a codeword of this code")]
    NotACodeword,
    #[error("exhaustive message enumeration needs {count} messages, cap is {cap}")]
    TooManyMessages { count: u128, cap: u64 },
    #[error("recovered symbol at index {index} disagrees with the interpolation oracle")]
    OracleMismatch { index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
