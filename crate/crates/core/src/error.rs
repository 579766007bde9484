use thiserror::Error;

/// Errors raised by the matrix and factorization routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("matrix must be square: expected {expected} entries in row {row}, found {found}")]
    NotSquare { row: usize, expected: usize, found: usize },
    #[error("malformed matrix text: {0}")]
    Parse(String),
    #[error("dimension {n} exceeds the enumeration limit of {limit}")]
    DimensionTooLarge { n: usize, limit: usize },
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("matrix is not {beta}-regular: {detail}")]
    NotRegular { beta: u64, detail: String },
    #[error("envelope entry ({row}, {col}) exceeds the source matrix")]
    EnvelopeExceedsSource { row: usize, col: usize },
    #[error("no perfect matching in support graph (corrupted regular input)")]
    NoPerfectMatching,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Errors raised while building or applying schedules in the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("infeasible schedule: column {col} is assigned to more than one input")]
    InfeasibleSchedule { col: usize },
    #[error("schedule index out of range: ({row}, {col}) in a {n}x{n} switch")]
    OutOfRange { row: usize, col: usize, n: usize },
    #[error("schedule dimension {found} does not match switch dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("conservation violated at cell ({row}, {col}) in slot {slot}")]
    ConservationViolated { row: usize, col: usize, slot: u64 },
    #[error("policy error: {0}")]
    Policy(#[from] ParamError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Errors from policy parameter derivation and subinterval construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("invalid regime: {0}")]
    InvalidRegime(String),
    #[error("infeasible subintervals: {0}")]
    InfeasibleSubintervals(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("constants file line {line}: {msg}")]
    ConstantsFile { line: usize, msg: String },
    #[error("unknown policy name `{0}`")]
    UnknownPolicy(String),
}

/// Errors from the experiment harness.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("unstable input: arrival rate {lambda} must be below service rate {mu}")]
    Unstable { lambda: f64, mu: f64 },
    #[error("invalid sweep config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Param(#[from] ParamError),
}
