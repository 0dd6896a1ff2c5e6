use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: max |a_ij - a_ji| = {0:e}")]
    NotSymmetric(f64),
    #[error("negative diagonal entry {value:e} at index {index}")]
    NegativeDiagonal { index: usize, value: f64 },
    #[error("matrix is not positive semidefinite: quadratic form {0:e} on a probe vector")]
    NotPsd(f64),
    #[error("diagonal entry {0} is zero")]
    ZeroDiagonal(usize),
    #[error("index {index} out of range for dimension {p}")]
    IndexOutOfRange { index: usize, p: usize },
    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),
    #[error("active set must be nonempty")]
    EmptySupport,
    #[error("invalid cone parameters: {0}")]
    InvalidCone(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumeration of {needed} items exceeds the cap of {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("uniform eigenvalue is zero: a submatrix is singular")]
    SingularUniformEigenvalue,
    #[error("block Sigma_11 on {0:?} is singular")]
    SingularBlock(Vec<usize>),
    #[error("noise vector is not available")]
    MissingNoise,
    #[error("every candidate submatrix is singular")]
    AllSubmatricesSingular,
    #[error("denominator is not positive ({0:e})")]
    DenominatorNonPositive(f64),
    #[error("no admissible direction: {0}")]
    NoFeasiblePoint(String),
    #[error("solver stopped after {iterations} iterations with residual {residual:e}")]
    MaxItersExceeded {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("premise does not hold: {0}")]
    PremiseViolated(String),
    #[error("missing input `{key}` for edge {edge}")]
    MissingInput { edge: String, key: String },
    #[error("unknown implication edge `{0}`")]
    UnknownEdge(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseAt {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
