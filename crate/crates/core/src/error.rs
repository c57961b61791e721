use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what}: size {got} exceeds the limit {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{message} (residual {residual:e})")]
    Numerical { message: String, residual: f64 },

    #[error("matrix is rank deficient: |r_{column}{column}| = {value:e}")]
    RankDeficient { column: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("parameter rule violated: {0}")]
    ParameterRule(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("decode failed: {0}")]
    Decode(String),

    #[error("ambiguous rounding: {value} is equidistant from {below} and {above}")]
    Ambiguous { value: f64, below: i64, above: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
