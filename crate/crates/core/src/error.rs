use thiserror::Error;

/// Errors produced by bound computations, the LP solver and the oracle.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} = {value} out of range (expected {range})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("simplex iteration limit of {0} pivots exceeded")]
    IterationLimit(usize),

    #[error("linear program is {0}")]
    LpStatus(&'static str),

    #[error("dual vector is not dual feasible at column {column}")]
    DualInfeasible { column: usize },

    #[error("dual certificate rejected at index {index}: {reason}")]
    CertificateRejected { index: String, reason: String },

    #[error("Plotkin bound inapplicable: need d*q > (q-1)*n, got q={q}, n={n}, d={d}")]
    PlotkinInapplicable { q: u32, n: usize, d: usize },

    #[error("no bundled upper bound for M_2({n},{d})")]
    MissingTableEntry { n: usize, d: usize },

    #[error("data file {path}, line {line}: {msg}")]
    DataFile {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
