use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    /// Two sequences that must be paired element-wise have different lengths.
    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("unknown aggregator `{0}` (expected mean, sum, count, min or max)")]
    UnknownAggregator(String),

    #[error("unknown engine `{0}` (expected hash, dense, streaming, apl or linear-scan)")]
    UnknownEngine(String),

    /// mean/min/max/first/last need at least one value.
    #[error("empty group passed to an aggregator without an empty result")]
    EmptyGroup,

    #[error("duplicate key `{0}` in grouped data")]
    DuplicateKey(String),

    /// The dense engine and the APL-style two-column summary address cells by
    /// integer key.
    #[error("integer keys required")]
    IntegerKeysRequired,

    #[error("key {0} is not a positive subscript")]
    NonPositiveKey(i64),

    #[error("dense storage would need {cells} cells, above the limit of {limit}")]
    DenseLimitExceeded { cells: u128, limit: u128 },

    /// `row` and `col` are 1-based positions in the subscript matrix.
    #[error("subscript {value} at row {row}, column {col} is outside 1..={extent}")]
    SubscriptOutOfBounds {
        row: usize,
        col: usize,
        value: usize,
        extent: usize,
    },

    #[error("sparse output unsupported: {0}")]
    SparseUnsupported(String),

    #[error("no column named `{0}`")]
    NoSuchColumn(String),

    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),

    #[error("column names must be nonempty")]
    EmptyColumnName,

    #[error("column `{name}` is not a {expected} column")]
    ColumnKindMismatch { name: String, expected: &'static str },

    #[error("no numeric columns to aggregate")]
    NoNumericColumns,

    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("invalid value for --{flag}: {message}")]
    InvalidFlag { flag: &'static str, message: String },

    /// Benchmark verification found two engines disagreeing on a workload.
    #[error("engine {engine} disagrees with {baseline} on workload n={n} k={k}")]
    EngineMismatch {
        engine: String,
        baseline: String,
        n: usize,
        k: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
