use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty confusion matrix: all four counts are zero")]
    EmptyMatrix,

    #[error("negative count for {field}: {value}")]
    NegativeCount { field: &'static str, value: i64 },

    #[error("empty input: no samples")]
    EmptyInput,

    #[error("bad threshold grid: {0}")]
    BadGrid(String),

    #[error("threshold {0} outside [0, 1]")]
    ThresholdOutOfRange(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("degenerate population: {actual_positives} actual positives, {actual_negatives} actual negatives")]
    DegeneratePopulation {
        actual_positives: u64,
        actual_negatives: u64,
    },

    #[error("range mismatch: value is already declared on [0, 1]")]
    RangeMismatch,

    #[error("no curve point has both coordinates defined")]
    NoDefinedPoints,

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
