use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("relation degree {degree} outside 1..={n}")]
    DegreeOutOfRange { degree: usize, n: usize },
    #[error("window (relation {relation}, offset {offset}) does not fit in {n} slots")]
    InvalidWindow { relation: usize, offset: usize, n: usize },
    #[error("defect {defect} differs from n(r-1) = {expected}")]
    DefectMismatch { defect: usize, expected: usize },
    #[error("n = {n} is below the stable range (largest degree {max_degree})")]
    NotStable { n: usize, max_degree: usize },
    #[error("expected dimension {0} is negative")]
    NegativeExpectedDim(i64),
    #[error("Chow rings differ: (n={0}, r={1}) vs (n={2}, r={3})")]
    RingMismatch(usize, usize, usize, usize),
    #[error("exponent vector {0:?} is not valid for this ring")]
    BadExponent(Vec<usize>),
    #[error("coefficient overflow in Chow ring arithmetic")]
    Overflow,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("relation degree {found} does not match window degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("linear forms are not in general position")]
    GeneralPositionViolation,
    #[error("no general-position configuration found after {attempts} attempts{reason}")]
    GeneralPositionUnreachable { attempts: usize, reason: String },
    #[error("scan of {size} points exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("word {word:?} uses a symbol outside 1..={r}")]
    InvalidWord { word: Vec<usize>, r: usize },
    #[error("unsupported field {0}")]
    UnsupportedField(String),
}

impl Error {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: 0,
            column: 0,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
