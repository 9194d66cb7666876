use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a candidate ordering is not a bijection on `{0..n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingViolation {
    #[error("ordering has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("slot {slot} at index {index} is out of range for {n} nodes")]
    OutOfRange { index: usize, slot: u32, n: usize },
    #[error("slot {slot} at index {index} is already taken")]
    DuplicateSlot { index: usize, slot: u32 },
    #[error("inverse[{slot}] = {found}, but forward maps {expected} to slot {slot}")]
    InverseMismatch { slot: usize, expected: u32, found: u32 },
}

/// Malformed on-disk data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("truncated record at byte offset {offset}")]
    Truncated { offset: usize },
    #[error("record at byte offset {offset} has dimension {found}, expected {expected}")]
    InconsistentDimension { expected: usize, found: usize, offset: usize },
    #[error("invalid dimension {dim} at byte offset {offset}")]
    InvalidDimension { dim: i32, offset: usize },
    #[error("bad magic {found:?}, expected {expected:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },
    #[error("unsupported format version {found}, expected {expected}")]
    VersionMismatch { expected: u16, found: u16 },
    #[error("{what}: expected {expected} bytes, found {actual}")]
    LengthMismatch { what: &'static str, expected: usize, actual: usize },
    #[error("unknown metric tag {0}")]
    UnknownMetric(u16),
    #[error("corrupt {what}: {detail}")]
    Corrupt { what: &'static str, detail: String },
    #[error("component {value} at row {row} cannot be stored as {target}")]
    Unrepresentable { value: f64, row: usize, target: &'static str },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("vector has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("node {0} has already been inserted")]
    DuplicateInsert(u32),
    #[error("node id {id} out of range for {n} nodes")]
    NodeOutOfRange { id: u32, n: usize },
    #[error("query count {queries} does not match ground truth count {truth}")]
    QueryTruthMismatch { queries: usize, truth: usize },
    #[error(transparent)]
    Ordering(#[from] OrderingViolation),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable tag for machine-readable error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyDataset => "empty_dataset",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::DuplicateInsert(_) => "duplicate_insert",
            Error::NodeOutOfRange { .. } => "node_out_of_range",
            Error::QueryTruthMismatch { .. } => "query_truth_mismatch",
            Error::Ordering(_) => "invalid_ordering",
            Error::Format(FormatError::BadMagic { .. }) => "bad_magic",
            Error::Format(FormatError::VersionMismatch { .. }) => "version_mismatch",
            Error::Format(FormatError::LengthMismatch { .. }) => "length_mismatch",
            Error::Format(FormatError::Truncated { .. }) => "truncated",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
