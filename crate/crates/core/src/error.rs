use thiserror::Error;

use crate::rational::Rational;
use crate::relations::Unrelated;

#[derive(Debug, Error)]
pub enum Error {
    #[error("densities for parameter {parameter:?} sum to {sum}, not 1")]
    RowSum { parameter: String, sum: Rational },
    #[error("negative or malformed density for parameter {parameter:?} at {sample:?}: {detail}")]
    NegativeDensity {
        parameter: String,
        sample: String,
        detail: String,
    },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("experiment needs at least one sample point and one parameter")]
    EmptySpace,
    #[error("density table is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("data point {0:?} is not in the sample space")]
    UnknownDataPoint(String),
    #[error("data point {0:?} has probability zero under every parameter")]
    ImpossibleData(String),
    #[error("partition does not match the sample space: {0}")]
    PartitionMismatch(String),
    #[error("partition is not ancillary")]
    NotAncillary,
    #[error("sample space has {points} points, enumeration bound is {limit}")]
    SpaceTooLarge { points: usize, limit: usize },
    #[error("inference bases are not likelihood related: {0}")]
    NotLikelihoodRelated(Unrelated),
    #[error("construction needs at least two sample points, {0:?} has one")]
    DegenerateSampleSpace(String),
    #[error("likelihood constant {0} is out of range (must be >= 1)")]
    ConstantOutOfRange(Rational),
    #[error("link {index} failed verification: {reason}")]
    LinkVerificationFailed { index: usize, reason: String },
    #[error("link {index} has kind {kind}, which this rewrite does not accept")]
    UnsupportedLinkKind { index: usize, kind: String },
    #[error("index {index} out of range for universe of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("search bound exceeded: {0}")]
    SearchBounds(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
