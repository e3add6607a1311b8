use thiserror::Error;

/// Errors raised by the geometric, measure and search routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("random body generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("invalid needle: {0}")]
    InvalidNeedle(String),
    #[error("body is outside the shell class: {0}")]
    OutOfClass(String),
    #[error("degenerate interval (length {0}); use the pointwise limit instead")]
    DegenerateInterval(f64),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("body is unbounded in direction {0:?}")]
    UnboundedBody(Vec<f64>),
    #[error("John normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("no projection/section plane within tolerance, best discrepancy {best}")]
    PlaneSearchFailed { best: f64, frame: [Vec<f64>; 2] },
    #[error("halving hemisphere not found, best residual {residual:e}")]
    HalvingFailed { residual: f64 },
    #[error("pancake too thick for needle extraction: width {0}")]
    PancakeTooThick(f64),
    #[error("body is not unconditional (reflection defect {0:e})")]
    NotUnconditional(f64),
    #[error("unknown reference body `{0}`")]
    UnknownReference(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
