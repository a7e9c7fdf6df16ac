use thiserror::Error;

/// Errors produced by every operation in this crate.
///
/// Each variant maps to a stable machine-readable code via [`DcellError::code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DcellError {
    #[error("arithmetic overflow computing {0}")]
    Overflow(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid level {level}: {reason}")]
    InvalidLevel { level: usize, reason: String },
    #[error("invalid copy pair ({a}, {b})")]
    InvalidPair { a: u64, b: u64 },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("infeasible constraints: {0}")]
    Infeasible(String),
    #[error("fault bound exceeded: |F| = {faults} > {bound}")]
    BoundExceeded { faults: usize, bound: i64 },
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("listing exhausted")]
    Exhausted,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("invalid connection rule: {0}")]
    InvalidRule(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl DcellError {
    /// Stable identifier suitable for machine-readable error reports.
    pub fn code(&self) -> &'static str {
        match self {
            DcellError::Overflow(_) => "overflow",
            DcellError::InvalidParams(_) => "invalid_params",
            DcellError::InvalidLabel(_) => "invalid_label",
            DcellError::OutOfRange(_) => "out_of_range",
            DcellError::InvalidLevel { .. } => "invalid_level",
            DcellError::InvalidPair { .. } => "invalid_pair",
            DcellError::ResourceLimit(_) => "resource_limit",
            DcellError::Unsupported(_) => "unsupported_parameters",
            DcellError::InvalidArgument(_) => "invalid_argument",
            DcellError::Infeasible(_) => "infeasible",
            DcellError::BoundExceeded { .. } => "bound_exceeded",
            DcellError::Invariant(_) => "invariant_violation",
            DcellError::Exhausted => "exhausted",
            DcellError::Certification(_) => "certification_failed",
            DcellError::InvalidRule(_) => "invalid_rule",
            DcellError::Io(_) => "io",
            DcellError::Parse(_) => "parse",
        }
    }

    /// Whether the error stems from caller-supplied parameters rather than
    /// from I/O or an internal failure.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            DcellError::InvalidParams(_)
                | DcellError::InvalidLabel(_)
                | DcellError::OutOfRange(_)
                | DcellError::InvalidLevel { .. }
                | DcellError::InvalidPair { .. }
                | DcellError::ResourceLimit(_)
                | DcellError::Unsupported(_)
                | DcellError::InvalidArgument(_)
                | DcellError::BoundExceeded { .. }
                | DcellError::Overflow(_)
        )
    }
}

impl From<std::io::Error> for DcellError {
    fn from(e: std::io::Error) -> Self {
        DcellError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for DcellError {
    fn from(e: serde_json::Error) -> Self {
        DcellError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DcellError>;
