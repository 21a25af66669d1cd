use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// The variants split into input errors (malformed or out-of-domain input)
/// and verification failures (a numeric procedure could not certify its
/// claim); see [`Error::is_input_error`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("ShapeError: {0}")]
    Shape(String),
    #[error("PreconditionError: {0}")]
    Precondition(String),
    #[error("SyntaxError at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("UnsupportedError: {0}")]
    Unsupported(String),
    #[error("IndexError: {0}")]
    Index(String),
    #[error("OverflowError: {0}")]
    Overflow(String),
    #[error("FormatError: {0}")]
    Format(String),
    #[error("SingularJacobian: {0}")]
    SingularJacobian(String),
    #[error("NoConvergence: {0}")]
    NoConvergence(String),
    #[error("HenselConditionFailed: {0}")]
    HenselConditionFailed(String),
    #[error("InfeasibleTarget: {0}")]
    InfeasibleTarget(String),
}

impl Error {
    pub fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    /// True for errors caused by the input itself rather than by a failed
    /// numeric certification.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::SingularJacobian(_)
                | Error::NoConvergence(_)
                | Error::HenselConditionFailed(_)
                | Error::InfeasibleTarget(_)
        )
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Shape(_) => "ShapeError",
            Error::Precondition(_) => "PreconditionError",
            Error::Syntax { .. } => "SyntaxError",
            Error::Unsupported(_) => "UnsupportedError",
            Error::Index(_) => "IndexError",
            Error::Overflow(_) => "OverflowError",
            Error::Format(_) => "FormatError",
            Error::SingularJacobian(_) => "SingularJacobian",
            Error::NoConvergence(_) => "NoConvergence",
            Error::HenselConditionFailed(_) => "HenselConditionFailed",
            Error::InfeasibleTarget(_) => "InfeasibleTarget",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
