use thiserror::Error;

/// Errors raised by the frame-theory operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NaimarkError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rows are not orthonormal (residual {residual:e})")]
    NotIsometric { residual: f64 },

    #[error("not a frame: lower bound {lower:e} is not positive")]
    NotAFrame { lower: f64 },

    #[error("pad bound {pad} must exceed the upper frame bound {bound}")]
    PadBoundTooSmall { pad: f64, bound: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("vector {index} has norm {norm}, expected unit norm")]
    NotUnitNorm { index: usize, norm: f64 },

    #[error("subset enumeration needs {count} subsets, limit is {limit}")]
    TooLarge { count: u128, limit: u128 },

    #[error("upper frame bound {bound} is too close to 1 to rescale the complement")]
    ScalingDegenerate { bound: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, NaimarkError>;

impl NaimarkError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        NaimarkError::InvalidInput(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        NaimarkError::Parse {
            line,
            column,
            message: msg.into(),
        }
    }
}
