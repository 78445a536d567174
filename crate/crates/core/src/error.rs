use std::fmt;

use thiserror::Error;

/// What went wrong while reading formula text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    /// An opening parenthesis that is never closed, or a stray closing one.
    UnbalancedParen,
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
}

/// A syntax error, located by byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty formula"),
            ParseErrorKind::UnbalancedParen => {
                write!(f, "unbalanced parenthesis at byte {}", self.offset)
            }
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "unexpected character {c:?} at byte {}", self.offset)
            }
            ParseErrorKind::UnexpectedToken(t) => {
                write!(f, "unexpected token {t:?} at byte {}", self.offset)
            }
            ParseErrorKind::UnexpectedEnd => {
                write!(f, "unexpected end of input at byte {}", self.offset)
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),

    #[error("unbound variable {0:?}")]
    UnboundVariable(String),

    #[error("variable {0:?} is already bound")]
    Rebinding(String),

    #[error("formulas share variables: {}", .0.join(", "))]
    VariableOverlap(Vec<String>),

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("claimed dimension {claimed} collapsed to {actual} on re-orthonormalization")]
    DimensionCollapse { claimed: usize, actual: usize },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("profile has no entry at {0}")]
    ProfileLookup(usize),

    #[error("certificate inconsistent: {0}")]
    Certificate(String),

    #[error("witness construction failed: {0}")]
    Witness(String),

    #[error("observation contradicts certificate: {0}")]
    Contradiction(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
