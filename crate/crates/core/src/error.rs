use thiserror::Error;

use crate::definability::Violation;
use crate::formula::Formula;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("formula syntax error at byte {pos}: {msg}")]
    FormulaSyntax { pos: usize, msg: String },

    #[error("arity mismatch for `{name}`: expected {expected}, found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("element {elem} out of range for universe of size {size}")]
    OutOfRange { elem: usize, size: usize },

    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("invalid symbol name `{0}`")]
    InvalidName(String),

    #[error("structure has no target block")]
    MissingTarget,

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("unbound variable x{0}")]
    UnboundVariable(usize),

    #[error("sequence length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("target is not definable (violated by {0})")]
    NotDefinable(Box<Violation>),

    #[error("target is definable by {0}")]
    Definable(Box<Formula>),

    #[error("{0}")]
    Invalid(String),

    #[error("internal error: {0}")]
    Internal(String),
}
