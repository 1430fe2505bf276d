use thiserror::Error;

use crate::term::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EctaError {
    #[error("symbol {symbol:?} expects {expected} children, got {got}")]
    ArityMismatch { symbol: Symbol, expected: usize, got: usize },
}

/// A path or constraint set that could not be read.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {input:?}: {reason}")]
pub struct ParseConstraintError {
    pub input: String,
    pub reason: &'static str,
}
