use thiserror::Error;

use crate::order::VarId;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse constant `{0}`")]
    BadConstant(String),
    #[error("barred variable {0} not allowed here")]
    BarredVariable(VarId),
    #[error("substituted polynomials share variables (f_{0} and f_{1})")]
    NonDisjoint(usize, usize),
    #[error("substitution family too short: need f_{0}")]
    MissingSubstitute(usize),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExpandError {
    #[error("expansion exceeds the {0}-term cap")]
    CapExceeded(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    At { line: usize, msg: String },
    #[error("{msg} at position {pos}")]
    Syntax { pos: usize, msg: String },
}

impl ParseError {
    pub fn at(line: usize, msg: impl Into<String>) -> ParseError {
        ParseError::At {
            line,
            msg: msg.into(),
        }
    }

    pub fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}
