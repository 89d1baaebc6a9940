use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("work budget exceeded: more than {limit} {what}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("the ideal is the unit ideal (empty variety, dimension -1)")]
    UnitIdeal,

    #[error("generator {index} is not a single term")]
    NotMonomial { index: usize },

    #[error("the zero operator has no {0}")]
    ZeroElement(&'static str),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("connection is not integrable: {0}")]
    NonIntegrable(String),

    #[error("no cyclic vector found in the candidate schedule (rank {rank})")]
    CyclicVectorExhausted { rank: usize },

    #[error("internal contradiction: {0}")]
    Contradiction(String),
}

impl Error {
    pub(crate) fn parse_at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
