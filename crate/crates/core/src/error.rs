use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("incompatible operands: {0}")]
    Mismatch(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("{0}")]
    Invalid(String),
    #[error("rewrite budget of {budget} steps exhausted while processing {term}")]
    StepBudget { budget: usize, term: String },
    #[error("enumeration limit of {0} exceeded")]
    TooLarge(usize),
    #[error("sampling error: {0}")]
    Sampling(String),
}

pub type Result<T> = std::result::Result<T, Error>;
