use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter set failed validation. `check` names the failed condition.
    #[error("infeasible parameters: {check}: {detail}")]
    Infeasible { check: &'static str, detail: String },

    #[error("length mismatch: expected {expected} bits, got {actual}")]
    Length { expected: usize, actual: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid bit character {found:?} at column {column}")]
    Parse { column: usize, found: char },

    /// No walk index moves the weight into the target interval.
    #[error("no walk index brings the weight into [{lo}, {hi}]")]
    NoIndexFound { lo: usize, hi: usize },

    #[error("subblock {block}: suffix is not a valid index encoding")]
    UnknownSuffix { block: usize },

    #[error("word has weight {weight}, which is not forbidden")]
    NotForbidden { weight: usize },

    #[error("word has no forbidden window")]
    NoForbiddenWindow,

    #[error("label {label} out of range (class size {size})")]
    LabelOutOfRange { label: u128, size: u128 },

    #[error("malformed codeword: {0}")]
    Malformed(String),

    #[error("undecodable: {0}")]
    Undecodable(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl Error {
    pub(crate) fn infeasible(check: &'static str, detail: impl Into<String>) -> Self {
        Error::Infeasible {
            check,
            detail: detail.into(),
        }
    }
}
