use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite function value {value} at {at:?}")]
    NonFinite { at: Vec<f64>, value: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid search budget: {0}")]
    InvalidBudget(&'static str),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("variable `{name}` is not a declared player of the game")]
    UndeclaredVariable { name: String },

    #[error("fractional power {exponent} of negative base {base}")]
    NegativeBase { base: f64, exponent: f64 },

    #[error("non-finite expression result")]
    NonFiniteResult,

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("unknown player `{0}`")]
    UnknownPlayer(String),

    #[error("profile is infeasible: {0}")]
    Infeasible(String),

    #[error("invalid transition matrix: {0}")]
    InvalidTransition(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
