//! Repeated games: a game split against itself through a square operator,
//! typically a row-stochastic transition matrix (Markov type).

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::game::Game;
use crate::numeric::SearchBudget;
use crate::split::{cdp_sample_check, CdpReport, LinearOperator, SplitProblem};

/// Row sums must be within this of 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// Square nonnegative matrix whose rows each sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct TransitionMatrix(LinearOperator);

impl TransitionMatrix {
    pub fn operator(&self) -> &LinearOperator {
        &self.0
    }

    pub fn into_operator(self) -> LinearOperator {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }
}

impl TryFrom<Vec<Vec<f64>>> for TransitionMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        validate_transition_matrix(rows)
    }
}

impl From<TransitionMatrix> for Vec<Vec<f64>> {
    fn from(t: TransitionMatrix) -> Self {
        t.0.to_rows()
    }
}

/// Checks squareness, nonnegativity and unit row sums, reporting the first
/// violation found (scanning row by row).
pub fn validate_transition_matrix(rows: Vec<Vec<f64>>) -> Result<TransitionMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidTransition("matrix is empty".into()));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::InvalidTransition(format!(
            "matrix is not square: row {i} has {} entries, expected {n}",
            row.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if let Some((j, a)) = row.iter().enumerate().find(|(_, a)| !a.is_finite() || **a < 0.0) {
            return Err(Error::InvalidTransition(format!("entry ({i}, {j}) = {a} is negative or non-finite")));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::InvalidTransition(format!("row {i} sums to {sum}, expected 1")));
        }
    }
    Ok(TransitionMatrix(LinearOperator::from_rows(rows)?))
}

/// Either kind of operator accepted for a repeated problem.
pub enum RepeatOperator {
    Transition(TransitionMatrix),
    Linear(LinearOperator),
}

impl From<TransitionMatrix> for RepeatOperator {
    fn from(t: TransitionMatrix) -> Self {
        RepeatOperator::Transition(t)
    }
}

impl From<LinearOperator> for RepeatOperator {
    fn from(op: LinearOperator) -> Self {
        RepeatOperator::Linear(op)
    }
}

/// `SNE(G^2, A)`: the game paired with itself.
pub fn make_repeated_problem(game: &Game, operator: impl Into<RepeatOperator>) -> Result<SplitProblem> {
    let op = match operator.into() {
        RepeatOperator::Transition(t) => t.into_operator(),
        RepeatOperator::Linear(op) => op,
    };
    check_dim(game.dim(), op.cols())?;
    check_dim(game.dim(), op.rows())?;
    SplitProblem::new(game.clone(), game.clone(), op)
}

/// CDP sampling with `g = f`.
pub fn repeated_cdp_check(problem: &SplitProblem, samples: usize, budget: &SearchBudget) -> Result<CdpReport> {
    cdp_sample_check(problem, samples, budget)
}
