//! Continuous-strategy games on boxes: Nash and split Nash equilibria,
//! CDP and KKM audits, repeated games through transition matrices, and the
//! extended Bertrand duopoly.

pub mod bertrand;
pub mod cli;
pub mod error;
pub mod expr;
pub mod files;
pub mod game;
pub mod models;
pub mod numeric;
pub mod repeated;
pub mod split;

pub use error::{Error, Result};
pub use expr::{eval_utility, parse_utility, UtilityExpr};
pub use game::{best_response, nash_regrets, solve_nash, verify_nash, Game, Profile};
pub use numeric::{BoxSet, Interval, SearchBudget};
pub use split::{apply_operator, solve_split, verify_split_equilibrium, LinearOperator, SplitProblem};
