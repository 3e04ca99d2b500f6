//! Search for Nash equilibria of a game given as closures.
//!
//! Cournot duopoly with inverse demand `12 - q1 - q2` and unit cost 3; the
//! equilibrium is `(3, 3)`.

use splitnash::game::Utility;
use splitnash::{solve_nash, verify_nash, Game, Interval, SearchBudget};

fn main() -> splitnash::Result<()> {
    let set = Interval::new(0.0, 12.0)?;
    let game = Game::builder("cournot")
        .player("q1", set, Utility::closed("firm 1 profit", |q| q[0] * (12.0 - q[0] - q[1]) - 3.0 * q[0]))
        .player("q2", set, Utility::closed("firm 2 profit", |q| q[1] * (12.0 - q[0] - q[1]) - 3.0 * q[1]))
        .build()?;

    let budget = SearchBudget::default().with_seed(7);
    let found = solve_nash(&game, &budget)?;
    for p in &found {
        let report = verify_nash(&game, p, &budget)?;
        println!("{:?} max regret {:.2e}", p.0, report.max_regret());
    }
    if found.is_empty() {
        println!("no equilibrium found within the budget");
    }
    Ok(())
}
