//! Pair a game with itself through a row-stochastic transition matrix and
//! look for profiles that stay equilibria after the transition.

use splitnash::models::{builtin, InstanceProblem};
use splitnash::repeated::{make_repeated_problem, repeated_cdp_check, validate_transition_matrix};
use splitnash::{solve_nash, verify_split_equilibrium, SearchBudget};

fn main() -> splitnash::Result<()> {
    let InstanceProblem::Game(game) = builtin("example-4.1:E2")?.problem else { unreachable!() };
    let budget = SearchBudget::default();

    if let Err(e) = validate_transition_matrix(vec![vec![0.5, 0.6], vec![0.25, 0.75]]) {
        println!("rejected: {e}");
    }

    for rows in [vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![vec![0.5, 0.5], vec![0.25, 0.75]]] {
        let t = validate_transition_matrix(rows.clone())?;
        let problem = make_repeated_problem(&game, t)?;
        println!("\ntransition {rows:?}");
        for x in solve_nash(&game, &budget)? {
            let v = verify_split_equilibrium(&problem, &x, &budget)?;
            println!("  equilibrium {:?} -> {:?}; still an equilibrium: {}", x.0, v.image, v.verdict);
        }
        let cdp = repeated_cdp_check(&problem, 300, &budget)?;
        println!("  joint dominance failures in 300 samples: {}", cdp.joint_failures.len());
    }
    Ok(())
}
