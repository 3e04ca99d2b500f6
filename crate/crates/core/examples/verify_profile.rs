//! Check candidate profiles of the two built-in games: regrets, witnesses,
//! and the reference claims replayed against the library.

use splitnash::models::{builtin, InstanceProblem};
use splitnash::{verify_nash, SearchBudget};

fn main() -> splitnash::Result<()> {
    let budget = SearchBudget::default();
    let instance = builtin("example-4.1")?;
    let InstanceProblem::Split(problem) = &instance.problem else { unreachable!() };

    for (game, profile) in [(&problem.game_n, vec![1.0, 2.0, 4.0]), (&problem.game_m, vec![9.0, 12.0])] {
        let report = verify_nash(game, &profile, &budget)?;
        println!("{} at {profile:?}: equilibrium = {}", game.name(), report.verdict);
        for p in &report.players {
            println!(
                "  {}: value {:.6}, best {:.6} at {:?}, regret {:.6}",
                p.player, p.current_value, p.best_value, p.best_block, p.regret
            );
        }
    }

    println!("\nreference claims:");
    for replay in instance.replay_claims(&budget)? {
        let flag = if replay.is_documented_discrepancy() { "DISCREPANCY" } else if replay.matches_oracle { "ok" } else { "MISMATCH" };
        println!("  [{flag}] {}: claimed {:?}, replayed {:?}", replay.description, replay.claimed, replay.replayed);
    }
    Ok(())
}
