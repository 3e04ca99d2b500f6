//! Load a game or split problem from JSON and report on it.
//!
//! `cargo run --example game_file -- crates/core/examples/data/cournot.json`

use std::path::PathBuf;

use splitnash::files::{read_spec, SpecFile};
use splitnash::{solve_nash, solve_split, SearchBudget};

fn main() -> splitnash::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/cournot.json"));
    let budget = SearchBudget::default();
    match read_spec(&path)? {
        SpecFile::Game(spec) => {
            let game = spec.to_game()?;
            println!("game {} with players {:?}", game.name(), game.player_ids());
            for p in solve_nash(&game, &budget)? {
                println!("  equilibrium {:?}", p.0);
            }
        }
        SpecFile::Split(spec) => {
            let problem = spec.to_problem()?;
            println!("split problem {} -> {}", problem.game_n.name(), problem.game_m.name());
            for x in solve_split(&problem, &budget)? {
                println!("  split equilibrium {:?}", x.0);
            }
        }
    }
    Ok(())
}
