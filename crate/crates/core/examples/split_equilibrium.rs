//! Build a split problem from two quadratic games and a swap operator,
//! solve it and verify the result.

use splitnash::expr::parse_utility;
use splitnash::{solve_split, verify_split_equilibrium, Game, Interval, LinearOperator, SearchBudget, SplitProblem};

fn quadratic(name: &str, ids: [&str; 2], targets: [f64; 2]) -> splitnash::Result<Game> {
    let set = Interval::new(0.0, 10.0)?;
    let mut b = Game::builder(name);
    for (id, t) in ids.into_iter().zip(targets) {
        b = b.player(id, set, parse_utility(&format!("-1*({id} - {t})^2"))?);
    }
    b.build()
}

fn main() -> splitnash::Result<()> {
    let game_n = quadratic("N", ["x1", "x2"], [1.0, 2.0])?;
    let game_m = quadratic("M", ["y1", "y2"], [2.0, 1.0])?;
    let swap = LinearOperator::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]])?;
    let problem = SplitProblem::new(game_n, game_m, swap)?;
    println!("operator maps S_N into S_M: {}", problem.relatedness().holds);

    let budget = SearchBudget::default();
    let solutions = solve_split(&problem, &budget)?;
    println!("split equilibria found: {solutions:?}");
    for x in &solutions {
        let v = verify_split_equilibrium(&problem, x, &budget)?;
        println!("  {:?} -> image {:?}, verified {}", v.profile, v.image, v.verdict);
    }

    let off = verify_split_equilibrium(&problem, &[2.0, 1.0], &budget)?;
    println!("(2, 1): N regrets {:?}, M regrets {:?}", off.game_n.regrets, off.game_m.regrets);
    Ok(())
}
