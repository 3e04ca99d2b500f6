//! Pass Bertrand prices through a 2x2 Markov matrix and ask when the
//! marginal-cost pair is still an equilibrium of the transformed problem.

use splitnash::bertrand::{audit_markov_equilibria, markov_price_transform, BertrandModel, MarkovPriceMatrix, PriceGrid};

fn main() -> splitnash::Result<()> {
    let m = MarkovPriceMatrix::new(0.0, 1.0)?;
    // Columns sum to one, so the total is kept but a price can leave the square.
    println!("(1, 1) under alpha=0, beta=1 -> {:?}", markov_price_transform(&m, 1.0, 1.0));

    let levels = [0.0, 0.5, 0.9, 1.0];
    let pairs: Vec<(f64, f64)> = levels.iter().flat_map(|&a| levels.iter().map(move |&b| (a, b))).collect();
    for (c1, c2) in [(1.0, 1.0), (1.0, 2.0)] {
        let model = BertrandModel::linear(c1, c2)?;
        let (lo, hi) = model.default_price_range();
        let audit = audit_markov_equilibria(&model, &pairs, &PriceGrid::new(lo, hi, 0.01)?, 1e-9)?;
        println!("\ncosts ({c1}, {c2})");
        println!("  alpha  beta  transformed        equilibrium  claimed");
        for r in &audit.rows {
            let mark = if r.matches_claim() { "" } else { "  <- differs" };
            println!(
                "  {:<5}  {:<4}  ({:.3}, {:.3})  {:<11}  {}{mark}",
                r.alpha, r.beta, r.transformed.0, r.transformed.1, r.verdict, r.claimed
            );
        }
        println!("  verdicts agree with the fixed-point oracle: {}", audit.all_match_oracle());
    }
    Ok(())
}
