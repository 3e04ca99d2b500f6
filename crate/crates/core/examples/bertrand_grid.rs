//! Enumerate pure price equilibria of an asymmetric Bertrand duopoly on a
//! grid and audit them against the marginal-cost prediction.
//!
//! `cargo run --example bertrand_grid -- 1 2 0.01`

use splitnash::bertrand::{audit_price_equilibria, profits, BertrandModel, PriceGrid, NO_TRADE_DEMAND};

fn main() -> splitnash::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (c1, c2, step) = match args[..] {
        [c1, c2, step, ..] => (c1, c2, step),
        [c1, c2] => (c1, c2, 0.01),
        _ => (1.0, 2.0, 0.01),
    };
    let model = BertrandModel::linear(c1, c2)?;
    let (lo, hi) = model.default_price_range();
    let grid = PriceGrid::new(lo, hi, step)?;
    println!("costs ({c1}, {c2}), demand {}, prices on [{lo}, {hi}] step {step}", model.describe_demand());

    let audit = audit_price_equilibria(&model, &grid, 1e-9);
    for &(p1, p2) in audit.members.iter().filter(|&&(p1, p2)| model.demand(p1, p2) > NO_TRADE_DEMAND) {
        let (pi1, pi2) = profits(&model, p1, p2)?;
        println!("  equilibrium ({p1}, {p2}) profits ({pi1:.4}, {pi2:.4})");
    }
    println!("no-trade grid equilibria skipped: {}", audit.no_trade_members);
    println!("grid-resolution artifacts: {:?}", audit.resolution_artifacts);
    println!("contains (c1, c2): {}, audit passed: {}", audit.contains_cost_pair, audit.passed);
    for tally in &audit.cases {
        println!("  case {:>11}: {:>6} grid points, {} trading survivors", tally.case, tally.grid_points, tally.surviving_trading);
    }
    Ok(())
}
