//! Probe the intersection of the sets used by the existence argument on a
//! coarse grid and cross-check each member against exact verification.

use splitnash::models::{builtin, InstanceProblem};
use splitnash::split::{kkm_intersection_probe, kkm_t_membership, ProbeGrid};
use splitnash::{BoxSet, Interval, SearchBudget};

fn main() -> splitnash::Result<()> {
    let InstanceProblem::Split(problem) = builtin("quadratic-sanity")?.problem else { unreachable!() };
    let budget = SearchBudget::default();

    let grid = ProbeGrid { points_per_axis: 9, bounds: Some(BoxSet::uniform(Interval::new(0.0, 4.0)?, 2)?) };
    let report = kkm_intersection_probe(&problem, &grid, &budget)?;
    println!("spacing {:?}, slack N {:.3}, slack M {:.3}", report.spacing, report.slack_n, report.slack_m);
    for m in &report.members {
        println!(
            "  z = {:?}, Az = {:?}, verified {}, distances ({:.3}, {:.3}), consistent {}",
            m.z, m.image, m.verified, m.n_distance, m.m_distance, m.consistent
        );
    }
    println!("nonempty {}, all consistent {}", report.nonempty(), report.all_consistent());

    // Every point belongs to its own set.
    for x in [[0.0, 0.0], [3.0, 7.5], [1.0, 2.0]] {
        println!("x = {x:?} in T(x): {}", kkm_t_membership(&problem, &x, &x, budget.tolerance)?);
    }
    Ok(())
}
