//! Sample the convexity-type dominance property on built-in problems and
//! print any counterexamples found.

use splitnash::models::{builtin, InstanceProblem};
use splitnash::split::{cdp_sample_check, replay_cdp};
use splitnash::SearchBudget;

fn main() -> splitnash::Result<()> {
    let budget = SearchBudget::default().with_seed(42);
    for id in ["quadratic-sanity", "example-4.1"] {
        let InstanceProblem::Split(problem) = builtin(id)?.problem else { unreachable!() };
        let report = cdp_sample_check(&problem, 500, &budget)?;
        println!(
            "{id}: {} samples, joint failures {}, vector-form failures {}, min-dominance failures {}",
            report.samples,
            report.joint_failures.len(),
            report.vector_form_failures.len(),
            report.min_dominance_failures.len()
        );
        if let Some(w) = report.joint_failures.first() {
            let again = replay_cdp(&problem, &w.u, &w.v, w.lambda, budget.tolerance)?;
            println!("  first joint failure u={:?} v={:?} lambda={:.3}; replay joint = {}", w.u, w.v, w.lambda, again.joint());
        }
    }
    Ok(())
}
