//! Row generation: start without failure scenarios and add the adversary's
//! best response until the master LP is robust. Prints the objective after
//! every round next to the full LP value.

use robustflow::lp::{solve_full_lp, solve_row_generation};
use robustflow::random::{random_instance, RandomSpec};
use robustflow::rational::format_rational;

fn main() -> robustflow::Result<()> {
    let spec = RandomSpec { nodes: 8, arcs: 14, k_max: 2, capacities: vec![1, 2, 3] };
    for seed in [3, 14, 15] {
        let inst = random_instance(seed, &spec);
        let lazy = solve_row_generation(&inst, 100_000, 1_000_000)?;
        let full = solve_full_lp(&inst, 100_000, 1_000_000)?;
        let history: Vec<String> = lazy.history.iter().map(format_rational).collect();
        println!(
            "seed {seed:>2} k={}: rounds [{}], {} of {} scenarios used, full LP {}",
            inst.k,
            history.join(" -> "),
            lazy.scenarios_generated,
            full.scenarios_generated,
            format_rational(&full.primal.objective)
        );
    }
    Ok(())
}
