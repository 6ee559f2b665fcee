//! The (k+1)-uniform flow baseline against the exact LP optimum.

use robustflow::eval::robust_value;
use robustflow::kroute::robust_baseline;
use robustflow::lp::solve_row_generation;
use robustflow::random::{random_instance, RandomSpec};
use robustflow::rational::format_rational;

fn main() -> robustflow::Result<()> {
    let spec = RandomSpec { nodes: 7, arcs: 13, k_max: 2, capacities: vec![1, 2, 3] };
    println!("{:>4} {:>2} {:>9} {:>9} {:>9}", "seed", "k", "guarantee", "achieved", "optimum");
    for seed in 20..30 {
        let inst = random_instance(seed, &spec);
        let base = robust_baseline(&inst, inst.k)?;
        let achieved = robust_value(&inst, &base.flow, 1_000_000)?;
        let optimum = solve_row_generation(&inst, 100_000, 1_000_000)?.primal.objective;
        println!(
            "{seed:>4} {:>2} {:>9} {:>9} {:>9}",
            inst.k,
            format_rational(&base.guarantee),
            format_rational(&achieved),
            format_rational(&optimum)
        );
    }
    Ok(())
}
