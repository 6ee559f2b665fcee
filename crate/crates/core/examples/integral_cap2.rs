//! Integral robust flow when every capacity is 1 or 2: the best of the zero
//! flow, a unit-capacity maximum flow and a maximum flow. Compared with an
//! exhaustive search over integral flows.

use robustflow::random::{random_instance, RandomSpec};
use robustflow::rational::format_rational;
use robustflow::special::{brute_force_integral, greedy_cut_interdiction, solve_integral_cap2};

fn main() -> robustflow::Result<()> {
    let spec = RandomSpec { nodes: 5, arcs: 9, k_max: 3, capacities: vec![1, 2] };
    for seed in 0..6 {
        let inst = random_instance(seed, &spec);
        let sol = solve_integral_cap2(&inst)?;
        let (_, brute) = brute_force_integral(&inst, 10_000_000)?;
        let greedy = greedy_cut_interdiction(&inst, &sol.flow);
        let deltas: Vec<String> = greedy.trace.iter().map(|(_, d)| format_rational(d)).collect();
        println!(
            "seed {seed} k={}: {:?} gives {} (exhaustive {}), greedy deltas [{}]",
            inst.k,
            sol.choice,
            format_rational(&sol.value),
            format_rational(&brute),
            deltas.join(", ")
        );
    }
    Ok(())
}
