//! Arc-disjoint paths reduction: an integral robust flow of value 3 exists
//! exactly when both demand pairs can be routed without sharing an arc.

use robustflow::eval::{nominal_value, robust_value};
use robustflow::format::PlainGraph;
use robustflow::gadgets::{adp_witness_flow, build_adp_gadget, disjoint_paths_oracle, Terminals};
use robustflow::rational::format_rational;
use robustflow::special::brute_force_integral;

fn main() -> robustflow::Result<()> {
    let terminals = Terminals::new(0, 1, 2, 3);
    let cases = [
        ("separate arcs", PlainGraph { node_count: 4, edges: vec![(0, 1), (2, 3)] }),
        ("shared bottleneck", PlainGraph { node_count: 6, edges: vec![(0, 4), (2, 4), (4, 5), (5, 1), (5, 3)] }),
    ];
    for (name, graph) in cases {
        let g = build_adp_gadget(&graph, terminals)?;
        let (_, best) = brute_force_integral(&g.instance, 100_000_000)?;
        print!("{name}: {} nodes, {} arcs, best integral robust value {}", g.instance.node_count, g.instance.arc_count(), format_rational(&best));
        match disjoint_paths_oracle(&graph, terminals, 10_000, 1_000_000)? {
            Some((p1, p2)) => {
                let x = adp_witness_flow(&g, &p1, &p2)?;
                println!(
                    "; witness from {:?} and {:?}: nominal {}, robust {}",
                    p1.arcs(),
                    p2.arcs(),
                    format_rational(&nominal_value(&x)),
                    format_rational(&robust_value(&g.instance, &x, 1_000)?)
                );
            }
            None => println!("; no arc-disjoint routing"),
        }
    }
    Ok(())
}
