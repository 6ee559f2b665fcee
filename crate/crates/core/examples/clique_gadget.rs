//! Build the Clique reduction for a triangle and compare the two canonical
//! flows under the structured adversary. A clique of size k' shows up as an
//! advantage of exactly eps for routing eps over (v', v'').

use std::collections::BTreeSet;

use robustflow::eval::nominal_value;
use robustflow::gadgets::{
    build_clique_gadget, canonical_gadget_flow, h_star, structured_lambda, FlowVariant, SimpleGraph,
};
use robustflow::rational::format_rational;

fn main() -> robustflow::Result<()> {
    for (name, graph) in [("K3", SimpleGraph::complete(3)), ("C5", SimpleGraph::cycle(5))] {
        let g = build_clique_gadget(&graph, 3)?;
        let p = &g.params;
        println!(
            "{name}: {} nodes, {} arcs, ell={} k={} eps={} M={} h={} h*={}",
            g.instance.node_count,
            g.instance.arc_count(),
            p.ell,
            p.k,
            format_rational(&p.eps),
            format_rational(&p.big_m),
            p.h,
            h_star(&graph, 3, 1 << 20)?
        );
        let mut objectives = Vec::new();
        for variant in [FlowVariant::ZeroRoute, FlowVariant::EpsRoute] {
            let x = canonical_gadget_flow(&g, variant);
            let adv = structured_lambda(&g, &x, 1 << 20)?;
            let objective = nominal_value(&x) - &adv.lambda;
            let u: BTreeSet<usize> = adv.vertex_set.clone();
            println!("  {variant:?}: lambda {} at U = {u:?}, objective {}", format_rational(&adv.lambda), format_rational(&objective));
            objectives.push(objective);
        }
        println!("  eps-route minus zero-route: {}", format_rational(&(&objectives[1] - &objectives[0])));
    }
    Ok(())
}
