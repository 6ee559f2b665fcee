//! Reduction from Arc-disjoint Paths with two demand pairs: the gadget has
//! an integral robust flow of value 3 for `k = 2` exactly when the demands
//! can be routed arc-disjointly, and at most 2 otherwise.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::eval::PathFlow;
use crate::format::PlainGraph;
use crate::graph::{simple_paths, Arc, ArcId, Instance, NodeId, Path};
use crate::rational::{int, Capacity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Terminals {
    pub s1: NodeId,
    pub t1: NodeId,
    pub s2: NodeId,
    pub t2: NodeId,
}

impl Terminals {
    pub fn new(s1: NodeId, t1: NodeId, s2: NodeId, t2: NodeId) -> Self {
        Terminals { s1, t1, s2, t2 }
    }

    fn check(&self, node_count: usize) -> Result<()> {
        for v in [self.s1, self.t1, self.s2, self.t2] {
            if v >= node_count {
                return Err(Error::InvalidTerminals(format!("node {v} is not in the graph")));
            }
        }
        if self.s1 == self.t1 || self.s2 == self.t2 {
            return Err(Error::InvalidTerminals("a demand pair has equal endpoints".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdpRoles {
    pub source: NodeId,
    pub sink: NodeId,
    pub v: NodeId,
    pub v_prime: NodeId,
    pub v_double: NodeId,
    pub w: NodeId,
    pub terminals: Terminals,
    /// Arc ids of the input graph's arcs, which keep their ids.
    pub graph_arcs: Vec<ArcId>,
    /// The 13 added arcs, in construction order.
    pub added: [ArcId; 13],
}

/// Added arcs as `(label, tail, head, capacity)`, in id order after the
/// input graph's arcs.
const ADDED: [(&str, usize, usize, i64); 13] = {
    // Local node symbols resolved in `build_adp_gadget`.
    const S: usize = 0;
    const T: usize = 1;
    const V: usize = 2;
    const VP: usize = 3;
    const VPP: usize = 4;
    const W: usize = 5;
    const S1: usize = 6;
    const T1: usize = 7;
    const S2: usize = 8;
    const T2: usize = 9;
    [
        ("(s,v)", S, V, 3),
        ("(s,v')", S, VP, 1),
        ("(s,v'')", S, VPP, 1),
        ("(v,s1)", V, S1, 1),
        ("(v,v')", V, VP, 1),
        ("(v,v'')", V, VPP, 1),
        ("(v',t)", VP, T, 2),
        ("(v'',t)", VPP, T, 2),
        ("(s,w)", S, W, 1),
        ("(t1,w)", T1, W, 1),
        ("(w,t)", W, T, 2),
        ("(s,s2)", S, S2, 1),
        ("(t2,t)", T2, T, 1),
    ]
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdpGadget {
    pub graph: PlainGraph,
    pub instance: Instance,
    pub roles: AdpRoles,
}

impl AdpGadget {
    pub fn added_arc(&self, label: &str) -> ArcId {
        let i = ADDED.iter().position(|(l, ..)| *l == label).expect("known arc label");
        self.roles.added[i]
    }

    pub fn roles_json(&self) -> Value {
        let r = &self.roles;
        let t = &r.terminals;
        let arcs: serde_json::Map<String, Value> = ADDED
            .iter()
            .zip(r.added)
            .map(|((label, ..), id)| (label.to_string(), json!(id)))
            .collect();
        json!({
            "params": { "k": 2 },
            "nodes": {
                "s": r.source, "t": r.sink, "v": r.v, "v'": r.v_prime, "v''": r.v_double, "w": r.w,
                "s1": t.s1, "t1": t.t1, "s2": t.s2, "t2": t.t2,
            },
            "arcs": {
                "graph": r.graph_arcs,
                "added": arcs,
            }
        })
    }
}

/// Appends `s, t, v, v', v'', w` to the input graph's nodes and the 13
/// gadget arcs after its (unit-capacity) arcs. The failure budget is 2.
pub fn build_adp_gadget(graph: &PlainGraph, terminals: Terminals) -> Result<AdpGadget> {
    terminals.check(graph.node_count)?;
    let n = graph.node_count;
    let symbols = [n, n + 1, n + 2, n + 3, n + 4, n + 5, terminals.s1, terminals.t1, terminals.s2, terminals.t2];
    let mut arcs: Vec<Arc> = graph.edges.iter().map(|&(u, v)| Arc::new(u, v, Capacity::from_int(1))).collect();
    let graph_arcs: Vec<ArcId> = (0..arcs.len()).collect();
    let mut added = [0; 13];
    for (slot, &(_, tail, head, cap)) in added.iter_mut().zip(ADDED.iter()) {
        *slot = arcs.len();
        arcs.push(Arc::new(symbols[tail], symbols[head], Capacity::from_int(cap)));
    }
    let instance = Instance::new(n + 6, arcs, n, n + 1, 2);
    let roles = AdpRoles {
        source: n,
        sink: n + 1,
        v: n + 2,
        v_prime: n + 3,
        v_double: n + 4,
        w: n + 5,
        terminals,
        graph_arcs,
        added,
    };
    Ok(AdpGadget { graph: graph.clone(), instance, roles })
}

/// First arc-disjoint pair `(P1, P2)` of an `s1-t1` and an `s2-t2` path in
/// the input graph, scanning both path lists in lexicographic order. `budget`
/// bounds the number of pairs examined.
pub fn disjoint_paths_oracle(
    graph: &PlainGraph,
    terminals: Terminals,
    path_limit: usize,
    budget: u128,
) -> Result<Option<(Path, Path)>> {
    terminals.check(graph.node_count)?;
    let first = simple_paths(graph.node_count, &graph.edges, terminals.s1, terminals.t1, path_limit)?;
    let second = simple_paths(graph.node_count, &graph.edges, terminals.s2, terminals.t2, path_limit)?;
    let required = first.len() as u128 * second.len() as u128;
    if required > budget {
        return Err(Error::EnumerationBudgetExceeded { required, budget });
    }
    for p in &first {
        let used: BTreeSet<ArcId> = p.arcs().iter().copied().collect();
        if let Some(q) = second.iter().find(|q| q.arcs().iter().all(|a| !used.contains(a))) {
            return Ok(Some((p.clone(), q.clone())));
        }
    }
    Ok(None)
}

fn check_graph_path(g: &AdpGadget, path: &Path, from: NodeId, to: NodeId) -> Result<()> {
    let arcs = &g.instance.arcs;
    let mut at = from;
    let mut seen = BTreeSet::from([from]);
    for &a in path.arcs() {
        if a >= g.roles.graph_arcs.len() || arcs[a].tail != at || !seen.insert(arcs[a].head) {
            return Err(Error::NotFeasible(format!("not a simple {from}-{to} path of the input graph")));
        }
        at = arcs[a].head;
    }
    if at != to {
        return Err(Error::NotFeasible(format!("not a simple {from}-{to} path of the input graph")));
    }
    Ok(())
}

/// The seven unit paths: `s-v-s1..t1-w-t`, `s-s2..t2-t`, `s-v'-t`,
/// `s-v''-t`, `s-v-v'-t`, `s-v-v''-t` and `s-w-t`.
pub fn adp_witness_flow(g: &AdpGadget, p1: &Path, p2: &Path) -> Result<PathFlow> {
    let t = g.roles.terminals;
    check_graph_path(g, p1, t.s1, t.t1)?;
    check_graph_path(g, p2, t.s2, t.t2)?;
    if let Some(&shared) = p1.arcs().iter().find(|a| p2.contains(**a)) {
        return Err(Error::NotDisjoint(shared));
    }
    let a = |label: &str| g.added_arc(label);
    let mut route1 = vec![a("(s,v)"), a("(v,s1)")];
    route1.extend_from_slice(p1.arcs());
    route1.extend([a("(t1,w)"), a("(w,t)")]);
    let mut route2 = vec![a("(s,s2)")];
    route2.extend_from_slice(p2.arcs());
    route2.push(a("(t2,t)"));
    let paths = [
        route1,
        route2,
        vec![a("(s,v')"), a("(v',t)")],
        vec![a("(s,v'')"), a("(v'',t)")],
        vec![a("(s,v)"), a("(v,v')"), a("(v',t)")],
        vec![a("(s,v)"), a("(v,v'')"), a("(v'',t)")],
        vec![a("(s,w)"), a("(w,t)")],
    ];
    Ok(paths.into_iter().map(|p| (Path(p), int(1))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{arc_flow_value, check_feasible, nominal_value, robust_value};

    fn two_arcs() -> PlainGraph {
        PlainGraph { node_count: 4, edges: vec![(0, 1), (2, 3)] }
    }

    #[test]
    fn sizes_and_capacities() {
        let g = build_adp_gadget(&two_arcs(), Terminals::new(0, 1, 2, 3)).unwrap();
        assert_eq!((g.instance.node_count, g.instance.arc_count(), g.instance.k), (10, 15, 2));
        assert_eq!(g.instance.arcs[g.added_arc("(s,v)")].capacity, Capacity::from_int(3));
        let twos = g.instance.arcs.iter().filter(|a| a.capacity == Capacity::from_int(2)).count();
        assert_eq!(twos, 3);
        assert!(g.instance.validate().is_valid());
    }

    #[test]
    fn terminal_checks() {
        assert!(matches!(
            build_adp_gadget(&two_arcs(), Terminals::new(0, 0, 2, 3)),
            Err(Error::InvalidTerminals(_))
        ));
        assert!(matches!(
            build_adp_gadget(&two_arcs(), Terminals::new(0, 1, 2, 9)),
            Err(Error::InvalidTerminals(_))
        ));
    }

    #[test]
    fn oracle_cases() {
        let pair = disjoint_paths_oracle(&two_arcs(), Terminals::new(0, 1, 2, 3), 100, 100).unwrap();
        assert_eq!(pair, Some((Path(vec![0]), Path(vec![1]))));
        // 0 -> 2 -> 3 and 1 -> 2 -> 3 must share (2, 3)
        let shared = PlainGraph { node_count: 4, edges: vec![(0, 2), (1, 2), (2, 3)] };
        assert_eq!(disjoint_paths_oracle(&shared, Terminals::new(0, 3, 1, 3), 100, 100).unwrap(), None);
    }

    #[test]
    fn witness_flow() {
        let g = build_adp_gadget(&two_arcs(), Terminals::new(0, 1, 2, 3)).unwrap();
        let x = adp_witness_flow(&g, &Path(vec![0]), &Path(vec![1])).unwrap();
        check_feasible(&g.instance, &x).unwrap();
        assert_eq!(nominal_value(&x), int(7));
        assert_eq!(arc_flow_value(&x, g.added_arc("(s,v)")), int(3));
        assert_eq!(robust_value(&g.instance, &x, 1000).unwrap(), int(3));

        let shared = PlainGraph { node_count: 3, edges: vec![(0, 1), (1, 2)] };
        let g = build_adp_gadget(&shared, Terminals::new(0, 2, 1, 2)).unwrap();
        assert_eq!(
            adp_witness_flow(&g, &Path(vec![0, 1]), &Path(vec![1])).unwrap_err(),
            Error::NotDisjoint(1)
        );
    }
}
