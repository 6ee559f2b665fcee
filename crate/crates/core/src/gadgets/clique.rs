//! Reduction from Clique to maximum robust flow with a large failure budget.
//!
//! For a graph `G' = (V', E')` and clique size `k'` the instance uses
//! `ell = |V'| + 2|E'|`, `k = k' ell + (|V'| - k') + 2|E'|`, `eps = 1/ell`,
//! `M = (1 + eps) k` and `h = 2 C(k', 2) - 2`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{small_subsets, SimpleGraph};
use crate::error::{Error, Result};
use crate::eval::{arc_flow_value, destroyed_value, PathFlow, Scenario};
use crate::graph::{Arc, ArcId, Instance, NodeId, Path};
use crate::rational::{binomial, format_rational, int, ratio, Capacity, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueParams {
    pub kprime: usize,
    pub ell: usize,
    pub k: usize,
    pub eps: Rational,
    pub big_m: Rational,
    pub h: usize,
}

impl CliqueParams {
    pub fn new(graph: &SimpleGraph, kprime: usize) -> Result<Self> {
        let n = graph.vertex_count;
        // h = 2 C(k', 2) - 2 is negative below k' = 2.
        if kprime < 2 || kprime > n {
            return Err(Error::InvalidCliqueSize { kprime, vertices: n });
        }
        let edges = graph.edges.len();
        let ell = n + 2 * edges;
        let k = kprime * ell + (n - kprime) + 2 * edges;
        let eps = ratio(1, ell as i64);
        let big_m = (int(1) + &eps) * int(k as i64);
        let h = 2 * (binomial(kprime, 2) as usize) - 2;
        Ok(CliqueParams { kprime, ell, k, eps, big_m, h })
    }
}

/// Node and arc roles of the clique gadget. Vertex- and edge-indexed vectors
/// follow the input graph's order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueRoles {
    pub source: NodeId,
    pub sink: NodeId,
    /// `a_v`
    pub vertex_hub: Vec<NodeId>,
    /// `A_v = {a_{v,1}, ..., a_{v,ell}}`
    pub a_group: Vec<Vec<NodeId>>,
    /// `B_v = {b_{v,1}, ..., b_{v,ell}}`
    pub b_group: Vec<Vec<NodeId>>,
    /// `(a'_e, a''_e)`
    pub edge_hubs: Vec<(NodeId, NodeId)>,
    /// `v'` and `v''`
    pub v_prime: NodeId,
    pub v_double: NodeId,
    /// `(s, a)` for every node `a` of `A`.
    pub source_arc: BTreeMap<NodeId, ArcId>,
    /// `(b, t)` for every node `b` of `B`.
    pub sink_arc: BTreeMap<NodeId, ArcId>,
    /// Arcs from `A` to `B`.
    pub ab_arcs: Vec<ArcId>,
    /// The parallel `s-t` arcs `e_1, ..., e_k`.
    pub parallel: Vec<ArcId>,
    /// `e'_1, e'_2` from `s` to `v'`.
    pub e_prime: [ArcId; 2],
    /// `e''_1, e''_2` from `v''` to `t`.
    pub e_double: [ArcId; 2],
    pub s_to_v_double: ArcId,
    pub v_prime_to_t: ArcId,
    pub v_prime_to_v_double: ArcId,
    /// `E_H`: arcs of the subgraph on `{s, v', v'', t}` other than `e_i`.
    pub h_arcs: Vec<ArcId>,
    /// `F = {e_1, ..., e_k} ∪ E_H`, in arc id order.
    pub f_arcs: Vec<ArcId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueGadget {
    pub graph: SimpleGraph,
    pub params: CliqueParams,
    pub instance: Instance,
    pub roles: CliqueRoles,
}

pub fn build_clique_gadget(graph: &SimpleGraph, kprime: usize) -> Result<CliqueGadget> {
    let params = CliqueParams::new(graph, kprime)?;
    let n = graph.vertex_count;
    let ell = params.ell;
    let one = Capacity::from_int(1);
    let eps = Capacity::Finite(params.eps.clone());
    let one_eps = Capacity::Finite(int(1) + &params.eps);
    let big_m = Capacity::Finite(params.big_m.clone());

    // Nodes: s, t, then per vertex a_v, A_v, B_v, then a'_e, a''_e, then v', v''.
    let (source, sink) = (0, 1);
    let mut next = 2;
    let mut alloc = |count: usize| {
        let ids: Vec<NodeId> = (next..next + count).collect();
        next += count;
        ids
    };
    let mut vertex_hub = Vec::with_capacity(n);
    let mut a_group = Vec::with_capacity(n);
    let mut b_group = Vec::with_capacity(n);
    for _ in 0..n {
        vertex_hub.push(alloc(1)[0]);
        a_group.push(alloc(ell));
        b_group.push(alloc(ell));
    }
    let edge_hubs: Vec<(NodeId, NodeId)> = graph
        .edges
        .iter()
        .map(|_| {
            let pair = alloc(2);
            (pair[0], pair[1])
        })
        .collect();
    let vv = alloc(2);
    let (v_prime, v_double) = (vv[0], vv[1]);
    let node_count = next;

    let mut arcs: Vec<Arc> = Vec::new();
    let push = |arcs: &mut Vec<Arc>, tail, head, cap: &Capacity| {
        arcs.push(Arc::new(tail, head, cap.clone()));
        arcs.len() - 1
    };

    let mut source_arc = BTreeMap::new();
    for v in 0..n {
        for &a in std::iter::once(&vertex_hub[v]).chain(&a_group[v]) {
            source_arc.insert(a, push(&mut arcs, source, a, &Capacity::Infinite));
        }
    }
    for &(a1, a2) in &edge_hubs {
        source_arc.insert(a1, push(&mut arcs, source, a1, &Capacity::Infinite));
        source_arc.insert(a2, push(&mut arcs, source, a2, &Capacity::Infinite));
    }

    let mut ab_arcs = Vec::new();
    for v in 0..n {
        for i in 0..ell {
            ab_arcs.push(push(&mut arcs, vertex_hub[v], b_group[v][i], &big_m));
        }
        for i in 0..ell {
            ab_arcs.push(push(&mut arcs, a_group[v][i], b_group[v][i], &one));
        }
    }
    for (e, &(u, v)) in graph.edges.iter().enumerate() {
        let (a1, a2) = edge_hubs[e];
        for i in 0..ell {
            ab_arcs.push(push(&mut arcs, a1, b_group[u][i], &big_m));
            ab_arcs.push(push(&mut arcs, a2, b_group[u][i], &big_m));
            ab_arcs.push(push(&mut arcs, a1, b_group[v][i], &big_m));
            ab_arcs.push(push(&mut arcs, a2, b_group[v][i], &big_m));
        }
    }

    let mut sink_arc = BTreeMap::new();
    for group in &b_group {
        for &b in group {
            sink_arc.insert(b, push(&mut arcs, b, sink, &Capacity::Infinite));
        }
    }

    let parallel: Vec<ArcId> = (0..params.k)
        .map(|i| {
            let cap = if i < params.h { &one_eps } else { &one };
            push(&mut arcs, source, sink, cap)
        })
        .collect();

    let e_prime = [
        push(&mut arcs, source, v_prime, &one),
        push(&mut arcs, source, v_prime, &eps),
    ];
    let e_double = [
        push(&mut arcs, v_double, sink, &one),
        push(&mut arcs, v_double, sink, &eps),
    ];
    let s_to_v_double = push(&mut arcs, source, v_double, &one_eps);
    let v_prime_to_t = push(&mut arcs, v_prime, sink, &one_eps);
    let v_prime_to_v_double = push(&mut arcs, v_prime, v_double, &eps);
    let h_arcs = vec![
        e_prime[0],
        e_prime[1],
        e_double[0],
        e_double[1],
        s_to_v_double,
        v_prime_to_t,
        v_prime_to_v_double,
    ];
    let f_arcs: Vec<ArcId> = parallel.iter().chain(&h_arcs).copied().collect();

    let instance = Instance::new(node_count, arcs, source, sink, params.k);
    let roles = CliqueRoles {
        source,
        sink,
        vertex_hub,
        a_group,
        b_group,
        edge_hubs,
        v_prime,
        v_double,
        source_arc,
        sink_arc,
        ab_arcs,
        parallel,
        e_prime,
        e_double,
        s_to_v_double,
        v_prime_to_t,
        v_prime_to_v_double,
        h_arcs,
        f_arcs,
    };
    Ok(CliqueGadget { graph: graph.clone(), params, instance, roles })
}

impl CliqueGadget {
    /// `k_U = ell |U| + |V'| - |U| + 2 (|E'| - |E'[U]|)`: arcs forced into
    /// the structured scenario by the vertex set `U`.
    pub fn forced_count(&self, subset: &BTreeSet<usize>) -> usize {
        let ell = self.params.ell;
        let n = self.graph.vertex_count;
        ell * subset.len() + n - subset.len()
            + 2 * (self.graph.edges.len() - self.graph.induced_edges(subset))
    }

    /// The arcs `S_U` that cut every path of value `M`: `(b, t)` for `b` in
    /// `B_v`, `v` in `U`; `(s, a_v)` for `v` outside `U`; `(s, a'_e)` and
    /// `(s, a''_e)` for edges not induced by `U`.
    pub fn forced_arcs(&self, subset: &BTreeSet<usize>) -> Vec<ArcId> {
        let r = &self.roles;
        let mut out = Vec::new();
        for v in 0..self.graph.vertex_count {
            if subset.contains(&v) {
                out.extend(r.b_group[v].iter().map(|b| r.sink_arc[b]));
            } else {
                out.push(r.source_arc[&r.vertex_hub[v]]);
            }
        }
        for (e, &(u, v)) in self.graph.edges.iter().enumerate() {
            if !(subset.contains(&u) && subset.contains(&v)) {
                let (a1, a2) = r.edge_hubs[e];
                out.push(r.source_arc[&a1]);
                out.push(r.source_arc[&a2]);
            }
        }
        out
    }

    /// Number of saturated paths of value `M`: `(|V'| + 4|E'|) ell`.
    pub fn heavy_path_count(&self) -> usize {
        (self.graph.vertex_count + 4 * self.graph.edges.len()) * self.params.ell
    }

    /// `(|V'| + 4|E'|) ell M + k' ell + f(2 h*)`, the worst-case loss of a
    /// canonical flow.
    pub fn closed_form_lambda(&self, x: &PathFlow, hstar: usize) -> Rational {
        let p = &self.params;
        int(self.heavy_path_count() as i64) * &p.big_m
            + int((p.kprime * p.ell) as i64)
            + f_top(x, &self.roles.f_arcs, 2 * hstar)
    }

    pub fn roles_json(&self) -> Value {
        let r = &self.roles;
        let p = &self.params;
        let mut nodes = BTreeMap::new();
        nodes.insert(r.source.to_string(), "s".to_string());
        nodes.insert(r.sink.to_string(), "t".to_string());
        for v in 0..self.graph.vertex_count {
            nodes.insert(r.vertex_hub[v].to_string(), format!("a_{v}"));
            for i in 0..p.ell {
                nodes.insert(r.a_group[v][i].to_string(), format!("a_{v},{}", i + 1));
                nodes.insert(r.b_group[v][i].to_string(), format!("b_{v},{}", i + 1));
            }
        }
        for (e, &(a1, a2)) in r.edge_hubs.iter().enumerate() {
            nodes.insert(a1.to_string(), format!("a'_{e}"));
            nodes.insert(a2.to_string(), format!("a''_{e}"));
        }
        nodes.insert(r.v_prime.to_string(), "v'".to_string());
        nodes.insert(r.v_double.to_string(), "v''".to_string());
        json!({
            "params": {
                "kprime": p.kprime,
                "ell": p.ell,
                "k": p.k,
                "eps": format_rational(&p.eps),
                "M": format_rational(&p.big_m),
                "h": p.h,
            },
            "nodes": nodes,
            "arcs": {
                "source_arcs": r.source_arc.values().collect::<Vec<_>>(),
                "ab_arcs": r.ab_arcs,
                "sink_arcs": r.sink_arc.values().collect::<Vec<_>>(),
                "e_parallel": r.parallel,
                "e_prime": r.e_prime,
                "e_double_prime": r.e_double,
                "s_v_double_prime": r.s_to_v_double,
                "v_prime_t": r.v_prime_to_t,
                "v_prime_v_double_prime": r.v_prime_to_v_double,
                "E_H": r.h_arcs,
                "F": r.f_arcs,
            }
        })
    }
}

/// `h* = max |E'[U]|` over vertex sets with `|U| <= k'`, by exhaustion.
pub fn h_star(graph: &SimpleGraph, kprime: usize, budget: u128) -> Result<usize> {
    let required = 1u128.checked_shl(graph.vertex_count as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::EnumerationBudgetExceeded { required, budget });
    }
    Ok(small_subsets(graph.vertex_count, kprime)
        .iter()
        .map(|u| graph.induced_edges(u))
        .max()
        .unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowVariant {
    /// Maximum flow in `H` with nothing on `(v', v'')`.
    ZeroRoute,
    /// One unit on each of `(s, v'')`, `(v', t)` and `eps` on `(v', v'')`.
    EpsRoute,
}

/// Saturates every `A`-`B` arc and every `e_i` along its unique path and
/// routes one of the two `H` patterns.
pub fn canonical_gadget_flow(g: &CliqueGadget, variant: FlowVariant) -> PathFlow {
    let r = &g.roles;
    let inst = &g.instance;
    let cap = |a: ArcId| inst.arcs[a].capacity.as_finite().expect("finite").clone();
    let mut x = PathFlow::new();
    for &ab in &r.ab_arcs {
        let arc = &inst.arcs[ab];
        let path = vec![r.source_arc[&arc.tail], ab, r.sink_arc[&arc.head]];
        x.add(Path(path), cap(ab));
    }
    for &e in &r.parallel {
        x.add(Path(vec![e]), cap(e));
    }
    let eps = g.params.eps.clone();
    let [e1p, e2p] = r.e_prime;
    let [e1pp, e2pp] = r.e_double;
    match variant {
        FlowVariant::ZeroRoute => {
            x.add(Path(vec![e1p, r.v_prime_to_t]), int(1));
            x.add(Path(vec![e2p, r.v_prime_to_t]), eps.clone());
            x.add(Path(vec![r.s_to_v_double, e1pp]), int(1));
            x.add(Path(vec![r.s_to_v_double, e2pp]), eps);
        }
        FlowVariant::EpsRoute => {
            x.add(Path(vec![e1p, r.v_prime_to_t]), int(1));
            x.add(Path(vec![e2p, r.v_prime_to_v_double, e2pp]), eps);
            x.add(Path(vec![r.s_to_v_double, e1pp]), int(1));
        }
    }
    x
}

/// `F` sorted by flow, largest first, lowest arc id on ties.
fn ranked(x: &PathFlow, arcs: &[ArcId]) -> Vec<(ArcId, Rational)> {
    let mut flows: Vec<(ArcId, Rational)> = arcs.iter().map(|&a| (a, arc_flow_value(x, a))).collect();
    flows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    flows
}

/// Largest total arc flow over at most `r` arcs of `arcs`.
pub fn f_top(x: &PathFlow, arcs: &[ArcId], r: usize) -> Rational {
    ranked(x, arcs)
        .into_iter()
        .take(r)
        .fold(Rational::zero(), |acc, (_, v)| acc + v)
}

/// `S* = (∪_{v∈U} B_v) ∪ {a_v : v ∉ U} ∪ {a'_e, a''_e : e ∉ E'[U]} ∪ F*`,
/// with node symbols resolved to their `(b, t)` and `(s, a)` arcs.
pub fn structured_scenario(
    g: &CliqueGadget,
    subset: &BTreeSet<usize>,
    f_star: &[ArcId],
) -> Result<Scenario> {
    if subset.len() > g.params.kprime || subset.iter().any(|&v| v >= g.graph.vertex_count) {
        return Err(Error::InvalidInstance(format!(
            "vertex set {subset:?} is not a subset of V' of size at most {}",
            g.params.kprime
        )));
    }
    let arcs: BTreeSet<ArcId> = g.forced_arcs(subset).into_iter().chain(f_star.iter().copied()).collect();
    if arcs.len() != g.params.k {
        return Err(Error::SizeMismatch { expected: g.params.k, actual: arcs.len() });
    }
    if let Some(bad) = f_star.iter().find(|a| !g.roles.f_arcs.contains(a)) {
        return Err(Error::InvalidInstance(format!("arc {bad} is not in F")));
    }
    Ok(Scenario::new(arcs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredLambda {
    pub lambda: Rational,
    pub vertex_set: BTreeSet<usize>,
    pub f_star: Vec<ArcId>,
    pub scenario: Scenario,
}

/// Best response within the structured family: every `U` with `|U| <= k'`,
/// completed by the `k - k_U` arcs of `F` with the largest flow. This is not
/// an unconditional worst case.
pub fn structured_lambda(g: &CliqueGadget, x: &PathFlow, subset_budget: u128) -> Result<StructuredLambda> {
    let n = g.graph.vertex_count;
    let required: u128 = (0..=g.params.kprime.min(n)).map(|i| binomial(n, i)).fold(0u128, u128::saturating_add);
    if required > subset_budget {
        return Err(Error::EnumerationBudgetExceeded { required, budget: subset_budget });
    }
    let order: Vec<ArcId> = ranked(x, &g.roles.f_arcs).into_iter().map(|(a, _)| a).collect();
    let subsets = small_subsets(n, g.params.kprime);
    let best = subsets
        .par_iter()
        .map(|u| {
            let remainder = g.params.k - g.forced_count(u);
            let f_star: Vec<ArcId> = order.iter().take(remainder).copied().collect();
            let scenario = structured_scenario(g, u, &f_star).expect("structured family has size k");
            let lambda = destroyed_value(x, &scenario);
            StructuredLambda { lambda, vertex_set: u.clone(), f_star, scenario }
        })
        .reduce_with(|a, b| {
            let a_key: Vec<usize> = a.vertex_set.iter().copied().collect();
            let b_key: Vec<usize> = b.vertex_set.iter().copied().collect();
            if b.lambda > a.lambda || (b.lambda == a.lambda && b_key < a_key) {
                b
            } else {
                a
            }
        })
        .expect("the empty set is always a candidate");
    Ok(best)
}
