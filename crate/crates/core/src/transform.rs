//! Instance transformations that preserve the maximum robust flow value.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{check_feasible, PathFlow};
use crate::graph::{Arc, ArcId, Instance, NodeId, Path};
use crate::rational::{common_denominator, Capacity, Rational};

/// Where each original arc went in a split instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcMap {
    pub forward: Vec<SplitArc>,
    /// Original arc of every arc in the split instance.
    pub origin: Vec<ArcId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitArc {
    pub gateway: ArcId,
    pub units: Vec<ArcId>,
    /// The node between the gateway and its unit arcs.
    pub hub: NodeId,
}

/// Replaces every arc `(v, w)` of capacity `u` by a gateway arc `(v, hub)` of
/// capacity `u_max` followed by `u` parallel unit arcs `(hub, w)`.
pub fn split_capacities(inst: &Instance) -> Result<(Instance, ArcMap)> {
    let mut caps = Vec::with_capacity(inst.arc_count());
    for (id, arc) in inst.arcs.iter().enumerate() {
        let cap = arc
            .capacity
            .as_integer()
            .and_then(|c| usize::try_from(c).ok())
            .ok_or(Error::NonIntegralCapacity(id))?;
        caps.push(cap);
    }
    let u_max = caps.iter().copied().max().unwrap_or(0);
    let gateway_cap = Capacity::from_int(u_max as i64);
    let mut arcs = Vec::new();
    let mut forward = Vec::new();
    let mut origin = Vec::new();
    for (id, (arc, &cap)) in inst.arcs.iter().zip(&caps).enumerate() {
        let hub = inst.node_count + id;
        let gateway = arcs.len();
        arcs.push(Arc::new(arc.tail, hub, gateway_cap.clone()));
        origin.push(id);
        let units: Vec<ArcId> = (0..cap)
            .map(|_| {
                arcs.push(Arc::new(hub, arc.head, Capacity::from_int(1)));
                origin.push(id);
                arcs.len() - 1
            })
            .collect();
        forward.push(SplitArc { gateway, units, hub });
    }
    let split = Instance::new(
        inst.node_count + inst.arc_count(),
        arcs,
        inst.source,
        inst.sink,
        inst.k,
    );
    Ok((split, ArcMap { forward, origin }))
}

/// Contracts every gateway/unit pair of a split-instance flow back to the
/// original arc, merging paths that coincide.
pub fn map_flow_back(
    orig: &Instance,
    transformed: &Instance,
    map: &ArcMap,
    x: &PathFlow,
) -> Result<PathFlow> {
    check_feasible(transformed, x)?;
    let mut out = PathFlow::new();
    for (path, value) in x.iter() {
        let arcs = path.arcs();
        if arcs.len() % 2 != 0 {
            return Err(Error::NotFeasible("path does not alternate gateway and unit arcs".into()));
        }
        let mut contracted = Vec::with_capacity(arcs.len() / 2);
        for pair in arcs.chunks(2) {
            let original = map.origin[pair[0]];
            if map.forward[original].gateway != pair[0] || map.origin[pair[1]] != original {
                return Err(Error::NotFeasible(format!(
                    "arcs {} and {} do not come from one original arc",
                    pair[0], pair[1]
                )));
            }
            contracted.push(original);
        }
        out.add(Path(contracted), value.clone());
    }
    check_feasible(orig, &out)?;
    Ok(out)
}

fn infinite_path_exists(inst: &Instance) -> bool {
    let mut seen = vec![false; inst.node_count];
    seen[inst.source] = true;
    let mut queue = VecDeque::from([inst.source]);
    while let Some(v) = queue.pop_front() {
        for arc in inst.arcs.iter().filter(|a| a.tail == v && a.capacity.is_infinite()) {
            if !seen[arc.head] {
                seen[arc.head] = true;
                queue.push_back(arc.head);
            }
        }
    }
    seen[inst.sink]
}

/// Replaces each `INF` capacity by the sum of all finite capacities. Every
/// source-sink path then still contains a finite arc, so that sum bounds the
/// flow through any arc.
pub fn finitize_infinities(inst: &Instance) -> Result<Instance> {
    if infinite_path_exists(inst) {
        return Err(Error::UnboundedFlow);
    }
    let bound: Rational = inst
        .arcs
        .iter()
        .filter_map(|a| a.capacity.as_finite())
        .fold(Rational::zero(), |acc, c| acc + c);
    let mut out = inst.clone();
    for arc in &mut out.arcs {
        if arc.capacity.is_infinite() {
            arc.capacity = Capacity::Finite(bound.clone());
        }
    }
    Ok(out)
}

/// Multiplies all capacities by the least common multiple of their
/// denominators. Returns the scaled instance and the factor.
pub fn scale_to_integral(inst: &Instance) -> Result<(Instance, Rational)> {
    let mut finite = Vec::with_capacity(inst.arc_count());
    for (id, arc) in inst.arcs.iter().enumerate() {
        finite.push(arc.capacity.as_finite().ok_or(Error::InfiniteCapacity(id))?);
    }
    let scale: BigInt = common_denominator(finite.iter().copied());
    let factor = Rational::from_integer(scale);
    let mut out = inst.clone();
    for arc in &mut out.arcs {
        let cap = arc.capacity.as_finite().expect("checked finite");
        arc.capacity = Capacity::Finite(cap * &factor);
    }
    Ok((out, factor))
}
