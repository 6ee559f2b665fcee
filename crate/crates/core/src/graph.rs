//! Directed multigraph instances, simple path enumeration, exact max-flow and
//! min-cut, and path decomposition of arc flows.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::eval::PathFlow;
use crate::rational::{common_denominator, Capacity, Rational};

pub type NodeId = usize;
pub type ArcId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: Capacity,
}

impl Arc {
    pub fn new(tail: NodeId, head: NodeId, capacity: Capacity) -> Self {
        Arc { tail, head, capacity }
    }
}

/// A robust flow instance. Arc ids are positions in `arcs`; parallel arcs are
/// distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub node_count: usize,
    pub arcs: Vec<Arc>,
    pub source: NodeId,
    pub sink: NodeId,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SourceEqualsSink,
    SourceOutOfRange(NodeId),
    SinkOutOfRange(NodeId),
    EndpointOutOfRange { arc: ArcId, node: NodeId },
    SelfLoop(ArcId),
    NegativeCapacity(ArcId),
    KExceedsArcCount { k: usize, arcs: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SourceEqualsSink => write!(f, "source equals sink"),
            Violation::SourceOutOfRange(v) => write!(f, "source {v} out of range"),
            Violation::SinkOutOfRange(v) => write!(f, "sink {v} out of range"),
            Violation::EndpointOutOfRange { arc, node } => {
                write!(f, "arc {arc} endpoint {node} out of range")
            }
            Violation::SelfLoop(a) => write!(f, "arc {a} is a self-loop"),
            Violation::NegativeCapacity(a) => write!(f, "arc {a} has negative capacity"),
            Violation::KExceedsArcCount { k, arcs } => {
                write!(f, "k exceeds arc count ({k} > {arcs})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// A simple source-sink path given by its arc ids. Orders lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<ArcId>);

impl Path {
    pub fn arcs(&self) -> &[ArcId] {
        &self.0
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.0.contains(&arc)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<ArcId>> for Path {
    fn from(arcs: Vec<ArcId>) -> Self {
        Path(arcs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub arc_ids: BTreeSet<ArcId>,
    /// Nodes on the source side.
    pub side: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: Rational,
    /// Flow on every arc, indexed by arc id.
    pub arc_flow: Vec<Rational>,
}

impl Instance {
    pub fn new(
        node_count: usize,
        arcs: Vec<Arc>,
        source: NodeId,
        sink: NodeId,
        k: usize,
    ) -> Self {
        Instance { node_count, arcs, source, sink, k }
    }

    /// Like [`Instance::new`] but rejects instances with violations.
    pub fn checked(
        node_count: usize,
        arcs: Vec<Arc>,
        source: NodeId,
        sink: NodeId,
        k: usize,
    ) -> Result<Self> {
        let inst = Instance::new(node_count, arcs, source, sink, k);
        let report = inst.validate();
        if report.is_valid() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(report.to_string()))
        }
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn with_k(&self, k: usize) -> Self {
        Instance { k, ..self.clone() }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.source == self.sink {
            violations.push(Violation::SourceEqualsSink);
        }
        if self.source >= self.node_count {
            violations.push(Violation::SourceOutOfRange(self.source));
        }
        if self.sink >= self.node_count {
            violations.push(Violation::SinkOutOfRange(self.sink));
        }
        for (id, arc) in self.arcs.iter().enumerate() {
            for node in [arc.tail, arc.head] {
                if node >= self.node_count {
                    violations.push(Violation::EndpointOutOfRange { arc: id, node });
                }
            }
            if arc.tail == arc.head {
                violations.push(Violation::SelfLoop(id));
            }
            if arc.capacity.is_negative() {
                violations.push(Violation::NegativeCapacity(id));
            }
        }
        if self.k > self.arcs.len() {
            violations.push(Violation::KExceedsArcCount { k: self.k, arcs: self.arcs.len() });
        }
        ValidationReport { violations }
    }

    /// Outgoing arc ids per node, in increasing id order.
    pub fn out_arcs(&self) -> Vec<Vec<ArcId>> {
        let mut out = vec![Vec::new(); self.node_count];
        for (id, arc) in self.arcs.iter().enumerate() {
            out[arc.tail].push(id);
        }
        out
    }

    pub fn is_unit_capacity(&self) -> bool {
        self.arcs.iter().all(|a| a.capacity == Capacity::from_int(1))
    }

    pub fn has_infinite_capacity(&self) -> bool {
        self.arcs.iter().any(|a| a.capacity.is_infinite())
    }

    /// Checks that `arcs` form a simple source-sink path.
    pub fn is_simple_path(&self, arcs: &[ArcId]) -> bool {
        walk_is_simple_path(self, arcs, self.source, self.sink)
    }

    /// Sum of the capacities of `arc_ids`.
    pub fn capacity_of(&self, arc_ids: impl IntoIterator<Item = ArcId>) -> Capacity {
        arc_ids
            .into_iter()
            .map(|a| self.arcs[a].capacity.clone())
            .fold(Capacity::Finite(Rational::zero()), |acc, c| acc + c)
    }
}

fn walk_is_simple_path(inst: &Instance, arcs: &[ArcId], from: NodeId, to: NodeId) -> bool {
    if arcs.is_empty() {
        return false;
    }
    let mut seen = BTreeSet::new();
    let mut at = from;
    seen.insert(at);
    for &a in arcs {
        let Some(arc) = inst.arcs.get(a) else { return false };
        if arc.tail != at || !seen.insert(arc.head) {
            return false;
        }
        at = arc.head;
    }
    at == to
}

/// All simple `from`-`to` paths over the arc list `(tail, head)`, in
/// lexicographic order of arc id sequences.
pub fn simple_paths(
    node_count: usize,
    arcs: &[(NodeId, NodeId)],
    from: NodeId,
    to: NodeId,
    limit: usize,
) -> Result<Vec<Path>> {
    let mut out_arcs = vec![Vec::new(); node_count];
    for (id, &(tail, _)) in arcs.iter().enumerate() {
        out_arcs[tail].push(id);
    }
    let mut paths = Vec::new();
    if from == to {
        return Ok(paths);
    }
    let mut on_path = vec![false; node_count];
    let mut stack: Vec<ArcId> = Vec::new();
    // Iterative DFS: frames hold (node, index of next out-arc to try).
    let mut frames: Vec<(NodeId, usize)> = vec![(from, 0)];
    on_path[from] = true;
    while let Some(frame) = frames.last_mut() {
        let (node, next) = *frame;
        if next == out_arcs[node].len() {
            frames.pop();
            on_path[node] = false;
            stack.pop();
            continue;
        }
        frame.1 += 1;
        let arc = out_arcs[node][next];
        let head = arcs[arc].1;
        if on_path[head] {
            continue;
        }
        if head == to {
            if paths.len() == limit {
                return Err(Error::PathLimitExceeded { limit });
            }
            let mut p = stack.clone();
            p.push(arc);
            paths.push(Path(p));
            continue;
        }
        on_path[head] = true;
        stack.push(arc);
        frames.push((head, 0));
    }
    Ok(paths)
}

pub fn enumerate_paths(inst: &Instance, limit: usize) -> Result<Vec<Path>> {
    let ends: Vec<(NodeId, NodeId)> = inst.arcs.iter().map(|a| (a.tail, a.head)).collect();
    simple_paths(inst.node_count, &ends, inst.source, inst.sink, limit)
}

/// Effective finite capacities, with overrides applied.
fn effective_capacities(
    inst: &Instance,
    capacity_override: Option<&BTreeMap<ArcId, Capacity>>,
) -> Result<Vec<Rational>> {
    inst.arcs
        .iter()
        .enumerate()
        .map(|(id, arc)| {
            let cap = capacity_override
                .and_then(|o| o.get(&id))
                .unwrap_or(&arc.capacity);
            cap.as_finite().cloned().ok_or(Error::InfiniteCapacity(id))
        })
        .collect()
}

/// Unit capacities on every arc, for use as a `capacity_override`.
pub fn unit_override(inst: &Instance) -> BTreeMap<ArcId, Capacity> {
    (0..inst.arc_count()).map(|a| (a, Capacity::from_int(1))).collect()
}

struct Residual {
    flow: Vec<BigInt>,
    source_side: Vec<bool>,
    value: BigInt,
}

/// Capacity-scaling augmenting paths on integer capacities.
fn integer_max_flow(inst: &Instance, caps: &[BigInt]) -> Residual {
    let n = inst.node_count;
    let mut incident: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    for (id, arc) in inst.arcs.iter().enumerate() {
        incident[arc.tail].push(id);
        incident[arc.head].push(id);
    }
    for list in &mut incident {
        list.sort_unstable();
        list.dedup();
    }
    let mut flow = vec![BigInt::zero(); inst.arcs.len()];
    let mut value = BigInt::zero();
    let max_cap = caps.iter().max().cloned().unwrap_or_else(BigInt::zero);
    let mut delta = BigInt::one();
    while &delta * 2 <= max_cap {
        delta *= 2;
    }
    let residual = |flow: &[BigInt], arc: ArcId, from: NodeId| -> BigInt {
        let a = &inst.arcs[arc];
        if a.tail == from {
            &caps[arc] - &flow[arc]
        } else {
            flow[arc].clone()
        }
    };
    loop {
        // BFS over arcs with residual >= delta.
        let mut pred: Vec<Option<ArcId>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[inst.source] = true;
        let mut queue = VecDeque::from([inst.source]);
        while let Some(v) = queue.pop_front() {
            if v == inst.sink {
                break;
            }
            for &arc in &incident[v] {
                let a = &inst.arcs[arc];
                let other = if a.tail == v { a.head } else { a.tail };
                if seen[other] || residual(&flow, arc, v) < delta {
                    continue;
                }
                seen[other] = true;
                pred[other] = Some(arc);
                queue.push_back(other);
            }
        }
        if !seen[inst.sink] {
            if delta.is_one() || delta.is_zero() {
                let mut source_side = vec![false; n];
                // Final residual reachability at delta = 1 gives the min cut side.
                let mut queue = VecDeque::from([inst.source]);
                source_side[inst.source] = true;
                while let Some(v) = queue.pop_front() {
                    for &arc in &incident[v] {
                        let a = &inst.arcs[arc];
                        let other = if a.tail == v { a.head } else { a.tail };
                        if !source_side[other] && residual(&flow, arc, v).is_positive() {
                            source_side[other] = true;
                            queue.push_back(other);
                        }
                    }
                }
                return Residual { flow, source_side, value };
            }
            delta /= 2;
            continue;
        }
        let mut path = Vec::new();
        let mut v = inst.sink;
        while v != inst.source {
            let arc = pred[v].expect("bfs predecessor");
            let a = &inst.arcs[arc];
            let from = if a.head == v { a.tail } else { a.head };
            path.push((arc, from));
            v = from;
        }
        let bottleneck = path
            .iter()
            .map(|&(arc, from)| residual(&flow, arc, from))
            .min()
            .expect("nonempty path");
        for &(arc, from) in &path {
            if inst.arcs[arc].tail == from {
                flow[arc] += &bottleneck;
            } else {
                flow[arc] -= &bottleneck;
            }
        }
        value += bottleneck;
    }
}

fn scaled_max_flow(
    inst: &Instance,
    capacity_override: Option<&BTreeMap<ArcId, Capacity>>,
) -> Result<(Residual, BigInt)> {
    let caps = effective_capacities(inst, capacity_override)?;
    let scale = common_denominator(caps.iter());
    let int_caps: Vec<BigInt> = caps
        .iter()
        .map(|c| (c * Rational::from_integer(scale.clone())).to_integer())
        .collect();
    Ok((integer_max_flow(inst, &int_caps), scale))
}

/// Exact maximum flow. All effective capacities must be finite.
pub fn max_flow(
    inst: &Instance,
    capacity_override: Option<&BTreeMap<ArcId, Capacity>>,
) -> Result<MaxFlow> {
    let (res, scale) = scaled_max_flow(inst, capacity_override)?;
    let to_rat = |v: BigInt| Rational::new(v, scale.clone());
    Ok(MaxFlow {
        value: to_rat(res.value),
        arc_flow: res.flow.into_iter().map(to_rat).collect(),
    })
}

/// Minimum cut with respect to the instance capacities.
pub fn min_cut(inst: &Instance) -> Result<Cut> {
    min_cut_with(inst, None)
}

pub fn min_cut_with(
    inst: &Instance,
    capacity_override: Option<&BTreeMap<ArcId, Capacity>>,
) -> Result<Cut> {
    let (res, _) = scaled_max_flow(inst, capacity_override)?;
    let side: BTreeSet<NodeId> = (0..inst.node_count).filter(|&v| res.source_side[v]).collect();
    let arc_ids = inst
        .arcs
        .iter()
        .enumerate()
        .filter(|(_, a)| res.source_side[a.tail] && !res.source_side[a.head])
        .map(|(id, _)| id)
        .collect();
    Ok(Cut { arc_ids, side })
}

/// Minimum-cardinality cut (min cut under unit capacities).
pub fn min_cardinality_cut(inst: &Instance) -> Cut {
    min_cut_with(inst, Some(&unit_override(inst))).expect("unit capacities are finite")
}

/// Decomposes an arc flow into simple path flows; flow on cycles is dropped.
pub fn path_decompose(inst: &Instance, arc_flow: &[Rational]) -> Result<PathFlow> {
    if arc_flow.len() != inst.arcs.len() {
        return Err(Error::NotAFlow(format!(
            "expected {} arc values, got {}",
            inst.arcs.len(),
            arc_flow.len()
        )));
    }
    if let Some(a) = arc_flow.iter().position(|f| f.is_negative()) {
        return Err(Error::NotAFlow(format!("negative flow on arc {a}")));
    }
    let mut balance = vec![Rational::zero(); inst.node_count];
    for (arc, f) in inst.arcs.iter().zip(arc_flow) {
        balance[arc.tail] -= f;
        balance[arc.head] += f;
    }
    for (v, b) in balance.iter().enumerate() {
        if v != inst.source && v != inst.sink && !b.is_zero() {
            return Err(Error::NotAFlow(format!("conservation violated at node {v}")));
        }
    }
    if !(balance[inst.source].clone() + &balance[inst.sink]).is_zero() {
        return Err(Error::NotAFlow("source outflow differs from sink inflow".into()));
    }

    let mut rest: Vec<Rational> = arc_flow.to_vec();
    let out = inst.out_arcs();
    let mut result = PathFlow::new();
    loop {
        // Walk from the source along the lowest-id arc carrying flow,
        // cancelling any cycle that closes on the walk.
        let mut walk: Vec<ArcId> = Vec::new();
        let mut position = vec![usize::MAX; inst.node_count];
        let mut at = inst.source;
        position[at] = 0;
        let reached_sink = loop {
            if at == inst.sink {
                break true;
            }
            let Some(&arc) = out[at].iter().find(|&&a| rest[a].is_positive()) else {
                break false;
            };
            let head = inst.arcs[arc].head;
            if position[head] != usize::MAX {
                let start = position[head];
                let cycle: Vec<ArcId> = walk[start..].iter().copied().chain([arc]).collect();
                let amount = cycle.iter().map(|&a| rest[a].clone()).min().expect("cycle");
                for &a in &cycle {
                    rest[a] -= &amount;
                }
                for &a in &walk[start..] {
                    position[inst.arcs[a].head] = usize::MAX;
                }
                walk.truncate(start);
                at = head;
                continue;
            }
            walk.push(arc);
            position[head] = walk.len();
            at = head;
        };
        if !reached_sink {
            if walk.is_empty() {
                break;
            }
            return Err(Error::NotAFlow("flow path ends before the sink".into()));
        }
        let amount = walk.iter().map(|&a| rest[a].clone()).min().expect("path");
        for &a in &walk {
            rest[a] -= &amount;
        }
        result.add(Path(walk), amount);
    }
    Ok(result)
}
