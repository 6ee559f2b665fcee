//! Line-oriented text formats for instances, path flows, scenarios and the
//! plain graphs fed to the gadget builders. `#` starts a comment.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::eval::{PathFlow, Scenario};
use crate::graph::{Arc, ArcId, Instance, NodeId, Path};
use crate::rational::{parse_rational, Capacity, Rational};

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn number<T: std::str::FromStr>(line: usize, field: &str) -> Result<T> {
    field.parse().map_err(|_| parse_err(line, format!("expected a number, got {field:?}")))
}

/// Parses `p rflow <nodes> <arcs> <k>`, `s <node>`, `t <node>` and
/// `a <tail> <head> <capacity>` records. Arc ids follow file order.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut source = None;
    let mut sink = None;
    let mut arcs = Vec::new();
    for (line, fields) in records(text) {
        match fields[0] {
            "p" => {
                if fields.len() != 5 || fields[1] != "rflow" {
                    return Err(parse_err(line, "expected `p rflow <nodes> <arcs> <k>`"));
                }
                if header.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                header = Some((number(line, fields[2])?, number(line, fields[3])?, number(line, fields[4])?));
            }
            "s" | "t" => {
                if fields.len() != 2 {
                    return Err(parse_err(line, "expected one node id"));
                }
                let node: NodeId = number(line, fields[1])?;
                let slot = if fields[0] == "s" { &mut source } else { &mut sink };
                if slot.replace(node).is_some() {
                    return Err(parse_err(line, format!("duplicate `{}` record", fields[0])));
                }
            }
            "a" => {
                if header.is_none() {
                    return Err(parse_err(line, "arc before problem line"));
                }
                if fields.len() != 4 {
                    return Err(parse_err(line, "expected `a <tail> <head> <capacity>`"));
                }
                let capacity: Capacity = fields[3].parse().map_err(|e: String| parse_err(line, e))?;
                arcs.push(Arc::new(number(line, fields[1])?, number(line, fields[2])?, capacity));
            }
            other => return Err(parse_err(line, format!("unknown record type {other:?}"))),
        }
    }
    let (nodes, arc_count, k) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if arcs.len() != arc_count {
        return Err(parse_err(0, format!("header declares {arc_count} arcs, found {}", arcs.len())));
    }
    let source = source.ok_or_else(|| parse_err(0, "missing source record"))?;
    let sink = sink.ok_or_else(|| parse_err(0, "missing sink record"))?;
    Ok(Instance::new(nodes, arcs, source, sink, k))
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "p rflow {} {} {}", inst.node_count, inst.arc_count(), inst.k).unwrap();
    writeln!(out, "s {}", inst.source).unwrap();
    writeln!(out, "t {}", inst.sink).unwrap();
    for arc in &inst.arcs {
        writeln!(out, "a {} {} {}", arc.tail, arc.head, arc.capacity).unwrap();
    }
    out
}

/// Parses `f <arc_id> ... : <rational>` lines.
pub fn parse_path_flow(text: &str) -> Result<PathFlow> {
    let mut flow = PathFlow::new();
    for (line, fields) in records(text) {
        if fields[0] != "f" {
            return Err(parse_err(line, format!("unknown record type {:?}", fields[0])));
        }
        let colon = fields
            .iter()
            .position(|f| *f == ":")
            .ok_or_else(|| parse_err(line, "missing `:` before the path value"))?;
        if colon + 2 != fields.len() {
            return Err(parse_err(line, "expected exactly one value after `:`"));
        }
        let arcs = fields[1..colon]
            .iter()
            .map(|f| number::<ArcId>(line, f))
            .collect::<Result<Vec<_>>>()?;
        let value: Rational = parse_rational(fields[colon + 1])
            .ok_or_else(|| parse_err(line, "bad rational value"))?;
        if value < Rational::from_integer(0.into()) {
            return Err(parse_err(line, "negative path value"));
        }
        flow.add(Path(arcs), value);
    }
    Ok(flow)
}

pub fn write_path_flow(flow: &PathFlow) -> String {
    let mut out = String::new();
    for (path, value) in flow.iter() {
        out.push('f');
        for a in path.arcs() {
            write!(out, " {a}").unwrap();
        }
        writeln!(out, " : {}/{}", value.numer(), value.denom()).unwrap();
    }
    out
}

/// Parses a single `S <arc_id> ...` record.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut found = None;
    for (line, fields) in records(text) {
        if fields[0] != "S" {
            return Err(parse_err(line, format!("unknown record type {:?}", fields[0])));
        }
        if found.is_some() {
            return Err(parse_err(line, "more than one scenario"));
        }
        let arcs = fields[1..]
            .iter()
            .map(|f| number::<ArcId>(line, f))
            .collect::<Result<Vec<_>>>()?;
        found = Some(Scenario::new(arcs));
    }
    found.ok_or_else(|| parse_err(0, "missing scenario record"))
}

pub fn write_scenario(scenario: &Scenario) -> String {
    let mut out = String::from("S");
    for a in scenario.arcs() {
        write!(out, " {a}").unwrap();
    }
    out.push('\n');
    out
}

/// A plain graph: `g <node_count>` followed by `e <u> <v>` records. Whether
/// edges are directed is up to the consumer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainGraph {
    pub node_count: usize,
    pub edges: Vec<(NodeId, NodeId)>,
}

pub fn parse_graph(text: &str) -> Result<PlainGraph> {
    let mut node_count = None;
    let mut edges = Vec::new();
    for (line, fields) in records(text) {
        match (fields[0], fields.len()) {
            ("g", 2) => node_count = Some(number(line, fields[1])?),
            ("e", 3) => {
                let n = node_count.ok_or_else(|| parse_err(line, "edge before `g` record"))?;
                let (u, v): (NodeId, NodeId) = (number(line, fields[1])?, number(line, fields[2])?);
                if u >= n || v >= n {
                    return Err(parse_err(line, "edge endpoint out of range"));
                }
                edges.push((u, v));
            }
            _ => return Err(parse_err(line, format!("unexpected record {:?}", fields.join(" ")))),
        }
    }
    let node_count = node_count.ok_or_else(|| parse_err(0, "missing `g` record"))?;
    Ok(PlainGraph { node_count, edges })
}

pub fn write_graph(g: &PlainGraph) -> String {
    let mut out = format!("g {}\n", g.node_count);
    for (u, v) in &g.edges {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}
