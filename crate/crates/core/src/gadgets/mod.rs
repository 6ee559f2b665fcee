//! The two hardness constructions, with the flows, scenarios and
//! combinatorial oracles needed to check their claims on small inputs.

mod adp;
mod clique;

pub use adp::{adp_witness_flow, build_adp_gadget, disjoint_paths_oracle, AdpGadget, AdpRoles, Terminals};
pub use clique::{
    build_clique_gadget, canonical_gadget_flow, f_top, h_star, structured_lambda, structured_scenario,
    CliqueGadget, CliqueParams, CliqueRoles, FlowVariant, StructuredLambda,
};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::format::PlainGraph;

/// A simple undirected graph on vertices `0..vertex_count`. Edges are stored
/// as `(u, v)` with `u < v`, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidInstance(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidInstance(format!("duplicate edge {e:?}")));
            }
            out.push(e);
        }
        Ok(SimpleGraph { vertex_count, edges: out })
    }

    pub fn from_plain(g: &PlainGraph) -> Result<Self> {
        SimpleGraph::new(g.node_count, g.edges.iter().copied())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        SimpleGraph::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        SimpleGraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle on n >= 3 vertices is simple")
    }

    /// Number of edges with both ends in `subset`.
    pub fn induced_edges(&self, subset: &BTreeSet<usize>) -> usize {
        self.edges.iter().filter(|(u, v)| subset.contains(u) && subset.contains(v)).count()
    }
}

/// All subsets of `0..n` with at most `max_size` elements, ordered by size
/// and then lexicographically.
pub(crate) fn small_subsets(n: usize, max_size: usize) -> Vec<BTreeSet<usize>> {
    use itertools::Itertools;
    (0..=max_size.min(n))
        .flat_map(|size| (0..n).combinations(size))
        .map(|c| c.into_iter().collect())
        .collect()
}
