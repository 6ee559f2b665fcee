//! Exact algorithms for the tractable regimes (unit capacities; integral
//! capacities in {1, 2}), the greedy cut interdiction used to analyse them,
//! and an exhaustive integral solver that serves as their oracle.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::eval::{integral_lambda, PathFlow};
use crate::graph::{
    enumerate_paths, max_flow, min_cardinality_cut, path_decompose, unit_override, ArcId, Cut,
    Instance,
};
use crate::lp::DEFAULT_PATH_LIMIT;
use crate::rational::{binomial, int, Capacity, Rational};

/// Under unit capacities a maximum flow is a maximum robust flow, with value
/// `max(0, |C| - k)` for a minimum cut `C`.
pub fn solve_unit_capacity(inst: &Instance) -> Result<(PathFlow, Rational)> {
    if let Some(arc) = inst.arcs.iter().position(|a| a.capacity != Capacity::from_int(1)) {
        return Err(Error::NotUnitCapacity(arc));
    }
    let flow = max_flow(inst, None)?;
    let x = path_decompose(inst, &flow.arc_flow)?;
    let cut = min_cardinality_cut(inst);
    let value = (cut.arc_ids.len() as i64 - inst.k as i64).max(0);
    Ok((x, int(value)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cap2Choice {
    Zero,
    /// Maximum flow under unit capacities.
    UnitMaxFlow,
    /// Maximum flow under the true capacities.
    MaxFlow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cap2Solution {
    pub flow: PathFlow,
    pub value: Rational,
    pub choice: Cap2Choice,
    pub unit_max_flow: Rational,
    pub max_flow: Rational,
}

/// Integral robust flow for capacities in {1, 2}: the best of the zero flow,
/// a unit-capacity maximum flow (worth `val - k`) and a maximum flow (worth
/// `val - 2k`).
pub fn solve_integral_cap2(inst: &Instance) -> Result<Cap2Solution> {
    for (id, arc) in inst.arcs.iter().enumerate() {
        if arc.capacity != Capacity::from_int(1) && arc.capacity != Capacity::from_int(2) {
            return Err(Error::CapacityOutOfRange(id));
        }
    }
    let k = int(inst.k as i64);
    let unit = max_flow(inst, Some(&unit_override(inst)))?;
    let full = max_flow(inst, None)?;
    // Ordered by preference on ties: larger nominal value, then unit over full.
    let mut candidates = [
        (Cap2Choice::UnitMaxFlow, &unit.value - &k, unit.value.clone()),
        (Cap2Choice::MaxFlow, &full.value - &k - &k, full.value.clone()),
        (Cap2Choice::Zero, Rational::zero(), Rational::zero()),
    ];
    candidates.sort_by(|a, b| b.1.cmp(&a.1).then(b.2.cmp(&a.2)));
    let (choice, value, _) = candidates[0].clone();
    let flow = match choice {
        Cap2Choice::Zero => PathFlow::new(),
        Cap2Choice::UnitMaxFlow => path_decompose(inst, &unit.arc_flow)?,
        Cap2Choice::MaxFlow => path_decompose(inst, &full.arc_flow)?,
    };
    Ok(Cap2Solution { flow, value, choice, unit_max_flow: unit.value, max_flow: full.value })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyInterdiction {
    /// Minimum-cardinality cut the arcs are drawn from.
    pub cut: Cut,
    pub arcs: Vec<ArcId>,
    /// Each chosen arc with the flow it newly destroyed.
    pub trace: Vec<(ArcId, Rational)>,
    /// Largest marginal destruction left in `cut` after the greedy stops;
    /// zero when the whole cut was taken.
    pub residual_delta: Rational,
}

/// Greedily picks up to `k` arcs of a minimum-cardinality cut, each time the
/// arc destroying the most not-yet-destroyed flow (lowest id on ties).
pub fn greedy_cut_interdiction(inst: &Instance, x: &PathFlow) -> GreedyInterdiction {
    let cut = min_cardinality_cut(inst);
    let mut chosen: Vec<ArcId> = Vec::new();
    let mut trace = Vec::new();
    let marginal = |chosen: &[ArcId], e: ArcId| -> Rational {
        x.iter()
            .filter(|(p, _)| p.contains(e) && !chosen.iter().any(|&c| p.contains(c)))
            .fold(Rational::zero(), |acc, (_, v)| acc + v)
    };
    let best_remaining = |chosen: &[ArcId]| -> Option<(ArcId, Rational)> {
        cut.arc_ids
            .iter()
            .filter(|e| !chosen.contains(e))
            .map(|&e| (e, marginal(chosen, e)))
            .fold(None, |best: Option<(ArcId, Rational)>, (e, d)| match best {
                Some((_, ref bd)) if *bd >= d => best,
                _ => Some((e, d)),
            })
    };
    while chosen.len() < inst.k {
        let Some((e, delta)) = best_remaining(&chosen) else { break };
        chosen.push(e);
        trace.push((e, delta));
    }
    let residual_delta = best_remaining(&chosen).map(|(_, d)| d).unwrap_or_else(Rational::zero);
    GreedyInterdiction { cut, arcs: chosen, trace, residual_delta }
}

/// Exhaustive search over integral path-value vectors, depth-first in path
/// order with capacity pruning. Returns the lexicographically smallest
/// optimal vector and its robust value.
///
/// `budget` bounds both the number of complete vectors visited and C(m, k).
pub fn brute_force_integral(inst: &Instance, budget: u128) -> Result<(PathFlow, Rational)> {
    let mut caps = Vec::with_capacity(inst.arc_count());
    for (id, arc) in inst.arcs.iter().enumerate() {
        let cap = arc
            .capacity
            .as_integer()
            .and_then(|c: BigInt| c.to_i64())
            .ok_or(Error::NonIntegralCapacity(id))?;
        caps.push(cap);
    }
    let required = binomial(inst.arc_count(), inst.k);
    if required > budget {
        return Err(Error::EnumerationBudgetExceeded { required, budget });
    }
    let paths = enumerate_paths(inst, DEFAULT_PATH_LIMIT)?;

    struct Search<'a> {
        inst: &'a Instance,
        paths: &'a [crate::graph::Path],
        remaining: Vec<i64>,
        values: Vec<i64>,
        visited: u128,
        budget: u128,
        best: Option<(i64, Vec<i64>)>,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize) -> Result<()> {
            if depth == self.paths.len() {
                self.visited += 1;
                if self.visited > self.budget {
                    return Err(Error::EnumerationBudgetExceeded {
                        required: self.visited,
                        budget: self.budget,
                    });
                }
                let total: i64 = self.values.iter().sum();
                let lambda =
                    integral_lambda(self.paths, &self.values, self.inst.arc_count(), self.inst.k);
                let robust = total - lambda;
                if self.best.as_ref().is_none_or(|(b, _)| robust > *b) {
                    self.best = Some((robust, self.values.clone()));
                }
                return Ok(());
            }
            let arcs = self.paths[depth].arcs();
            let upper = arcs.iter().map(|&a| self.remaining[a]).min().unwrap_or(0);
            for v in 0..=upper {
                self.values[depth] = v;
                for &a in arcs {
                    self.remaining[a] -= v;
                }
                let outcome = self.run(depth + 1);
                for &a in arcs {
                    self.remaining[a] += v;
                }
                outcome?;
            }
            self.values[depth] = 0;
            Ok(())
        }
    }

    let mut search = Search {
        inst,
        paths: &paths,
        remaining: caps,
        values: vec![0; paths.len()],
        visited: 0,
        budget,
        best: None,
    };
    search.run(0)?;
    let (robust, values) = search.best.expect("the zero vector is always visited");
    let flow = paths
        .iter()
        .zip(values)
        .map(|(p, v)| (p.clone(), int(v)))
        .collect();
    Ok((flow, int(robust)))
}
