//! The path-flow linear program for maximum robust flow, solved exactly either
//! with every failure scenario materialized or by adding violated scenarios
//! lazily, plus dual certificates and brute-force dual separation.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::eval::{nominal_value, worst_case_scenario, PathFlow, Scenario};
use crate::graph::{enumerate_paths, ArcId, Instance, Path};
use crate::rational::{binomial, Rational};
use crate::simplex::{Constraint, LinearProgram, LpSolution, Relation};

pub const DEFAULT_PATH_LIMIT: usize = 100_000;
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalSolution {
    pub x: PathFlow,
    pub lambda: Rational,
    pub objective: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DualSolution {
    /// Capacity-row duals; arcs not listed are zero.
    pub y: BTreeMap<ArcId, Rational>,
    /// Scenario-row duals; scenarios not listed are zero.
    pub z: BTreeMap<Scenario, Rational>,
}

impl DualSolution {
    pub fn objective(&self, inst: &Instance) -> Option<Rational> {
        let mut total = Rational::zero();
        for (&arc, y) in &self.y {
            if y.is_zero() {
                continue;
            }
            total += inst.arcs.get(arc)?.capacity.as_finite()? * y;
        }
        Some(total)
    }

    /// `sum_{e in P} y(e) + sum_{S : P meets S} z(S)`.
    pub fn path_lhs(&self, path: &Path) -> Rational {
        let y: Rational = path
            .arcs()
            .iter()
            .filter_map(|a| self.y.get(a))
            .fold(Rational::zero(), |acc, v| acc + v);
        self.z
            .iter()
            .filter(|(s, _)| s.hits(path))
            .fold(y, |acc, (_, v)| acc + v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub primal: PrimalSolution,
    pub dual: Option<DualSolution>,
    pub worst_scenario: Scenario,
    pub iterations: usize,
    pub scenarios_generated: usize,
    /// Master objective after each iteration (a single entry for the full LP).
    pub history: Vec<Rational>,
}

/// Column layout shared by the full LP and the row-generation master:
/// one column per path, then lambda.
struct PathLp {
    paths: Vec<Path>,
}

impl PathLp {
    fn new(inst: &Instance, path_limit: usize) -> Result<Self> {
        if let Some(arc) = inst.arcs.iter().position(|a| a.capacity.is_infinite()) {
            return Err(Error::InfiniteCapacity(arc));
        }
        Ok(PathLp { paths: enumerate_paths(inst, path_limit)? })
    }

    fn lambda(&self) -> usize {
        self.paths.len()
    }

    fn build(
        &self,
        inst: &Instance,
        scenarios: &[Scenario],
        fixed_nominal: Option<&Rational>,
    ) -> LinearProgram {
        let one = Rational::one();
        let mut lp = LinearProgram::new(self.paths.len() + 1);
        lp.objective = (0..self.paths.len()).map(|j| (j, one.clone())).collect();
        lp.objective.push((self.lambda(), -one.clone()));
        for (arc, a) in inst.arcs.iter().enumerate() {
            let coeffs = self
                .paths
                .iter()
                .enumerate()
                .filter(|(_, p)| p.contains(arc))
                .map(|(j, _)| (j, one.clone()))
                .collect();
            let cap = a.capacity.as_finite().expect("checked finite").clone();
            lp.add(Constraint::new(coeffs, Relation::Le, cap));
        }
        for s in scenarios {
            let mut coeffs: Vec<(usize, Rational)> = self
                .paths
                .iter()
                .enumerate()
                .filter(|(_, p)| s.hits(p))
                .map(|(j, _)| (j, one.clone()))
                .collect();
            coeffs.push((self.lambda(), -one.clone()));
            lp.add(Constraint::new(coeffs, Relation::Le, Rational::zero()));
        }
        if let Some(value) = fixed_nominal {
            let coeffs = (0..self.paths.len()).map(|j| (j, one.clone())).collect();
            lp.add(Constraint::new(coeffs, Relation::Eq, value.clone()));
        }
        lp
    }

    fn primal(&self, sol: &LpSolution) -> PrimalSolution {
        let x: PathFlow = self
            .paths
            .iter()
            .zip(&sol.values)
            .map(|(p, v)| (p.clone(), v.clone()))
            .collect();
        PrimalSolution {
            x,
            lambda: sol.values[self.lambda()].clone(),
            objective: sol.objective.clone(),
        }
    }

    /// Reads `y` and `z` from the row duals. Lambda is nonnegative in the LP,
    /// which only gives `sum z <= 1`; the slack is put on `worst`, which keeps
    /// every path row satisfied and leaves the objective unchanged.
    fn dual(
        &self,
        inst: &Instance,
        scenarios: &[Scenario],
        sol: &LpSolution,
        worst: &Scenario,
    ) -> DualSolution {
        let m = inst.arc_count();
        let y = (0..m)
            .filter(|&a| !sol.duals[a].is_zero())
            .map(|a| (a, sol.duals[a].clone()))
            .collect();
        let mut z: BTreeMap<Scenario, Rational> = BTreeMap::new();
        for (s, v) in scenarios.iter().zip(&sol.duals[m..]) {
            if !v.is_zero() {
                *z.entry(s.clone()).or_insert_with(Rational::zero) += v;
            }
        }
        let total = z.values().fold(Rational::zero(), |acc, v| acc + v);
        if total < Rational::one() {
            *z.entry(worst.clone()).or_insert_with(Rational::zero) += Rational::one() - total;
        }
        DualSolution { y, z }
    }
}

fn all_scenarios(inst: &Instance, budget: u128) -> Result<Vec<Scenario>> {
    let required = binomial(inst.arc_count(), inst.k);
    if required > budget {
        return Err(Error::EnumerationBudgetExceeded { required, budget });
    }
    Ok((0..inst.arc_count())
        .combinations(inst.k)
        .map(Scenario::new)
        .collect())
}

/// Solves the LP with every capacity row and every scenario row present.
pub fn solve_full_lp(inst: &Instance, path_limit: usize, scenario_budget: u128) -> Result<SolveReport> {
    let model = PathLp::new(inst, path_limit)?;
    let scenarios = all_scenarios(inst, scenario_budget)?;
    let sol = model.build(inst, &scenarios, None).maximize()?;
    let primal = model.primal(&sol);
    let worst = worst_case_scenario(inst, &primal.x, scenario_budget)?;
    let dual = model.dual(inst, &scenarios, &sol, &worst.scenario);
    Ok(SolveReport {
        history: vec![primal.objective.clone()],
        primal,
        dual: Some(dual),
        worst_scenario: worst.scenario,
        iterations: 1,
        scenarios_generated: scenarios.len(),
    })
}

/// Full LP with the extra row `sum_P x(P) = nominal`. No dual is reported.
pub fn solve_full_lp_fixed_nominal(
    inst: &Instance,
    path_limit: usize,
    scenario_budget: u128,
    nominal: &Rational,
) -> Result<SolveReport> {
    let model = PathLp::new(inst, path_limit)?;
    let scenarios = all_scenarios(inst, scenario_budget)?;
    let sol = model.build(inst, &scenarios, Some(nominal)).maximize()?;
    let primal = model.primal(&sol);
    let worst = worst_case_scenario(inst, &primal.x, scenario_budget)?;
    Ok(SolveReport {
        history: vec![primal.objective.clone()],
        primal,
        dual: None,
        worst_scenario: worst.scenario,
        iterations: 1,
        scenarios_generated: scenarios.len(),
    })
}

/// Starts from no scenario rows and adds the adversary's best response to
/// the master flow until no scenario destroys more than the master's lambda.
pub fn solve_row_generation(
    inst: &Instance,
    path_limit: usize,
    separation_budget: u128,
) -> Result<SolveReport> {
    let model = PathLp::new(inst, path_limit)?;
    let mut scenarios: Vec<Scenario> = Vec::new();
    let mut history = Vec::new();
    loop {
        let sol = model.build(inst, &scenarios, None).maximize()?;
        let primal = model.primal(&sol);
        history.push(primal.objective.clone());
        let worst = worst_case_scenario(inst, &primal.x, separation_budget)?;
        if worst.lambda > primal.lambda {
            assert!(
                !scenarios.contains(&worst.scenario),
                "violated scenario already in the master"
            );
            scenarios.push(worst.scenario);
            continue;
        }
        let dual = model.dual(inst, &scenarios, &sol, &worst.scenario);
        return Ok(SolveReport {
            primal,
            dual: Some(dual),
            worst_scenario: worst.scenario,
            iterations: history.len(),
            scenarios_generated: scenarios.len(),
            history,
        });
    }
}

/// Checks the dual certificate: nonnegativity, `sum z = 1`, every path row
/// of the dual, and equality of dual and primal objectives. Exact.
pub fn verify_duality(report: &SolveReport, inst: &Instance) -> bool {
    let Some(dual) = &report.dual else { return false };
    if dual.y.values().chain(dual.z.values()).any(|v| v.is_negative()) {
        return false;
    }
    if dual.z.keys().any(|s| s.check(inst).is_err()) {
        return false;
    }
    let z_total = dual.z.values().fold(Rational::zero(), |acc, v| acc + v);
    if !z_total.is_one() {
        return false;
    }
    if dual.objective(inst).as_ref() != Some(&report.primal.objective) {
        return false;
    }
    match enumerate_paths(inst, DEFAULT_PATH_LIMIT) {
        Ok(paths) => dual_separation(&paths, dual).is_none(),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolatedPath {
    pub path: Path,
    pub lhs: Rational,
}

/// Brute-force separation over the given paths: the path with the smallest
/// dual left-hand side, if that is below 1. Ties go to the earlier path.
pub fn dual_separation(paths: &[Path], dual: &DualSolution) -> Option<ViolatedPath> {
    let mut best: Option<ViolatedPath> = None;
    for path in paths {
        let lhs = dual.path_lhs(path);
        if best.as_ref().is_none_or(|b| lhs < b.lhs) {
            best = Some(ViolatedPath { path: path.clone(), lhs });
        }
    }
    best.filter(|b| b.lhs < Rational::one())
}

/// Nominal value of the reported flow.
pub fn report_nominal(report: &SolveReport) -> Rational {
    nominal_value(&report.primal.x)
}
