//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `max c^T x` subject to linear rows (`<=`, `>=`, `=`) and `x >= 0`.
//! Row duals are read off the final tableau.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Maximized.
    pub objective: Vec<(usize, Rational)>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// One dual value per constraint, in input order. Nonnegative for `<=`
    /// rows, nonpositive for `>=` rows.
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, ..Default::default() }
    }

    pub fn add(&mut self, constraint: Constraint) -> usize {
        self.constraints.push(constraint);
        self.constraints.len() - 1
    }

    pub fn maximize(&self) -> Result<LpSolution> {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs for the real objective, with the objective value in the
    /// rhs slot.
    cost: Vec<Rational>,
    /// Reduced costs for the phase-one objective.
    phase_one: Vec<Rational>,
    basis: Vec<usize>,
    artificial_from: usize,
    /// Column holding `B^-1 e_i` for each row, and the sign of the row.
    identity: Vec<(usize, bool)>,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.constraints.len();
        let n = lp.num_vars;
        // Normalize to nonnegative right-hand sides.
        let normalized: Vec<(Relation, bool)> = lp
            .constraints
            .iter()
            .map(|c| {
                let flip = c.rhs.is_negative();
                let rel = match (c.relation, flip) {
                    (Relation::Le, true) => Relation::Ge,
                    (Relation::Ge, true) => Relation::Le,
                    (r, _) => r,
                };
                (rel, flip)
            })
            .collect();
        let slack_count = normalized.iter().filter(|(r, _)| *r != Relation::Eq).count();
        let artificial_count = normalized.iter().filter(|(r, _)| *r != Relation::Le).count();
        let artificial_from = n + slack_count;
        let width = artificial_from + artificial_count + 1;
        let rhs_col = width - 1;

        let mut rows = vec![vec![Rational::zero(); width]; m];
        let mut basis = vec![0; m];
        let mut identity = vec![(0, false); m];
        let mut next_slack = n;
        let mut next_artificial = artificial_from;
        for (i, c) in lp.constraints.iter().enumerate() {
            let (rel, flip) = normalized[i];
            let row = &mut rows[i];
            for (j, a) in &c.coeffs {
                row[*j] += if flip { -a.clone() } else { a.clone() };
            }
            row[rhs_col] = c.rhs.abs();
            match rel {
                Relation::Le => {
                    row[next_slack] = Rational::from_integer(1.into());
                    basis[i] = next_slack;
                    identity[i] = (next_slack, flip);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = Rational::from_integer((-1).into());
                    next_slack += 1;
                    row[next_artificial] = Rational::from_integer(1.into());
                    basis[i] = next_artificial;
                    identity[i] = (next_artificial, flip);
                    next_artificial += 1;
                }
                Relation::Eq => {
                    row[next_artificial] = Rational::from_integer(1.into());
                    basis[i] = next_artificial;
                    identity[i] = (next_artificial, flip);
                    next_artificial += 1;
                }
            }
        }

        // Slack and artificial columns have zero cost, so the reduced cost of
        // the real objective starts at -c.
        let mut cost = vec![Rational::zero(); width];
        for (j, c) in &lp.objective {
            cost[*j] -= c;
        }
        // Phase one maximizes -(sum of artificials).
        let mut phase_one = vec![Rational::zero(); width];
        for (i, row) in rows.iter().enumerate() {
            if basis[i] >= artificial_from {
                for (j, v) in row.iter().enumerate() {
                    if j < artificial_from || j == rhs_col {
                        phase_one[j] -= v;
                    }
                }
            }
        }
        Tableau { rows, cost, phase_one, basis, artificial_from, identity, pivots: 0 }
    }

    fn rhs_col(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let pv = self.rows[r][c].clone();
        let nonzero: Vec<usize> =
            (0..self.cost.len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        for &j in &nonzero {
            self.rows[r][j] /= &pv;
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[c].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                target[j] -= delta;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        eliminate(&mut self.phase_one);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Runs Bland's rule on the given reduced-cost row until optimal.
    fn optimize(&mut self, phase_one: bool) -> Result<()> {
        let rhs = self.rhs_col();
        loop {
            let costs = if phase_one { &self.phase_one } else { &self.cost };
            let limit = if phase_one { rhs } else { self.artificial_from };
            let Some(entering) = (0..limit).find(|&j| costs[j].is_negative()) else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[entering].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[entering];
                let better = match &leaving {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return Err(Error::Unbounded);
            };
            self.pivot(r, entering);
        }
    }

    fn solve(mut self, lp: &LinearProgram) -> Result<LpSolution> {
        let rhs = self.rhs_col();
        if self.basis.iter().any(|&b| b >= self.artificial_from) {
            self.optimize(true)?;
            if !self.phase_one[rhs].is_zero() {
                return Err(Error::Infeasible);
            }
            // Drive zero-valued artificials out where a real column allows it.
            for r in 0..self.rows.len() {
                if self.basis[r] < self.artificial_from {
                    continue;
                }
                if let Some(j) = (0..self.artificial_from).find(|&j| !self.rows[r][j].is_zero()) {
                    self.pivot(r, j);
                }
            }
        }
        self.optimize(false)?;

        let mut values = vec![Rational::zero(); lp.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < lp.num_vars {
                values[b] = self.rows[r][rhs].clone();
            }
        }
        let objective = lp
            .objective
            .iter()
            .fold(Rational::zero(), |acc, (j, c)| acc + c * &values[*j]);
        let duals = self
            .identity
            .iter()
            .map(|&(col, flip)| {
                let y = self.cost[col].clone();
                if flip {
                    -y
                } else {
                    y
                }
            })
            .collect();
        Ok(LpSolution { values, objective, duals, pivots: self.pivots })
    }
}
