//! Uniform flows: flows in which no arc carries more than a `1/h` fraction of
//! the total. A single arc failure destroys at most that fraction, so `k`
//! failures of an `(k+1)`-uniform flow leave at least `value / (k + 1)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::eval::PathFlow;
use crate::graph::{path_decompose, Instance};
use crate::rational::{int, Rational};
use crate::simplex::{Constraint, LinearProgram, Relation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformFlow {
    pub value: Rational,
    pub flow: PathFlow,
}

/// Maximizes `F` over arc flows `f` with conservation, `f <= u` and
/// `h f(e) <= F` for every arc. Infinite capacities contribute no row; the
/// LP is then unbounded only if an all-infinite route exists.
pub fn max_uniform_flow(inst: &Instance, h: usize) -> Result<UniformFlow> {
    if h == 0 {
        return Err(Error::InvalidInstance("uniformity parameter must be at least 1".into()));
    }
    let m = inst.arc_count();
    let total = m;
    let one = Rational::one();
    let mut lp = LinearProgram::new(m + 1);
    lp.objective = vec![(total, one.clone())];
    for v in 0..inst.node_count {
        if v == inst.sink {
            continue;
        }
        let mut coeffs: Vec<(usize, Rational)> = Vec::new();
        for (e, arc) in inst.arcs.iter().enumerate() {
            if arc.tail == arc.head {
                continue;
            }
            if arc.tail == v {
                coeffs.push((e, one.clone()));
            } else if arc.head == v {
                coeffs.push((e, -one.clone()));
            }
        }
        if v == inst.source {
            coeffs.push((total, -one.clone()));
        }
        lp.add(Constraint::new(coeffs, Relation::Eq, Rational::zero()));
    }
    let h = int(h as i64);
    for (e, arc) in inst.arcs.iter().enumerate() {
        if let Some(cap) = arc.capacity.as_finite() {
            lp.add(Constraint::new(vec![(e, one.clone())], Relation::Le, cap.clone()));
        }
        lp.add(Constraint::new(
            vec![(e, h.clone()), (total, -one.clone())],
            Relation::Le,
            Rational::zero(),
        ));
    }
    let sol = lp.maximize().map_err(|e| match e {
        Error::Unbounded => Error::UnboundedFlow,
        other => other,
    })?;
    let flow = path_decompose(inst, &sol.values[..m])?;
    Ok(UniformFlow { value: sol.objective, flow })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustBaseline {
    pub flow: PathFlow,
    /// Nominal value of `flow`.
    pub value: Rational,
    /// `value / (k + 1)`, a lower bound on the robust value of `flow`.
    pub guarantee: Rational,
}

pub fn robust_baseline(inst: &Instance, k: usize) -> Result<RobustBaseline> {
    let uniform = max_uniform_flow(inst, k + 1)?;
    let guarantee = &uniform.value / int(k as i64 + 1);
    Ok(RobustBaseline { flow: uniform.flow, value: uniform.value, guarantee })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{arc_flow_value, nominal_value, robust_value};
    use crate::fixtures::{diamond, parallel, single_path, triple};
    use crate::lp::solve_full_lp;
    use crate::rational::{ratio, Capacity};

    fn uniform(inst: &Instance, h: usize) {
        let u = max_uniform_flow(inst, h).unwrap();
        assert_eq!(nominal_value(&u.flow), u.value);
        let bound = &u.value / int(h as i64);
        assert!((0..inst.arc_count()).all(|e| arc_flow_value(&u.flow, e) <= bound));
    }

    #[test]
    fn uniform_fixtures() {
        assert_eq!(max_uniform_flow(&triple(1), 2).unwrap().value, int(3));
        assert_eq!(max_uniform_flow(&single_path(Capacity::from_int(1), Capacity::from_int(1), 0), 2).unwrap().value, int(0));
        assert_eq!(max_uniform_flow(&diamond(1), 2).unwrap().value, int(2));
        assert_eq!(max_uniform_flow(&diamond(1), 1).unwrap().value, int(2));
        assert_eq!(max_uniform_flow(&diamond(1), 3).unwrap().value, int(0));
        // capacities 1 and 3: the unit arc must carry half of the total
        let mut two = parallel(2, Capacity::from_int(3), 0);
        two.arcs[0].capacity = Capacity::from_int(1);
        assert_eq!(max_uniform_flow(&two, 2).unwrap().value, int(2));
        for h in 1..4 {
            uniform(&triple(1), h);
            uniform(&diamond(1), h);
            uniform(&two, h);
        }
    }

    #[test]
    fn unbounded_and_invalid() {
        assert_eq!(max_uniform_flow(&parallel(2, Capacity::Infinite, 0), 2).unwrap_err(), Error::UnboundedFlow);
        assert!(max_uniform_flow(&triple(1), 0).is_err());
        let mixed = single_path(Capacity::Infinite, Capacity::from_int(2), 0);
        assert_eq!(max_uniform_flow(&mixed, 1).unwrap().value, int(2));
    }

    #[test]
    fn baseline_fixtures() {
        let b = robust_baseline(&triple(1), 1).unwrap();
        assert_eq!(b.guarantee, ratio(3, 2));
        assert_eq!(robust_value(&triple(1), &b.flow, 100).unwrap(), int(2));

        let b = robust_baseline(&diamond(1), 1).unwrap();
        assert_eq!(b.guarantee, int(1));
        assert_eq!(solve_full_lp(&diamond(1), 100, 100).unwrap().primal.objective, int(1));

        let b = robust_baseline(&diamond(2), 2).unwrap();
        assert_eq!(b.guarantee, int(0));
    }
}
