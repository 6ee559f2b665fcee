//! Path flows against the adversary: nominal value, destroyed value under a
//! failure scenario, exhaustive worst case and robust value.

use std::collections::btree_map;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::AddAssign;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ArcId, Instance, Path};
use crate::rational::{binomial, common_denominator, Capacity, Rational};

/// Nonnegative values on simple source-sink paths. Zero entries are never
/// stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathFlow {
    entries: BTreeMap<Path, Rational>,
}

impl PathFlow {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `amount` to the value of `path`. Zero amounts are ignored.
    pub fn add(&mut self, path: Path, amount: Rational) {
        if amount.is_zero() {
            return;
        }
        match self.entries.entry(path) {
            btree_map::Entry::Vacant(v) => {
                v.insert(amount);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += amount;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, path: &Path) -> Option<&Rational> {
        self.entries.get(path)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Path, &Rational)> {
        self.entries.iter()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.entries.keys()
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: &Rational) -> PathFlow {
        let mut out = PathFlow::new();
        for (p, v) in &self.entries {
            out.add(p.clone(), v * factor);
        }
        out
    }

    /// Arcs carrying positive flow.
    pub fn support_arcs(&self) -> BTreeSet<ArcId> {
        self.entries.keys().flat_map(|p| p.arcs().iter().copied()).collect()
    }
}

impl FromIterator<(Path, Rational)> for PathFlow {
    fn from_iter<I: IntoIterator<Item = (Path, Rational)>>(iter: I) -> Self {
        let mut flow = PathFlow::new();
        for (p, v) in iter {
            flow.add(p, v);
        }
        flow
    }
}

/// A set of failing arcs, kept sorted. Orders lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scenario(Vec<ArcId>);

impl Scenario {
    pub fn new(arcs: impl IntoIterator<Item = ArcId>) -> Self {
        let set: BTreeSet<ArcId> = arcs.into_iter().collect();
        Scenario(set.into_iter().collect())
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.0.binary_search(&arc).is_ok()
    }

    pub fn hits(&self, path: &Path) -> bool {
        path.arcs().iter().any(|&a| self.contains(a))
    }

    /// Checks that the scenario has exactly `inst.k` valid arcs.
    pub fn check(&self, inst: &Instance) -> Result<()> {
        if self.0.len() != inst.k {
            return Err(Error::SizeMismatch { expected: inst.k, actual: self.0.len() });
        }
        if let Some(&bad) = self.0.iter().find(|&&a| a >= inst.arc_count()) {
            return Err(Error::InvalidInstance(format!("scenario arc {bad} out of range")));
        }
        Ok(())
    }
}

pub fn nominal_value(x: &PathFlow) -> Rational {
    x.values().fold(Rational::zero(), |acc, v| acc + v)
}

/// Total flow through `arc`.
pub fn arc_flow_value(x: &PathFlow, arc: ArcId) -> Rational {
    x.iter()
        .filter(|(p, _)| p.contains(arc))
        .fold(Rational::zero(), |acc, (_, v)| acc + v)
}

/// Flow on every arc of `inst`, indexed by arc id.
pub fn arc_flows(inst: &Instance, x: &PathFlow) -> Vec<Rational> {
    let mut flows = vec![Rational::zero(); inst.arc_count()];
    for (p, v) in x.iter() {
        for &a in p.arcs() {
            flows[a] += v;
        }
    }
    flows
}

/// Flow on paths meeting `failed`; a path is counted once however many of its
/// arcs fail.
pub fn destroyed_value(x: &PathFlow, failed: &Scenario) -> Rational {
    x.iter()
        .filter(|(p, _)| failed.hits(p))
        .fold(Rational::zero(), |acc, (_, v)| acc + v)
}

/// Checks that every path is a simple source-sink path of `inst` and that arc
/// capacities hold.
pub fn check_feasible(inst: &Instance, x: &PathFlow) -> Result<()> {
    for (p, v) in x.iter() {
        if !inst.is_simple_path(p.arcs()) {
            return Err(Error::NotFeasible(format!("{:?} is not a simple s-t path", p.arcs())));
        }
        if v.is_negative() {
            return Err(Error::NotFeasible(format!("negative value on {:?}", p.arcs())));
        }
    }
    for (arc, flow) in arc_flows(inst, x).into_iter().enumerate() {
        if Capacity::Finite(flow) > inst.arcs[arc].capacity {
            return Err(Error::NotFeasible(format!("arc {arc} exceeds its capacity")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstCase {
    pub scenario: Scenario,
    pub lambda: Rational,
}

/// Path incidence as bit sets, with values on a common denominator.
struct Compiled<T> {
    words: usize,
    masks: Vec<Vec<u64>>,
    values: Vec<T>,
}

impl<T> Compiled<T> {
    fn hits(&self, path: usize, scenario: &[u64]) -> bool {
        self.masks[path].iter().zip(scenario).any(|(a, b)| a & b != 0)
    }
}

fn masks_for(arc_count: usize, x: &PathFlow) -> (usize, Vec<Vec<u64>>) {
    let words = arc_count.div_ceil(64).max(1);
    let masks = x
        .paths()
        .map(|p| {
            let mut m = vec![0u64; words];
            for &a in p.arcs() {
                m[a / 64] |= 1 << (a % 64);
            }
            m
        })
        .collect();
    (words, masks)
}

/// Best scenario over all `k`-subsets of `0..m` whose smallest element is
/// `first`. Ties go to the lexicographically smallest subset.
fn best_with_first<T>(c: &Compiled<T>, m: usize, k: usize, first: usize) -> (T, Vec<ArcId>)
where
    T: Clone + Ord + Zero + for<'a> AddAssign<&'a T>,
{
    let mut combo: Vec<usize> = (first..first + k).collect();
    let mut best: Option<(T, Vec<ArcId>)> = None;
    let mut mask = vec![0u64; c.words];
    loop {
        mask.iter_mut().for_each(|w| *w = 0);
        for &a in &combo {
            mask[a / 64] |= 1 << (a % 64);
        }
        let mut total = T::zero();
        for (i, v) in c.values.iter().enumerate() {
            if c.hits(i, &mask) {
                total += v;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, combo.clone()));
        }
        // Advance positions 1..k, keeping combo[0] fixed.
        let mut i = k;
        loop {
            if i <= 1 {
                return best.expect("at least one subset");
            }
            i -= 1;
            if combo[i] < m - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn exhaustive<T>(c: &Compiled<T>, m: usize, k: usize) -> (T, Vec<ArcId>)
where
    T: Clone + Ord + Zero + Send + Sync + for<'a> AddAssign<&'a T>,
{
    if k == 0 {
        return (T::zero(), Vec::new());
    }
    (0..=m - k)
        .into_par_iter()
        .map(|first| best_with_first(c, m, k, first))
        .reduce_with(|a, b| {
            // Larger value wins; equal values keep the lexicographically smaller set.
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        })
        .expect("nonempty range")
}

/// Exhaustive worst case over all scenarios of size `inst.k`.
///
/// Fails with `EnumerationBudgetExceeded` when C(m, k) exceeds `budget`. The
/// result does not depend on the size of the rayon pool.
pub fn worst_case_scenario(inst: &Instance, x: &PathFlow, budget: u128) -> Result<WorstCase> {
    let (m, k) = (inst.arc_count(), inst.k);
    if k > m {
        return Err(Error::InvalidInstance(format!("k = {k} exceeds arc count {m}")));
    }
    let required = binomial(m, k);
    if required > budget {
        return Err(Error::EnumerationBudgetExceeded { required, budget });
    }
    let (words, masks) = masks_for(m, x);
    let denom = common_denominator(x.values());
    let numerators: Vec<BigInt> = x
        .values()
        .map(|v| (v * Rational::from_integer(denom.clone())).to_integer())
        .collect();
    let total: BigInt = numerators.iter().sum();
    let (lambda_numer, arcs) = match total.to_i128() {
        Some(_) => {
            let values = numerators.iter().map(|v| v.to_i128().expect("bounded by total")).collect();
            let (v, arcs) = exhaustive(&Compiled { words, masks, values }, m, k);
            (BigInt::from(v), arcs)
        }
        None => exhaustive(&Compiled { words, masks, values: numerators }, m, k),
    };
    Ok(WorstCase {
        scenario: Scenario(arcs),
        lambda: Rational::new(lambda_numer, denom),
    })
}

/// `nominal_value(x) - max_S destroyed_value(x, S)`, unclamped.
pub fn robust_value(inst: &Instance, x: &PathFlow, budget: u128) -> Result<Rational> {
    let worst = worst_case_scenario(inst, x, budget)?;
    Ok(nominal_value(x) - worst.lambda)
}

/// Largest destroyed value of an integral flow, given as integer path values.
/// Only arcs in the support are enumerated; padding with other arcs cannot
/// change the value.
pub(crate) fn integral_lambda(paths: &[Path], values: &[i64], arc_count: usize, k: usize) -> i64 {
    let support: Vec<ArcId> = {
        let set: BTreeSet<ArcId> = paths
            .iter()
            .zip(values)
            .filter(|(_, &v)| v > 0)
            .flat_map(|(p, _)| p.arcs().iter().copied())
            .collect();
        set.into_iter().collect()
    };
    let total: i64 = values.iter().sum();
    let r = k.min(support.len());
    if r == 0 {
        return 0;
    }
    if r == support.len() {
        return total;
    }
    let words = arc_count.div_ceil(64).max(1);
    let live: Vec<(Vec<u64>, i64)> = paths
        .iter()
        .zip(values)
        .filter(|(_, &v)| v > 0)
        .map(|(p, &v)| {
            let mut m = vec![0u64; words];
            for &a in p.arcs() {
                m[a / 64] |= 1 << (a % 64);
            }
            (m, v)
        })
        .collect();
    let mut best = 0;
    let mut mask = vec![0u64; words];
    let mut combo: Vec<usize> = (0..r).collect();
    let n = support.len();
    loop {
        mask.iter_mut().for_each(|w| *w = 0);
        for &i in &combo {
            let a = support[i];
            mask[a / 64] |= 1 << (a % 64);
        }
        let destroyed: i64 = live
            .iter()
            .filter(|(m, _)| m.iter().zip(&mask).any(|(a, b)| a & b != 0))
            .map(|(_, v)| v)
            .sum();
        if destroyed > best {
            best = destroyed;
            if best == total {
                return best;
            }
        }
        let mut i = r;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if combo[i] < n - r + i {
                combo[i] += 1;
                for j in i + 1..r {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}
