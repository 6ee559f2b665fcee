//! Seeded random instances for test corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Arc, Instance};
use crate::rational::Capacity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub nodes: usize,
    pub arcs: usize,
    /// `k` is drawn uniformly from `1..=k_max`.
    pub k_max: usize,
    /// Capacities are drawn uniformly from this list.
    pub capacities: Vec<i64>,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { nodes: 6, arcs: 10, k_max: 2, capacities: vec![1, 2, 3] }
    }
}

/// Source is node 0, sink is the last node. The first arcs form a random
/// source-sink path so the sink is always reachable. The rest join random
/// node pairs, oriented from lower to higher id five times out of six so
/// that most instances have several source-sink paths.
pub fn random_instance(seed: u64, spec: &RandomSpec) -> Instance {
    assert!(spec.nodes >= 2, "need a source and a sink");
    assert!(!spec.capacities.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.nodes;
    let (s, t) = (0, n - 1);
    let mut middle: Vec<usize> = (1..n - 1).collect();
    middle.shuffle(&mut rng);
    let hops = rng.gen_range(0..=middle.len().min(spec.arcs.saturating_sub(1)));
    let mut route = vec![s];
    route.extend_from_slice(&middle[..hops]);
    route.push(t);

    let cap = |rng: &mut ChaCha8Rng| Capacity::from_int(*spec.capacities.choose(rng).unwrap());
    let mut arcs: Vec<Arc> = route.windows(2).map(|w| Arc::new(w[0], w[1], cap(&mut rng))).collect();
    while arcs.len() < spec.arcs {
        let mut tail = rng.gen_range(0..n);
        let mut head = rng.gen_range(0..n);
        if tail > head && rng.gen_range(0..6) != 0 {
            std::mem::swap(&mut tail, &mut head);
        }
        if tail != head {
            arcs.push(Arc::new(tail, head, cap(&mut rng)));
        }
    }
    arcs.truncate(spec.arcs.max(route.len() - 1));
    let k = rng.gen_range(1..=spec.k_max.max(1)).min(arcs.len());
    Instance::new(n, arcs, s, t, k)
}
