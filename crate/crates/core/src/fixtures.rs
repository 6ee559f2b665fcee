//! Small named instances used throughout the tests and examples.

use crate::graph::{Arc, Instance};
use crate::rational::Capacity;

fn unit() -> Capacity {
    Capacity::from_int(1)
}

/// `s -> a -> t` and `s -> b -> t`, unit capacities. Nodes s=0, a=1, b=2,
/// t=3; arcs (s,a), (s,b), (a,t), (b,t).
pub fn diamond(k: usize) -> Instance {
    Instance::new(
        4,
        vec![Arc::new(0, 1, unit()), Arc::new(0, 2, unit()), Arc::new(1, 3, unit()), Arc::new(2, 3, unit())],
        0,
        3,
        k,
    )
}

/// Three parallel unit `s -> t` arcs.
pub fn triple(k: usize) -> Instance {
    parallel(3, Capacity::from_int(1), k)
}

/// `count` parallel `s -> t` arcs of the same capacity.
pub fn parallel(count: usize, capacity: Capacity, k: usize) -> Instance {
    Instance::new(2, vec![Arc::new(0, 1, capacity); count], 0, 1, k)
}

/// `s -> a -> t` with the given capacities.
pub fn single_path(first: Capacity, second: Capacity, k: usize) -> Instance {
    Instance::new(3, vec![Arc::new(0, 1, first), Arc::new(1, 2, second)], 0, 2, k)
}
