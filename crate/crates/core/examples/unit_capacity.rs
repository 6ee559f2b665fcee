//! With unit capacities any maximum flow is a maximum robust flow, worth
//! `max(0, |C| - k)` for a minimum cut `C`.

use robustflow::eval::robust_value;
use robustflow::fixtures::parallel;
use robustflow::rational::{format_rational, Capacity};
use robustflow::special::solve_unit_capacity;

fn main() -> robustflow::Result<()> {
    for k in 0..=5 {
        let inst = parallel(5, Capacity::from_int(1), k);
        let (x, value) = solve_unit_capacity(&inst)?;
        let check = robust_value(&inst, &x, 1_000)?;
        println!("5 unit arcs, k = {k}: value {} (adversary agrees: {})", format_rational(&value), check.max(value.clone()) == value);
    }
    Ok(())
}
