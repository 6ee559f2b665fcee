//! Split every arc into a gateway arc and unit arcs, solve the split
//! instance, and map its flow back.

use robustflow::eval::robust_value;
use robustflow::format::{parse_instance, write_instance};
use robustflow::lp::{solve_full_lp, solve_row_generation};
use robustflow::rational::format_rational;
use robustflow::transform::{map_flow_back, split_capacities};

fn main() -> robustflow::Result<()> {
    let inst = parse_instance("p rflow 3 3 1\ns 0\nt 2\na 0 1 3\na 1 2 2\na 0 2 2\n")?;
    let (split, map) = split_capacities(&inst)?;
    print!("{}", write_instance(&split));

    let original = solve_full_lp(&inst, 1_000, 1_000_000)?;
    let lifted = solve_row_generation(&split, 1_000, 1_000_000)?;
    let back = map_flow_back(&inst, &split, &map, &lifted.primal.x)?;
    println!("original objective {}", format_rational(&original.primal.objective));
    println!("split objective    {}", format_rational(&lifted.primal.objective));
    println!("mapped-back flow robust value {}", format_rational(&robust_value(&inst, &back, 1_000)?));
    Ok(())
}
