//! Solve the robust flow LP on a small network with every failure scenario
//! written out, then check the dual certificate.
//!
//!     cargo run --example solve_lp

use robustflow::format::parse_instance;
use robustflow::lp::{solve_full_lp, verify_duality, DEFAULT_BUDGET, DEFAULT_PATH_LIMIT};
use robustflow::rational::format_rational;

const NETWORK: &str = "\
# two routes of capacity 2 and a direct unit arc; one arc may fail
p rflow 4 5 1
s 0
t 3
a 0 1 2
a 1 3 2
a 0 2 2
a 2 3 2
a 0 3 1
";

fn main() -> robustflow::Result<()> {
    let inst = parse_instance(NETWORK)?;
    let report = solve_full_lp(&inst, DEFAULT_PATH_LIMIT, DEFAULT_BUDGET)?;
    println!("robust value  {}", format_rational(&report.primal.objective));
    println!("worst loss    {}", format_rational(&report.primal.lambda));
    for (path, value) in report.primal.x.iter() {
        println!("  path {:?} carries {}", path.arcs(), format_rational(value));
    }
    println!("dual certificate holds: {}", verify_duality(&report, &inst));
    Ok(())
}
