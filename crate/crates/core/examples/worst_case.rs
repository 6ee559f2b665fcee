// Evaluate a hand-written path flow: nominal value, worst failure and what
// is left.

use robustflow::eval::{destroyed_value, nominal_value, worst_case_scenario, Scenario};
use robustflow::fixtures::diamond;
use robustflow::format::parse_path_flow;
use robustflow::rational::format_rational;

fn main() -> robustflow::Result<()> {
    let inst = diamond(1);
    let x = parse_path_flow("f 0 2 : 1/1\nf 1 3 : 1/2\n")?;
    let worst = worst_case_scenario(&inst, &x, 1_000)?;
    println!("nominal {}", format_rational(&nominal_value(&x)));
    println!("worst scenario {:?} destroys {}", worst.scenario.arcs(), format_rational(&worst.lambda));
    for arc in 0..inst.arc_count() {
        let lost = destroyed_value(&x, &Scenario::new([arc]));
        println!("  failing arc {arc} loses {}", format_rational(&lost));
    }
    Ok(())
}
