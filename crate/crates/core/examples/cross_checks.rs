// The fast part of the cross-check suite, printed one line per criterion.
//
// cargo run --release --example cross_checks

use discrete_spacings::verify::run_all;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for outcome in run_all(&[1, 2, 3, 5, 8, 9, 10, 11])? {
        println!("{}", outcome.summary());
        for check in outcome.checks.iter().filter(|c| !c.passed) {
            println!(
                "    failed: {} (measured {:e})",
                check.label, check.measured
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
