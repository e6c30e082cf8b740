// Standardized projected moments approach the normal values 0, 3, 0, 15.
//
// cargo run --release --example clt_moments

use discrete_spacings::moments::{normal_moment, projected_moment_recursion};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (k, c) in [(2, vec![1.0]), (3, vec![1.0, 1.0]), (3, vec![1.0, -2.0])] {
        let table = projected_moment_recursion(&c, k, 400, 6)?;
        println!("k={k} c={c:?}");
        for n in [50, 100, 200, 400] {
            let ratios: Vec<String> = (3..=6)
                .map(|m| {
                    format!(
                        "{:+.4}",
                        table.standardized_ratio(n, m) - normal_moment(m, 1.0)
                    )
                })
                .collect();
            println!(
                "  n={n:>3}  Var/n = {:.6}  ratio - normal (m=3..6): {}",
                table.standardized(n, 2),
                ratios.join(" ")
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
