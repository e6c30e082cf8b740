// Euclidean size of the mean drift mu_j + mu_{n-k-j} - mu_n, maximised over j.
//
// cargo run --release --example drift_bound

use discrete_spacings::moments::{mean_drift_bound, mean_recursion};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for k in 2..=4 {
        let profile = mean_drift_bound(&mean_recursion::<f64>(k, 1000)?);
        let at: Vec<String> = [10, 100, 500, 1000]
            .iter()
            .map(|&n| format!("D({n}) = {:.10}", profile.at(n)))
            .collect();
        println!("k={k}  {}  sup = {:.6}", at.join("  "), profile.sup());
        assert!(profile.tail_is_non_increasing(500, 1e-12));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
