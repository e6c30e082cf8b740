// Monte Carlo batch against the exact mean and covariance.
//
// cargo run --release --example simulate_batch

use discrete_spacings::moments::{cross_moment_recursion, mean_recursion};
use discrete_spacings::simulator::{simulate_batch, SimConfig};
use discrete_spacings::ProcessParams;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = ProcessParams::new(60, 3)?;
    let mut config = SimConfig::new(params, 40_000, 11);
    config.max_order = 6;
    let stats = simulate_batch(&config)?;

    let means = mean_recursion::<f64>(params.k, params.n)?;
    let cross = cross_moment_recursion(&means);
    println!(
        "{params}, {} replications, rng {}",
        stats.replications, stats.rng
    );
    for j in 0..params.spacing_kinds() {
        let exact = means.row(params.n)[j];
        let err = (stats.mean[j] - exact).abs();
        println!(
            "  X_{}: mean {:.4} (exact {:.4}, {:.1} s.e.)  var {:.4} (exact {:.4})",
            j + 1,
            stats.mean[j],
            exact,
            err / stats.mean_std_error[j],
            stats.covariance[j][j],
            cross.covariance(params.n)[j][j],
        );
        assert!(err < 5.0 * stats.mean_std_error[j]);
    }
    for (m, r) in stats.standardized_ratios.iter().enumerate().skip(3) {
        if let Some(r) = r {
            println!("  mu_{m}/sigma^{m} of X_1 + X_2: {r:.3}");
        }
    }
    assert_eq!(stats.invalid_states, 0);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
