// Mean and covariance recursions, exact and in floating point, and the
// ratio estimates of theta and Sigma.
//
// cargo run --example moment_tables

use discrete_spacings::moments::{
    cross_moment_recursion, mean_recursion, sigma_extrapolate, theta_extrapolate,
};
use num_rational::BigRational;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let k = 3;
    let exact = mean_recursion::<BigRational>(k, 20)?;
    let exact_cross = cross_moment_recursion(&exact);
    for n in [5, 10, 20] {
        let row: Vec<String> = exact.row(n).iter().map(|x| x.to_string()).collect();
        println!(
            "k={k} n={n:>2}  E X = [{}]  Var X_1 = {}",
            row.join(", "),
            exact_cross.covariance(n)[0][0]
        );
    }

    let float = mean_recursion::<f64>(k, 20)?;
    let drift = (0..=20)
        .flat_map(|n| {
            exact
                .row(n)
                .iter()
                .zip(float.row(n))
                .map(|(a, b)| (num_traits::ToPrimitive::to_f64(a).unwrap() - b).abs())
        })
        .fold(0.0, f64::max);
    println!("max |rational - float| over n <= 20: {drift:.2e}");

    let theta = theta_extrapolate(k, 200)?;
    let sigma = sigma_extrapolate(k, 200)?;
    println!(
        "theta ~ {:?} (gap {:.1e}, {:?})",
        theta.theta, theta.stabilization_gap, theta.status
    );
    println!(
        "Sigma ~ {:?} (gap {:.1e}, {:?})",
        sigma.sigma, sigma.stabilization_gap, sigma.status
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
