// psi(t) = int_0^1 psi(xt) psi((1-x)t) dx: the normal characteristic
// function is a fixed point, exp(-|t|) is not.
//
// cargo run --example fixed_point

use discrete_spacings::asymptotics::{cf_fixed_point_residual, normal_cf_residual, QuadratureRule};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rule = QuadratureRule::gauss_legendre(64)?;
    let grid: Vec<f64> = (0..=100).map(|i| -5.0 + 0.1 * i as f64).collect();
    for var in [0.5, 1.0, 2.0] {
        println!(
            "normal, variance {var}: residual {:.2e}",
            normal_cf_residual(var, &grid, &rule)?
        );
    }
    let laplace = cf_fixed_point_residual(|t: f64| (-t.abs()).exp(), &grid, &rule);
    let cauchy_like = cf_fixed_point_residual(|t: f64| 1.0 / (1.0 + t * t), &grid, &rule);
    println!("exp(-|t|): residual {laplace:.3e}");
    println!("1/(1+t^2): residual {cauchy_like:.3e}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
