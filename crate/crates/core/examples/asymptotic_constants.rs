// theta, Sigma and the vacancy constant by quadrature and by extrapolation.
//
// cargo run --release --example asymptotic_constants

use discrete_spacings::asymptotics::{
    compare_routes, AsymptoticConstants, QuadratureRule, DEFAULT_INNER_NODES, DEFAULT_NODES,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let outer = QuadratureRule::gauss_legendre(DEFAULT_NODES)?;
    let inner = QuadratureRule::gauss_legendre(DEFAULT_INNER_NODES)?;
    println!(" k  theta_1        sigma_11       vacancy        |d theta|  |d Sigma|");
    for k in 2..=6 {
        let q = AsymptoticConstants::by_quadrature(k, &outer, &inner)?;
        let e = AsymptoticConstants::by_extrapolation(k, 200)?;
        let c = compare_routes(&q, &e);
        println!(
            "{k:>2}  {:.12} {:.12} {:.12} {:.1e}    {:.1e}",
            q.theta[0], q.sigma[0][0], q.vacancy_mean_const, c.theta_max_diff, c.sigma_max_diff
        );
        assert!(c.agree);
    }
    println!(
        "k=2 closed forms: e^-2 = {:.12}, 4e^-4 = {:.12}",
        (-2f64).exp(),
        4.0 * (-4f64).exp()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
