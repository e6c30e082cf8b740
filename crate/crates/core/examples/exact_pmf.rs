// Exact joint law of the spacing counts, two independent ways.
//
// cargo run --example exact_pmf

use discrete_spacings::exact::{
    moments_from_pmf, pmf_direct, pmf_split, DEFAULT_DIRECT_CAP, DEFAULT_SPLIT_CAP,
};
use discrete_spacings::ProcessParams;
use num_traits::Zero;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = ProcessParams::new(10, 3)?;
    let split = pmf_split(params, DEFAULT_SPLIT_CAP)?;
    let direct = pmf_direct(params, DEFAULT_DIRECT_CAP)?;
    println!("{params}: {} terminal configurations", split.len());
    for e in split.entries() {
        println!(
            "  counts {:?} hats {}  P = {}/{} ({:.6})",
            e.counts, e.hats, e.numerator, e.denominator, e.probability
        );
    }
    let tv = split.total_variation(&direct);
    println!("total variation split vs direct: {tv}");
    assert!(tv.is_zero());

    let m = moments_from_pmf(&split, 2, None);
    println!(
        "E X = [{}]",
        m.mean
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("Cov(X_1, X_2) = {}", m.covariance(0, 1));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
