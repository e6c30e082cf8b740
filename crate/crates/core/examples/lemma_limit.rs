// The scalar recursion a_n = alpha + beta/(n-k+1) * sum_{j<=n-k} (j/n)^beta a_j
// and its limit alpha (beta+1)/(beta-1). Convergence is slow: the gap shrinks
// roughly like log(N)/N.
//
// cargo run --release --example lemma_limit

use discrete_spacings::moments::beta_limit_check;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (alpha, beta) in [(1.0, 2.0), (1.0, 3.0), (0.5, 1.5)] {
        println!("alpha={alpha} beta={beta}");
        for n in [1_000, 10_000, 100_000] {
            let b = beta_limit_check(alpha, beta, 2, n)?;
            println!(
                "  N={n:>6}  a_N = {:.8}  limit {:.8}  gap {:.3e}",
                b.a_n, b.limit, b.gap
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
