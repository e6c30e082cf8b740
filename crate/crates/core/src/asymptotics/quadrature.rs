use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

pub const DEFAULT_NODES: usize = 128;
pub const DEFAULT_INNER_NODES: usize = 64;

/// Gauss-Legendre rule mapped to `[0, 1]`; nodes ascending, weights sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the
    /// Tricomi initial guesses; weights are `2 / ((1 - x^2) P_n'(x)^2)`.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "quadrature needs at least one node".into(),
            ));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                deriv = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            if dp.is_finite() {
                deriv = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            // x is the i-th largest root on [-1, 1]
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            nodes[i] = 0.5 * (1.0 - x);
            weights[n - 1 - i] = 0.5 * w;
            weights[i] = 0.5 * w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int_a^b f(x) dx`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = b - a;
        let mut acc = CompensatedSum::default();
        for (&y, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(a + h * y));
        }
        h * acc.value()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for m in 2..=n {
        let mf = m as f64;
        let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_positive_and_normalised() {
        for n in [1, 2, 5, 16, 64, 128, 256] {
            let r = QuadratureRule::gauss_legendre(n).unwrap();
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.nodes().iter().all(|&y| y > 0.0 && y < 1.0));
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
            let s: f64 = r.weights().iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "n={n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let r = QuadratureRule::gauss_legendre(5).unwrap();
        for deg in 0..10 {
            let got = r.integrate(0.0, 1.0, |x| x.powi(deg));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-15, "deg {deg}");
        }
    }

    #[test]
    fn three_point_rule() {
        let r = QuadratureRule::gauss_legendre(3).unwrap();
        let x = 0.5 * (1.0 - (0.6f64).sqrt());
        assert!((r.nodes()[0] - x).abs() < 1e-15);
        assert!((r.nodes()[1] - 0.5).abs() < 1e-15);
        assert!((r.weights()[1] - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_integrand() {
        let r = QuadratureRule::gauss_legendre(32).unwrap();
        let got = r.integrate(0.0, 2.0, f64::exp);
        assert!((got - (2f64.exp() - 1.0)).abs() < 1e-13);
    }
}
