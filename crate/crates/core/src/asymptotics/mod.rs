//! Limiting constants as integrals against the weight
//! `e_k(y) = exp(2 (y + y^2/2 + ... + y^{k-1}/(k-1)))`.
//!
//! `theta_j` is the linear growth rate of `E X_{n,j}` and `sigma_ij` that of
//! `Cov(X_{n,i}, X_{n,j})`. The integrand for `sigma_ij` is a difference of
//! terms of size `(1-y)^{-2}` that cancel near `y = 1`; every evaluation
//! reports how much cancellation happened.

mod quadrature;

use serde::{Deserialize, Serialize};

pub use quadrature::{QuadratureRule, DEFAULT_INNER_NODES, DEFAULT_NODES};

use crate::error::{Error, Result};
use crate::moments::{
    cross_moment_recursion, mean_recursion, SigmaEstimate, Stabilization, ThetaEstimate,
    STABILIZATION_TOL,
};

/// Pointwise cancellation ratio above which an `H_ij` value is considered imprecise.
pub const CANCELLATION_LIMIT: f64 = 1e8;
pub const DEFAULT_MAX_K: usize = 8;

pub fn e_k_eval(y: f64, k: usize) -> f64 {
    let mut s = 0.0;
    let mut p = 1.0;
    for m in 1..k {
        p *= y;
        s += p / m as f64;
    }
    (2.0 * s).exp()
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParams { n: 0, k });
    }
    Ok(())
}

/// `theta_j = 2 / e_k(1) int_0^1 (1-y) y^j e_k(y) dy`, `j = 1..k-1`.
pub fn theta_quadrature(k: usize, rule: &QuadratureRule) -> Result<Vec<f64>> {
    check_k(k)?;
    let norm = 2.0 / e_k_eval(1.0, k);
    Ok((1..k)
        .map(|j| norm * rule.integrate(0.0, 1.0, |y| (1.0 - y) * y.powi(j as i32) * e_k_eval(y, k)))
        .collect())
}

/// Generating function of the means of `X_{n,i}`:
/// `G_i(z) = 2 (1-z)^{-2} / e_k(z) int_0^z y^i (1-y) e_k(y) dy`.
pub fn g_i_eval(z: f64, i: usize, k: usize, rule: &QuadratureRule) -> Result<f64> {
    check_k(k)?;
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!("G_i needs 0 <= z < 1, got z = {z}")));
    }
    if !(1..k).contains(&i) {
        return Err(Error::Domain(format!("index i = {i} outside 1..{k}")));
    }
    let integral = rule.integrate(0.0, z, |y| y.powi(i as i32) * (1.0 - y) * e_k_eval(y, k));
    Ok(2.0 * integral / ((1.0 - z).powi(2) * e_k_eval(z, k)))
}

/// One evaluation of `H_ij` with its cancellation ratio
/// `max |term| / |H|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HValue {
    pub value: f64,
    pub largest_term: f64,
    pub cancellation: f64,
}

impl HValue {
    pub fn flagged(&self) -> bool {
        self.cancellation > CANCELLATION_LIMIT
    }
}

fn h_from_parts(y: f64, i: usize, j: usize, k: usize, theta: &[f64], gi: f64, gj: f64) -> HValue {
    let w = 1.0 - y;
    let kf = k as f64;
    let diag = if i == j { w * y.powi(i as i32) } else { 0.0 };
    let yk1 = y.powi(k as i32 - 1);
    let product = w * w * (y.powi(i as i32) + yk1 * gi) * (y.powi(j as i32) + yk1 * gj);
    let inner =
        2.0 + (4.0 * kf - 3.0) * w + (2.0 * kf - 1.0).powi(2) * w * w - 4.0 * kf * kf * w.powi(3);
    let outer = 3.0 + (4.0 * kf - 5.0) * w + 2.0 * (kf - 1.0).powi(2) * w * w
        - 2.0 * kf * kf * w.powi(4)
        - inner * y.powi(k as i32);
    let drift = theta[i - 1] * theta[j - 1] * outer / (w * w);
    let value = diag + product - drift;
    let largest_term = diag.abs().max(product.abs()).max(drift.abs());
    HValue {
        value,
        largest_term,
        cancellation: largest_term / value.abs(),
    }
}

/// `H_ij(y)` for `0 < y < 1`, with `G_i`, `G_j` from the inner rule.
pub fn h_ij_eval(
    y: f64,
    i: usize,
    j: usize,
    k: usize,
    theta: &[f64],
    inner: &QuadratureRule,
) -> Result<HValue> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain(format!("H_ij needs 0 < y < 1, got y = {y}")));
    }
    if theta.len() != k - 1 {
        return Err(Error::InvalidArgument(
            "theta must have k - 1 entries".into(),
        ));
    }
    let gi = g_i_eval(y, i, k, inner)?;
    let gj = g_i_eval(y, j, k, inner)?;
    Ok(h_from_parts(y, i, j, k, theta, gi, gj))
}

/// Quadrature value of `Sigma` with per-entry cancellation diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaQuadrature {
    pub sigma: Vec<Vec<f64>>,
    /// `int |largest term| e_k / |int H e_k|` per entry.
    pub condition: Vec<Vec<f64>>,
    /// Largest pointwise cancellation ratio over the nodes, per entry.
    pub worst_pointwise: Vec<Vec<f64>>,
    pub accuracy_degraded: bool,
}

/// `sigma_ij = 2 / e_k(1) int_0^1 H_ij(y) e_k(y) dy`; computed for `i <= j` and mirrored.
pub fn sigma_quadrature(
    k: usize,
    outer: &QuadratureRule,
    inner: &QuadratureRule,
) -> Result<SigmaQuadrature> {
    check_k(k)?;
    let d = k - 1;
    let theta = theta_quadrature(k, outer)?;
    let norm = 2.0 / e_k_eval(1.0, k);
    let g: Vec<Vec<f64>> = outer
        .nodes()
        .iter()
        .map(|&y| {
            (1..k)
                .map(|i| g_i_eval(y, i, k, inner))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut sigma = vec![vec![0.0; d]; d];
    let mut condition = vec![vec![0.0; d]; d];
    let mut worst = vec![vec![0.0; d]; d];
    for i in 1..k {
        for j in i..k {
            let mut value = 0.0;
            let mut magnitude = 0.0;
            let mut worst_point: f64 = 0.0;
            for (q, (&y, &w)) in outer.nodes().iter().zip(outer.weights()).enumerate() {
                let h = h_from_parts(y, i, j, k, &theta, g[q][i - 1], g[q][j - 1]);
                let ek = e_k_eval(y, k);
                value += w * h.value * ek;
                magnitude += w * h.largest_term * ek;
                worst_point = worst_point.max(h.cancellation);
            }
            let s = norm * value;
            let cond = magnitude / value.abs();
            for (a, b) in [(i - 1, j - 1), (j - 1, i - 1)] {
                sigma[a][b] = s;
                condition[a][b] = cond;
                worst[a][b] = worst_point;
            }
        }
    }
    let accuracy_degraded = condition
        .iter()
        .flatten()
        .any(|&c| c.is_nan() || c > CANCELLATION_LIMIT);
    Ok(SigmaQuadrature {
        sigma,
        condition,
        worst_pointwise: worst,
        accuracy_degraded,
    })
}

/// Mean vacant fraction `1 - k / e_k(1) int_0^1 e_k(y) dy`.
pub fn vacancy_mean_constant(k: usize, rule: &QuadratureRule) -> Result<f64> {
    check_k(k)?;
    let integral = rule.integrate(0.0, 1.0, |y| e_k_eval(y, k));
    Ok(1.0 - k as f64 * integral / e_k_eval(1.0, k))
}

/// `max_t | int_0^1 psi(sqrt(u) t) psi(sqrt(1-u) t) du - psi(t) |`.
///
/// Characteristic functions of centred normal laws are fixed points of this
/// map; the residual measures how far `psi` is from one.
pub fn cf_fixed_point_residual<F: Fn(f64) -> f64>(
    psi: F,
    t_grid: &[f64],
    rule: &QuadratureRule,
) -> f64 {
    t_grid
        .iter()
        .map(|&t| {
            let lhs = rule.integrate(0.0, 1.0, |u| psi(u.sqrt() * t) * psi((1.0 - u).sqrt() * t));
            (lhs - psi(t)).abs()
        })
        .fold(0.0, f64::max)
}

/// Residual for `psi(t) = exp(-variance t^2 / 2)`.
pub fn normal_cf_residual(variance: f64, t_grid: &[f64], rule: &QuadratureRule) -> Result<f64> {
    if variance.is_nan() || variance < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "variance must be >= 0, got {variance}"
        )));
    }
    Ok(cf_fixed_point_residual(
        |t| (-variance * t * t / 2.0).exp(),
        t_grid,
        rule,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Quadrature,
    Extrapolation,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstantsDiagnostics {
    pub nodes: Option<usize>,
    pub inner_nodes: Option<usize>,
    pub n_max: Option<usize>,
    pub theta_stabilization_gap: Option<f64>,
    pub sigma_stabilization_gap: Option<f64>,
    pub stabilized: Option<bool>,
    pub sigma_condition: Option<Vec<Vec<f64>>>,
    pub accuracy_degraded: bool,
    /// `|vacancy_mean_const - sum_j j theta_j|`.
    pub vacancy_identity_gap: f64,
}

/// `theta`, `Sigma` and the mean vacant fraction for one `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConstants {
    pub k: usize,
    pub theta: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
    pub vacancy_mean_const: f64,
    pub provenance: Provenance,
    pub diagnostics: ConstantsDiagnostics,
}

fn weighted_theta_sum(theta: &[f64]) -> f64 {
    theta
        .iter()
        .enumerate()
        .map(|(j, t)| (j + 1) as f64 * t)
        .sum()
}

impl AsymptoticConstants {
    pub fn by_quadrature(k: usize, outer: &QuadratureRule, inner: &QuadratureRule) -> Result<Self> {
        let theta = theta_quadrature(k, outer)?;
        let sq = sigma_quadrature(k, outer, inner)?;
        let vacancy = vacancy_mean_constant(k, outer)?;
        Ok(Self {
            k,
            vacancy_mean_const: vacancy,
            diagnostics: ConstantsDiagnostics {
                nodes: Some(outer.len()),
                inner_nodes: Some(inner.len()),
                sigma_condition: Some(sq.condition),
                accuracy_degraded: sq.accuracy_degraded,
                vacancy_identity_gap: (vacancy - weighted_theta_sum(&theta)).abs(),
                ..Default::default()
            },
            theta,
            sigma: sq.sigma,
            provenance: Provenance::Quadrature,
        })
    }

    /// Ratios of exact finite-N moments; the vacancy constant is `E V_N / (N + k)`.
    pub fn by_extrapolation(k: usize, n_max: usize) -> Result<Self> {
        Self::by_extrapolation_with_tol(k, n_max, STABILIZATION_TOL)
    }

    pub fn by_extrapolation_with_tol(k: usize, n_max: usize, tol: f64) -> Result<Self> {
        let means = mean_recursion::<f64>(k, n_max)?;
        let theta = ThetaEstimate::from_table(&means, tol)?;
        let sigma = SigmaEstimate::from_table(&cross_moment_recursion(&means), tol)?;
        let vacancy = means.vacancy_mean(n_max) / (n_max + k) as f64;
        let stable =
            theta.status == Stabilization::Stabilized && sigma.status == Stabilization::Stabilized;
        Ok(Self {
            k,
            vacancy_mean_const: vacancy,
            diagnostics: ConstantsDiagnostics {
                n_max: Some(n_max),
                theta_stabilization_gap: Some(theta.stabilization_gap),
                sigma_stabilization_gap: Some(sigma.stabilization_gap),
                stabilized: Some(stable),
                vacancy_identity_gap: (vacancy - weighted_theta_sum(&theta.theta)).abs(),
                ..Default::default()
            },
            theta: theta.theta,
            sigma: sigma.sigma,
            provenance: Provenance::Extrapolation,
        })
    }
}

/// Entrywise comparison of the two routes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteComparison {
    pub k: usize,
    pub theta_max_diff: f64,
    pub sigma_max_diff: f64,
    pub vacancy_diff: f64,
    pub theta_tolerance: f64,
    pub sigma_tolerance: f64,
    pub agree: bool,
}

pub const THETA_AGREEMENT_TOL: f64 = 1e-8;
pub const SIGMA_AGREEMENT_TOL: f64 = 1e-6;

pub fn compare_routes(a: &AsymptoticConstants, b: &AsymptoticConstants) -> RouteComparison {
    let theta_max_diff = a
        .theta
        .iter()
        .zip(&b.theta)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let sigma_max_diff = a
        .sigma
        .iter()
        .flatten()
        .zip(b.sigma.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    RouteComparison {
        k: a.k,
        theta_max_diff,
        sigma_max_diff,
        vacancy_diff: (a.vacancy_mean_const - b.vacancy_mean_const).abs(),
        theta_tolerance: THETA_AGREEMENT_TOL,
        sigma_tolerance: SIGMA_AGREEMENT_TOL,
        agree: theta_max_diff < THETA_AGREEMENT_TOL && sigma_max_diff < SIGMA_AGREEMENT_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> (QuadratureRule, QuadratureRule) {
        (
            QuadratureRule::gauss_legendre(DEFAULT_NODES).unwrap(),
            QuadratureRule::gauss_legendre(DEFAULT_INNER_NODES).unwrap(),
        )
    }

    #[test]
    fn e_k_values() {
        assert!((e_k_eval(1.0, 2) - 2f64.exp()).abs() < 1e-14);
        assert!((e_k_eval(1.0, 3) - 3f64.exp()).abs() < 1e-13);
        for k in 2..8 {
            assert_eq!(e_k_eval(0.0, k), 1.0);
        }
    }

    #[test]
    fn k2_theta() {
        let (outer, _) = rules();
        let t = theta_quadrature(2, &outer).unwrap();
        assert!((t[0] - (-2f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn g_domain_and_origin() {
        let (_, inner) = rules();
        assert_eq!(g_i_eval(0.0, 1, 3, &inner).unwrap(), 0.0);
        assert!(g_i_eval(1.0, 1, 3, &inner).is_err());
        assert!(g_i_eval(-0.1, 1, 3, &inner).is_err());
        assert!(g_i_eval(0.5, 3, 3, &inner).is_err());
    }

    #[test]
    fn g_leading_coefficient() {
        let (outer, inner) = rules();
        for k in 2..5 {
            let theta = theta_quadrature(k, &outer).unwrap();
            for i in 1..k {
                let z: f64 = 1.0 - 1e-4;
                let scaled = (1.0 - z).powi(2) * g_i_eval(z, i, k, &inner).unwrap();
                // next-order term is 2 (k-1) theta_i (1 - z)
                assert!((scaled - theta[i - 1]).abs() < 1e-3 * theta[i - 1]);
            }
        }
    }

    #[test]
    fn h_is_symmetric_and_bounded_near_one() {
        let (outer, inner) = rules();
        let theta = theta_quadrature(4, &outer).unwrap();
        for &y in &[0.1, 0.5, 0.9, 1.0 - 1e-3] {
            for i in 1..4 {
                for j in 1..4 {
                    let a = h_ij_eval(y, i, j, 4, &theta, &inner).unwrap();
                    let b = h_ij_eval(y, j, i, 4, &theta, &inner).unwrap();
                    assert!((a.value - b.value).abs() <= 1e-12 * a.largest_term);
                    assert!(a.value.abs() < 10.0);
                }
            }
        }
        assert!(h_ij_eval(1.0, 1, 1, 4, &theta, &inner).is_err());
        assert!(h_ij_eval(0.0, 1, 1, 4, &theta, &inner).is_err());
    }

    #[test]
    fn k2_sigma() {
        let (outer, inner) = rules();
        let s = sigma_quadrature(2, &outer, &inner).unwrap();
        assert!((s.sigma[0][0] - 4.0 * (-4f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn sigma_is_exactly_symmetric() {
        let (outer, inner) = rules();
        let s = sigma_quadrature(4, &outer, &inner).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.sigma[i][j], s.sigma[j][i]);
            }
        }
    }

    #[test]
    fn vacancy_constant_k2() {
        let (outer, _) = rules();
        assert!((vacancy_mean_constant(2, &outer).unwrap() - (-2f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_residuals() {
        let rule = QuadratureRule::gauss_legendre(64).unwrap();
        let grid: Vec<f64> = (-50..=50).map(|i| i as f64 / 10.0).collect();
        assert!(normal_cf_residual(1.0, &grid, &rule).unwrap() < 1e-14);
        assert!(normal_cf_residual(0.0, &grid, &rule).unwrap() < 1e-14);
        let laplace_like = cf_fixed_point_residual(|t: f64| (-t.abs()).exp(), &[2.0], &rule);
        assert!(laplace_like > 1e-3);
        assert!(normal_cf_residual(-1.0, &grid, &rule).is_err());
    }
}
