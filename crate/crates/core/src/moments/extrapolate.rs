use serde::{Deserialize, Serialize};

use super::{cross_moment_recursion, mean_recursion, CrossMomentTable, MeanTable};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Distance between the two table rows compared by the stabilization check.
pub const STABILIZATION_LAG: usize = 10;
pub const STABILIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stabilization {
    Stabilized,
    NotStabilized,
}

impl Stabilization {
    fn from_gap(gap: f64, tol: f64) -> Self {
        if gap < tol {
            Self::Stabilized
        } else {
            Self::NotStabilized
        }
    }
}

/// `theta_j ~ E X_{N,j} / (N + k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaEstimate {
    pub k: usize,
    pub n: usize,
    pub theta: Vec<f64>,
    /// `max_j |g_N/(N+k) - g_{N-10}/(N-10+k)|`.
    pub stabilization_gap: f64,
    pub status: Stabilization,
}

impl ThetaEstimate {
    pub fn from_table(table: &MeanTable<f64>, tol: f64) -> Result<Self> {
        let (k, n) = (table.k(), table.max_n());
        if n < k + STABILIZATION_LAG {
            return Err(Error::InvalidArgument(format!(
                "need N >= k + {STABILIZATION_LAG} to extrapolate, got N = {n}"
            )));
        }
        let ratio =
            |m: usize| -> Vec<f64> { table.row(m).iter().map(|g| g / (m + k) as f64).collect() };
        let theta = ratio(n);
        let gap = max_abs_diff(&theta, &ratio(n - STABILIZATION_LAG));
        Ok(Self {
            k,
            n,
            theta,
            stabilization_gap: gap,
            status: Stabilization::from_gap(gap, tol),
        })
    }
}

pub fn theta_extrapolate(k: usize, n_max: usize) -> Result<ThetaEstimate> {
    ThetaEstimate::from_table(&mean_recursion::<f64>(k, n_max)?, STABILIZATION_TOL)
}

/// `sigma_ij ~ Cov(X_{N,i}, X_{N,j}) / (N + k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaEstimate {
    pub k: usize,
    pub n: usize,
    pub sigma: Vec<Vec<f64>>,
    pub stabilization_gap: f64,
    pub status: Stabilization,
}

impl SigmaEstimate {
    pub fn from_table(table: &CrossMomentTable<f64>, tol: f64) -> Result<Self> {
        let (k, n) = (table.k(), table.max_n());
        if n < k + STABILIZATION_LAG {
            return Err(Error::InvalidArgument(format!(
                "need N >= k + {STABILIZATION_LAG} to extrapolate, got N = {n}"
            )));
        }
        let scaled = |m: usize| -> Vec<Vec<f64>> {
            table
                .covariance(m)
                .iter()
                .map(|row| row.iter().map(|c| c / (m + k) as f64).collect())
                .collect()
        };
        let sigma = scaled(n);
        let back = scaled(n - STABILIZATION_LAG);
        let gap = sigma
            .iter()
            .zip(&back)
            .map(|(a, b)| max_abs_diff(a, b))
            .fold(0.0, f64::max);
        Ok(Self {
            k,
            n,
            sigma,
            stabilization_gap: gap,
            status: Stabilization::from_gap(gap, tol),
        })
    }
}

pub fn sigma_extrapolate(k: usize, n_max: usize) -> Result<SigmaEstimate> {
    let means = mean_recursion::<f64>(k, n_max)?;
    SigmaEstimate::from_table(&cross_moment_recursion(&means), STABILIZATION_TOL)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaLimit {
    pub a_n: f64,
    pub limit: f64,
    pub gap: f64,
}

/// Iterates `a_n = alpha + 2/(n-k+1) sum_{j<=n-k} (j/n)^beta a_j` from
/// `a_0 = ... = a_k = 0` up to `N` and compares with `alpha (beta+1)/(beta-1)`.
///
/// The weighted sum is kept as a running `sum_j j^beta a_j`, so the cost is `O(N)`.
pub fn beta_limit_check(alpha: f64, beta: f64, k: usize, n_max: usize) -> Result<BetaLimit> {
    if beta.is_nan() || beta <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "beta must exceed 1, got {beta}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let limit = alpha * (beta + 1.0) / (beta - 1.0);
    let mut a = vec![0.0f64; n_max.max(k) + 1];
    let mut weighted = CompensatedSum::default();
    for n in (k + 1)..=n_max {
        let j = n - k;
        weighted.add((j as f64).powf(beta) * a[j]);
        a[n] = alpha + 2.0 / (j + 1) as f64 * weighted.value() / (n as f64).powf(beta);
    }
    let a_n = a[n_max];
    Ok(BetaLimit {
        a_n,
        limit,
        gap: (a_n - limit).abs(),
    })
}

/// `D(n) = max_{0<=j<=n-k} |E X_j + E X_{n-k-j} - E X_n|` for `n = k..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftProfile {
    pub k: usize,
    /// `per_n[i]` is `D(k + i)`.
    pub per_n: Vec<f64>,
}

impl DriftProfile {
    pub fn max_n(&self) -> usize {
        self.k + self.per_n.len() - 1
    }

    pub fn at(&self, n: usize) -> f64 {
        self.per_n[n - self.k]
    }

    /// `sup_{k <= n <= N} D(n)`.
    pub fn sup_up_to(&self, n: usize) -> f64 {
        self.per_n[..=n - self.k]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn sup(&self) -> f64 {
        self.sup_up_to(self.max_n())
    }

    /// The running supremum stops growing after `from`: no `D(n)` with
    /// `n > from` exceeds `sup_up_to(from)` by more than `tol`.
    pub fn tail_is_non_increasing(&self, from: usize, tol: f64) -> bool {
        let head = self.sup_up_to(from);
        self.per_n[from - self.k..].iter().all(|&d| d <= head + tol)
    }
}

pub fn mean_drift_bound(table: &MeanTable<f64>) -> DriftProfile {
    let k = table.k();
    let per_n = (k..=table.max_n())
        .map(|n| {
            let target = table.row(n);
            (0..=n - k)
                .map(|j| {
                    table
                        .row(j)
                        .iter()
                        .zip(table.row(n - k - j))
                        .zip(target)
                        .map(|((a, b), t)| (a + b - t).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    DriftProfile { k, per_n }
}
