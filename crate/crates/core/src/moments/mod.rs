//! Exact finite-n recursions for the moments of the gap counts.
//!
//! Everything follows from the splitting identity: conditioned on the first
//! block starting after `j` free positions, the counts are the sum of two
//! independent copies for strings of length `j` and `n - k - j`. Taking
//! expectations gives the mean, cross-moment and projected-moment recursions
//! below. Tables are generic over [`Scalar`] so the float path can be checked
//! against the exact rational one.

mod extrapolate;
mod scalar;

pub use extrapolate::{
    beta_limit_check, mean_drift_bound, sigma_extrapolate, theta_extrapolate, BetaLimit,
    DriftProfile, SigmaEstimate, Stabilization, ThetaEstimate, STABILIZATION_LAG,
    STABILIZATION_TOL,
};
pub use scalar::{ExactSum, RunningSum, Scalar};

use crate::error::{Error, Result};
use crate::numeric::binomial_table;

pub const DEFAULT_MAX_ORDER: usize = 8;
/// Largest `N` accepted for exact-rational tables.
pub const EXACT_CAP: usize = 30;

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParams { n: 0, k });
    }
    Ok(())
}

/// `E X_{n,j}` for `n = 0..=N`; `row(n)[j - 1]` is the mean count of spacings of length `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanTable<T> {
    k: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> MeanTable<T> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &[T] {
        &self.rows[n]
    }

    /// `E V_n = sum_j j E X_{n,j}`.
    pub fn vacancy_mean(&self, n: usize) -> T {
        self.rows[n]
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (idx, g)| {
                acc + T::from_count(idx + 1) * g.clone()
            })
    }

    /// `E c . X_n`.
    pub fn projected(&self, n: usize, c: &[T]) -> T {
        self.rows[n]
            .iter()
            .zip(c)
            .fold(T::zero(), |acc, (g, ci)| acc + g.clone() * ci.clone())
    }
}

fn base_mean_row<T: Scalar>(k: usize, n: usize) -> Vec<T> {
    let mut row = vec![T::zero(); k - 1];
    if (1..k).contains(&n) {
        row[n - 1] = T::one();
    }
    row
}

/// Means by the three-term form `(n-k+1) g_n = (n-k) g_{n-1} + 2 g_{n-k}`
/// for `n > k`, seeded by the degenerate states `n <= k`.
pub fn mean_recursion<T: Scalar>(k: usize, n_max: usize) -> Result<MeanTable<T>> {
    check_k(k)?;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n <= k {
            rows.push(base_mean_row(k, n));
            continue;
        }
        let a = T::from_count(n - k);
        let two = T::from_count(2);
        let den = T::from_count(n - k + 1);
        let row = rows[n - 1]
            .iter()
            .zip(&rows[n - k])
            .map(|(prev, back)| {
                (a.clone() * prev.clone() + two.clone() * back.clone()) / den.clone()
            })
            .collect();
        rows.push(row);
    }
    Ok(MeanTable { k, rows })
}

/// Means by the cumulative form `g_n = 2/(n-k+1) sum_{j<=n-k} g_j`.
pub fn mean_recursion_cumulative<T: Scalar>(k: usize, n_max: usize) -> Result<MeanTable<T>> {
    check_k(k)?;
    let d = k - 1;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n_max + 1);
    let mut prefix: Vec<T::Sum> = vec![T::Sum::default(); d];
    for n in 0..=n_max {
        if n < k {
            rows.push(base_mean_row(k, n));
            continue;
        }
        for (acc, g) in prefix.iter_mut().zip(&rows[n - k]) {
            acc.add(g);
        }
        let scale = T::from_count(2) / T::from_count(n - k + 1);
        rows.push(prefix.iter().map(|s| scale.clone() * s.value()).collect());
    }
    Ok(MeanTable { k, rows })
}

/// `E X_{n,i} X_{n,j}` and `Cov(X_{n,i}, X_{n,j})` for `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossMomentTable<T> {
    k: usize,
    second: Vec<Vec<Vec<T>>>,
    cov: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> CrossMomentTable<T> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_n(&self) -> usize {
        self.second.len() - 1
    }

    pub fn second_moment(&self, n: usize) -> &[Vec<T>] {
        &self.second[n]
    }

    pub fn covariance(&self, n: usize) -> &[Vec<T>] {
        &self.cov[n]
    }

    /// `Var V_n` from the covariance matrix.
    pub fn vacancy_variance(&self, n: usize) -> T {
        let mut acc = T::zero();
        for (i, row) in self.cov[n].iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                acc = acc + T::from_count((i + 1) * (j + 1)) * c.clone();
            }
        }
        acc
    }
}

/// Second moments via
/// `m2_n = 2/(n-k+1) sum_h m2_h + 1/(n-k+1) sum_h (g_{h,i} g_{n-k-h,j} + g_{h,j} g_{n-k-h,i})`.
pub fn cross_moment_recursion<T: Scalar>(means: &MeanTable<T>) -> CrossMomentTable<T> {
    let k = means.k;
    let d = k - 1;
    let n_max = means.max_n();
    let mut second: Vec<Vec<Vec<T>>> = Vec::with_capacity(n_max + 1);
    let mut prefix: Vec<Vec<T::Sum>> = vec![vec![T::Sum::default(); d]; d];
    for n in 0..=n_max {
        let mut m2 = vec![vec![T::zero(); d]; d];
        if n < k {
            if n > 0 {
                m2[n - 1][n - 1] = T::one();
            }
            second.push(m2);
            continue;
        }
        let m = n - k;
        for (i, row) in prefix.iter_mut().enumerate() {
            for (j, acc) in row.iter_mut().enumerate() {
                acc.add(&second[m][i][j]);
            }
        }
        let den = T::from_count(m + 1);
        let two = T::from_count(2);
        for i in 0..d {
            for j in i..d {
                let mut conv = T::Sum::default();
                for h in 0..=m {
                    conv.add(&(means.rows[h][i].clone() * means.rows[m - h][j].clone()));
                }
                let v = two.clone() * (prefix[i][j].value() + conv.value()) / den.clone();
                m2[i][j] = v.clone();
                m2[j][i] = v;
            }
        }
        second.push(m2);
    }
    let cov = second
        .iter()
        .zip(&means.rows)
        .map(|(m2, g)| {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| m2[i][j].clone() - g[i].clone() * g[j].clone())
                        .collect()
                })
                .collect()
        })
        .collect();
    CrossMomentTable { k, second, cov }
}

/// Moments of the scalar projection `c . X_n`.
///
/// `raw[n][m] = E (c . X_n)^m`; `central[n][m] = E (c . X_n - E c . X_n)^m`.
/// The standardized moments are `E (c . Z_n)^m = central[n][m] / n^{m/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedMomentTable<T> {
    k: usize,
    projection: Vec<T>,
    raw: Vec<Vec<T>>,
    central: Vec<Vec<T>>,
}

impl<T: Scalar> ProjectedMomentTable<T> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_n(&self) -> usize {
        self.raw.len() - 1
    }

    pub fn max_order(&self) -> usize {
        self.raw[0].len() - 1
    }

    pub fn projection(&self) -> &[T] {
        &self.projection
    }

    pub fn raw(&self, n: usize) -> &[T] {
        &self.raw[n]
    }

    pub fn central(&self, n: usize) -> &[T] {
        &self.central[n]
    }

    /// `E (c . Z_n)^m`.
    pub fn standardized(&self, n: usize, m: usize) -> f64 {
        let c = self.central[n][m].to_f64().unwrap_or(f64::NAN);
        c / (n.max(1) as f64).powf(m as f64 / 2.0)
    }

    /// `mu_m / mu_2^{m/2}`; compare with the normal values `0, 1, 0, 3, 0, 15, ...`.
    pub fn standardized_ratio(&self, n: usize, m: usize) -> f64 {
        let c = self.central[n][m].to_f64().unwrap_or(f64::NAN);
        let var = self.central[n][2].to_f64().unwrap_or(f64::NAN);
        c / var.powf(m as f64 / 2.0)
    }

    /// Central moment by binomial re-centring of the raw moments.
    pub fn recentered(&self, n: usize, m: usize) -> T {
        let binom = binomial_table(m);
        let minus_mu = T::zero() - self.raw[n][1].clone();
        let mut acc = T::zero();
        for (i, &b) in binom[m].iter().enumerate() {
            acc = acc + T::from_count(b as usize) * self.raw[n][i].clone() * minus_mu.pow(m - i);
        }
        acc
    }
}

fn check_finite<T: Scalar>(v: &T, n: usize, order: usize) -> Result<()> {
    match v.to_f64() {
        Some(x) if x.is_finite() => Ok(()),
        _ => Err(Error::Overflow { n, order }),
    }
}

/// Raw and central moments of `c . X_n` for `n = 0..=N`, `m = 0..=M`.
///
/// Raw moments follow from the binomial expansion of `(c.X_j + c.X'_{n-k-j})^m`.
/// Central moments are propagated directly, with the bounded drift
/// `d = mu_j + mu_{n-k-j} - mu_n` as a third, deterministic summand, which
/// avoids re-centring large raw moments in floating point.
pub fn projected_moment_recursion<T: Scalar>(
    c: &[T],
    k: usize,
    n_max: usize,
    max_order: usize,
) -> Result<ProjectedMomentTable<T>> {
    check_k(k)?;
    if c.len() != k - 1 {
        return Err(Error::InvalidArgument(format!(
            "projection has length {}, expected k - 1 = {}",
            c.len(),
            k - 1
        )));
    }
    if max_order < 2 {
        return Err(Error::InvalidArgument(
            "moment order must be at least 2".into(),
        ));
    }
    let orders = max_order + 1;
    let binom: Vec<Vec<T>> = binomial_table(max_order)
        .into_iter()
        .map(|row| row.into_iter().map(|b| T::from_count(b as usize)).collect())
        .collect();

    let mut raw: Vec<Vec<T>> = Vec::with_capacity(n_max + 1);
    let mut central: Vec<Vec<T>> = Vec::with_capacity(n_max + 1);
    let degenerate = {
        let mut v = vec![T::zero(); orders];
        v[0] = T::one();
        v
    };
    for n in 0..=n_max {
        if n <= k {
            // deterministic: c . X_n is c_n for 0 < n < k and 0 otherwise
            let value = if (1..k).contains(&n) {
                c[n - 1].clone()
            } else {
                T::zero()
            };
            raw.push((0..orders).map(|m| value.pow(m)).collect());
            central.push(degenerate.clone());
            continue;
        }
        let span = n - k;
        let den = T::from_count(span + 1);

        let mut raw_sum: Vec<T::Sum> = vec![T::Sum::default(); orders];
        for j in 0..=span {
            let (a, b) = (&raw[j], &raw[span - j]);
            for m in 0..orders {
                let mut s = T::zero();
                for i in 0..=m {
                    s = s + binom[m][i].clone() * a[i].clone() * b[m - i].clone();
                }
                raw_sum[m].add(&s);
            }
        }
        let raw_row: Vec<T> = raw_sum.iter().map(|s| s.value() / den.clone()).collect();
        for (m, v) in raw_row.iter().enumerate() {
            check_finite(v, n, m)?;
        }

        let mu_n = raw_row[1].clone();
        let mut cen_sum: Vec<T::Sum> = vec![T::Sum::default(); orders];
        let mut ab = vec![T::zero(); orders];
        for j in 0..=span {
            let (a, b) = (&central[j], &central[span - j]);
            for s in 0..orders {
                let mut acc = T::zero();
                for i in 0..=s {
                    acc = acc + binom[s][i].clone() * a[i].clone() * b[s - i].clone();
                }
                ab[s] = acc;
            }
            let drift = raw[j][1].clone() + raw[span - j][1].clone() - mu_n.clone();
            let mut dpow = vec![T::one(); orders];
            for e in 1..orders {
                dpow[e] = dpow[e - 1].clone() * drift.clone();
            }
            for m in 0..orders {
                let mut acc = T::zero();
                for s in 0..=m {
                    acc = acc + binom[m][s].clone() * ab[s].clone() * dpow[m - s].clone();
                }
                cen_sum[m].add(&acc);
            }
        }
        let mut cen_row: Vec<T> = cen_sum.iter().map(|s| s.value() / den.clone()).collect();
        cen_row[1] = T::zero();
        for (m, v) in cen_row.iter().enumerate() {
            check_finite(v, n, m)?;
        }
        raw.push(raw_row);
        central.push(cen_row);
    }
    Ok(ProjectedMomentTable {
        k,
        projection: c.to_vec(),
        raw,
        central,
    })
}

/// `E N(0, s^2)^m`: zero for odd `m`, `2^{-m/2} m! s^m / (m/2)!` for even `m`.
pub fn normal_moment(m: usize, variance: f64) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    // (m - 1)!! s^m
    let double_factorial: f64 = (1..m).step_by(2).map(|x| x as f64).product();
    double_factorial * variance.powf(m as f64 / 2.0)
}
