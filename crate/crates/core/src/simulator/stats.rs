use serde::{Deserialize, Serialize};

use super::{dot, SimConfig, RNG_NAME};
use crate::model::{GapCounts, ProcessParams};
use crate::numeric::{binomial_table, CompensatedSum};

/// Mergeable partial sums over simulated terminal states.
///
/// Count sums are exact integers, so merging them is associative and
/// order-free. The projected statistic `c . X` is tracked through power sums
/// of `c . X - shift`, with the shift fixed for the whole batch.
#[derive(Debug, Clone)]
pub struct MomentAccumulator {
    params: ProcessParams,
    count: u64,
    sums: Vec<u128>,
    cross: Vec<u128>,
    projection: Vec<f64>,
    shift: f64,
    powers: Vec<CompensatedSum>,
    invalid: u64,
}

impl MomentAccumulator {
    pub fn new(params: ProcessParams, projection: Vec<f64>, shift: f64, max_order: usize) -> Self {
        let d = params.k - 1;
        Self {
            params,
            count: 0,
            sums: vec![0; d],
            cross: vec![0; d * d],
            projection,
            shift,
            powers: vec![CompensatedSum::default(); max_order.max(2) + 1],
            invalid: 0,
        }
    }

    pub fn push(&mut self, g: &GapCounts, valid: bool) {
        let d = self.sums.len();
        self.count += 1;
        if !valid {
            self.invalid += 1;
        }
        for i in 0..d {
            let xi = g.counts[i] as u128;
            self.sums[i] += xi;
            for j in i..d {
                self.cross[i * d + j] += xi * g.counts[j] as u128;
            }
        }
        let y = dot(&self.projection, &g.counts) - self.shift;
        let mut p = 1.0;
        for s in self.powers.iter_mut() {
            s.add(p);
            p *= y;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.invalid += other.invalid;
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
        for (a, b) in self.cross.iter_mut().zip(&other.cross) {
            *a += b;
        }
        for (a, b) in self.powers.iter_mut().zip(&other.powers) {
            a.merge(b);
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(&self, config: SimConfig) -> SampleStats {
        let d = self.sums.len();
        let m = self.count as f64;
        let mean: Vec<f64> = self.sums.iter().map(|&s| s as f64 / m).collect();

        let covariance: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.covariance_entry(i.min(j), i.max(j)))
                    .collect()
            })
            .collect();
        let mean_std_error = (0..d).map(|i| (covariance[i][i] / m).sqrt()).collect();

        // central moments of c . X from power sums about the shift
        let order = self.powers.len() - 1;
        let raw: Vec<f64> = self.powers.iter().map(|s| s.value() / m).collect();
        let delta = raw[1];
        let binom = binomial_table(order);
        let central: Vec<f64> = (0..=order)
            .map(|r| {
                let mut acc = CompensatedSum::default();
                for (i, &c) in binom[r].iter().enumerate() {
                    acc.add(c as f64 * raw[i] * (-delta).powi((r - i) as i32));
                }
                if r == 1 {
                    0.0
                } else {
                    acc.value()
                }
            })
            .collect();
        let scale = (self.params.n.max(1) as f64).sqrt();
        let standardized_moments = central
            .iter()
            .enumerate()
            .map(|(r, &mu)| mu / scale.powi(r as i32))
            .collect();
        let var = central[2];
        let standardized_ratios = central
            .iter()
            .enumerate()
            .map(|(r, &mu)| (var > 0.0).then(|| mu / var.powf(r as f64 / 2.0)))
            .collect();

        SampleStats {
            rng: RNG_NAME.to_string(),
            config,
            replications: self.count,
            mean,
            covariance,
            mean_std_error,
            projected_mean: self.shift + delta,
            standardized_moments,
            standardized_ratios,
            invalid_states: self.invalid,
        }
    }

    fn covariance_entry(&self, i: usize, j: usize) -> f64 {
        let d = self.sums.len();
        if self.count < 2 {
            return 0.0;
        }
        let m = self.count as i128;
        let exact = (|| {
            let sij = i128::try_from(self.cross[i * d + j]).ok()?;
            let si = i128::try_from(self.sums[i]).ok()?;
            let sj = i128::try_from(self.sums[j]).ok()?;
            m.checked_mul(sij)?.checked_sub(si.checked_mul(sj)?)
        })();
        let denom = (self.count as f64) * (self.count as f64 - 1.0);
        match exact {
            Some(num) => num as f64 / denom,
            None => {
                let mf = self.count as f64;
                let (si, sj) = (self.sums[i] as f64, self.sums[j] as f64);
                (self.cross[i * d + j] as f64 - si * sj / mf) / (mf - 1.0)
            }
        }
    }
}

/// Empirical summary of a simulation batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub config: SimConfig,
    pub rng: String,
    pub replications: u64,
    /// Empirical `E X_j`, `j = 1..k-1`.
    pub mean: Vec<f64>,
    /// Unbiased sample covariance of the counts.
    pub covariance: Vec<Vec<f64>>,
    pub mean_std_error: Vec<f64>,
    /// Empirical `E c . X`.
    pub projected_mean: f64,
    /// `E (c . Z)^m` with `Z = n^{-1/2} (X - mean)`, indexed by `m`.
    pub standardized_moments: Vec<f64>,
    /// `mu_m / mu_2^{m/2}` for the centred projection; absent when the variance is zero.
    pub standardized_ratios: Vec<Option<f64>>,
    /// Replications whose terminal state failed `validate_counts`.
    pub invalid_states: u64,
}
