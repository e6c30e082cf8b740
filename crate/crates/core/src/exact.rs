//! Exact joint law of the terminal gap counts for small strings.
//!
//! Two independent constructions are provided: [`pmf_split`] conditions on the
//! first block and convolves the laws of the two remaining sub-strings, while
//! [`pmf_direct`] walks the placement process itself over multisets of open
//! gaps. All probabilities are exact rationals.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_counts, GapCounts, ProcessParams};

pub const DEFAULT_SPLIT_CAP: usize = 40;
pub const DEFAULT_DIRECT_CAP: usize = 20;

/// Exact probability mass function over terminal states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pmf {
    pub params: ProcessParams,
    pub probs: BTreeMap<GapCounts, BigRational>,
}

impl Pmf {
    pub fn point_mass(g: GapCounts) -> Self {
        Self {
            params: g.params,
            probs: BTreeMap::from([(g, BigRational::one())]),
        }
    }

    pub fn total_mass(&self) -> BigRational {
        self.probs.values().sum()
    }

    pub fn probability(&self, g: &GapCounts) -> BigRational {
        self.probs.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn to_f64(&self) -> BTreeMap<GapCounts, f64> {
        self.probs
            .iter()
            .map(|(g, p)| (g.clone(), p.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Exact total-variation distance `1/2 sum |p - q|`.
    pub fn total_variation(&self, other: &Pmf) -> BigRational {
        let mut acc = BigRational::zero();
        for (g, p) in &self.probs {
            acc += (p - other.probability(g)).abs();
        }
        for (g, q) in &other.probs {
            if !self.probs.contains_key(g) {
                acc += q.clone();
            }
        }
        acc / BigRational::from_integer(2.into())
    }

    /// Every support point is a valid jammed state.
    pub fn support_is_valid(&self) -> bool {
        self.probs.keys().all(|g| validate_counts(self.params, g))
    }

    /// Serializable view with probabilities as numerator/denominator strings.
    pub fn entries(&self) -> Vec<PmfEntry> {
        self.probs
            .iter()
            .map(|(g, p)| PmfEntry {
                counts: g.counts.clone(),
                hats: g.hats,
                numerator: p.numer().to_string(),
                denominator: p.denom().to_string(),
                probability: p.to_f64().unwrap_or(f64::NAN),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfEntry {
    pub counts: Vec<u64>,
    pub hats: u64,
    pub numerator: String,
    pub denominator: String,
    pub probability: f64,
}

fn check_cap(what: &'static str, params: ProcessParams, cap: usize) -> Result<()> {
    if params.k < 2 {
        return Err(Error::InvalidParams {
            n: params.n,
            k: params.k,
        });
    }
    if params.n > cap {
        return Err(Error::CapExceeded {
            what,
            n: params.n,
            cap,
        });
    }
    Ok(())
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Law of the terminal state via the splitting identity
/// `X_n =d X_J + X'_{n-k-J}` with `J` uniform on `0..=n-k`.
pub fn pmf_split(params: ProcessParams, cap: usize) -> Result<Pmf> {
    check_cap("pmf_split", params, cap)?;
    let k = params.k;
    let mut table: Vec<Pmf> = Vec::with_capacity(params.n + 1);
    for n in 0..=params.n {
        let here = ProcessParams { n, k };
        if let Some(g) = GapCounts::base_case(here) {
            table.push(Pmf::point_mass(g));
            continue;
        }
        let choices = n - k + 1;
        let weight = ratio(1, choices);
        let mut probs: BTreeMap<GapCounts, BigRational> = BTreeMap::new();
        for j in 0..choices {
            let (left, right) = (&table[j], &table[n - k - j]);
            for (a, pa) in &left.probs {
                for (b, pb) in &right.probs {
                    *probs
                        .entry(a.join_around_hat(b))
                        .or_insert_with(BigRational::zero) += pa * pb * &weight;
                }
            }
        }
        table.push(Pmf {
            params: here,
            probs,
        });
    }
    Ok(table.pop().expect("table holds n + 1 entries"))
}

type Dist = BTreeMap<GapCounts, BigRational>;

/// Memoised walk of the placement process over sorted multisets of gaps that
/// can still take a block.
struct DirectWalk {
    k: usize,
    memo: HashMap<Vec<usize>, Dist>,
}

impl DirectWalk {
    /// Law of the counts generated from the open gaps `state` (sorted, each `>= k`).
    fn law(&mut self, state: &[usize]) -> Dist {
        if let Some(d) = self.memo.get(state) {
            return d.clone();
        }
        let k = self.k;
        let n: usize = state.iter().sum();
        let mut out = Dist::new();
        if state.is_empty() {
            out.insert(GapCounts::empty(k), BigRational::one());
            return out;
        }
        let total: usize = state.iter().map(|g| g - k + 1).sum();
        let mut idx = 0;
        while idx < state.len() {
            let gap = state[idx];
            let mult = state[idx..].iter().take_while(|&&g| g == gap).count();
            let mut rest: Vec<usize> = state[..idx].to_vec();
            rest.extend_from_slice(&state[idx + 1..]);
            let p = ratio(mult, total);
            for offset in 0..=gap - k {
                let mut next = rest.clone();
                let mut delta = GapCounts::single_hat(k);
                for child in [offset, gap - k - offset] {
                    if child >= k {
                        next.push(child);
                    } else if child > 0 {
                        delta.counts[child - 1] += 1;
                        delta.params.n += child;
                    }
                }
                next.sort_unstable();
                for (g, q) in self.law(&next) {
                    *out.entry(g.combine(&delta))
                        .or_insert_with(BigRational::zero) += &q * &p;
                }
            }
            idx += mult;
        }
        debug_assert!(out.keys().all(|g| g.params.n == n));
        self.memo.insert(state.to_vec(), out.clone());
        out
    }
}

/// Law of the terminal state by direct enumeration of the placement process,
/// each feasible block being chosen with probability `1 / W`.
pub fn pmf_direct(params: ProcessParams, cap: usize) -> Result<Pmf> {
    check_cap("pmf_direct", params, cap)?;
    if params.n < params.k {
        return Ok(Pmf::point_mass(GapCounts::short_string(params)));
    }
    let mut walk = DirectWalk {
        k: params.k,
        memo: HashMap::new(),
    };
    Ok(Pmf {
        params,
        probs: walk.law(&[params.n]),
    })
}

/// Exact moments of a [`Pmf`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMoments {
    /// `E X_j`.
    pub mean: Vec<BigRational>,
    /// `E X_i X_j`.
    pub cross: Vec<Vec<BigRational>>,
    /// `E (c . X)^m`, `m = 0..=order`.
    pub projected_raw: Vec<BigRational>,
}

impl ExactMoments {
    pub fn covariance(&self, i: usize, j: usize) -> BigRational {
        &self.cross[i][j] - &self.mean[i] * &self.mean[j]
    }

    /// `E (c . X - E c . X)^m`.
    pub fn projected_central(&self, m: usize) -> BigRational {
        let mu = &self.projected_raw[1];
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for i in 0..=m {
            let term = &self.projected_raw[i] * pow(&-mu, m - i);
            acc += term * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m - i) / BigInt::from(i + 1);
        }
        acc
    }
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Mean vector, cross moments and raw projected moments up to `order`.
/// The projection defaults to all ones.
pub fn moments_from_pmf(p: &Pmf, order: usize, projection: Option<&[BigRational]>) -> ExactMoments {
    let d = p.params.k - 1;
    let ones = vec![BigRational::one(); d];
    let c = projection.unwrap_or(&ones);
    let mut mean = vec![BigRational::zero(); d];
    let mut cross = vec![vec![BigRational::zero(); d]; d];
    let mut projected_raw = vec![BigRational::zero(); order + 1];
    for (g, prob) in &p.probs {
        let x: Vec<BigRational> = g
            .counts
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        for i in 0..d {
            mean[i] += &x[i] * prob;
            for j in 0..d {
                cross[i][j] += &x[i] * &x[j] * prob;
            }
        }
        let y: BigRational = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        let mut power = prob.clone();
        for slot in projected_raw.iter_mut() {
            *slot += &power;
            power *= &y;
        }
    }
    ExactMoments {
        mean,
        cross,
        projected_raw,
    }
}
