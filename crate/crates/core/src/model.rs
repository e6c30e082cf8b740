//! Domain types shared by every route: process parameters, terminal gap
//! counts and the vacant length.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A string of `n` positions filled with blocks of `k` adjacent positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProcessParams {
    pub n: usize,
    pub k: usize,
}

impl ProcessParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams { n, k });
        }
        Ok(Self { n, k })
    }

    /// Number of spacing lengths that can survive in a jammed state.
    pub fn spacing_kinds(&self) -> usize {
        self.k - 1
    }
}

impl fmt::Display for ProcessParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, k={})", self.n, self.k)
    }
}

/// Terminal state summary: how many spacings of each length `1..k` remain,
/// and how many blocks were placed.
///
/// `counts[j - 1]` holds the number of spacings of length `j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GapCounts {
    #[serde(flatten)]
    pub params: ProcessParams,
    pub counts: Vec<u64>,
    pub hats: u64,
}

impl GapCounts {
    /// The state of an empty string (`n = 0`).
    pub fn empty(k: usize) -> Self {
        Self {
            params: ProcessParams { n: 0, k },
            counts: vec![0; k.saturating_sub(1)],
            hats: 0,
        }
    }

    /// A single block and nothing else (`n = k`).
    pub fn single_hat(k: usize) -> Self {
        Self {
            params: ProcessParams { n: k, k },
            counts: vec![0; k - 1],
            hats: 1,
        }
    }

    /// The only jammed state of a string shorter than `k`.
    pub fn short_string(params: ProcessParams) -> Self {
        debug_assert!(params.n < params.k);
        let mut g = Self::empty(params.k);
        g.params.n = params.n;
        if params.n > 0 {
            g.counts[params.n - 1] = 1;
        }
        g
    }

    /// Jammed state of a string with `n < k`, `n = k`, or `n = 0`.
    pub fn base_case(params: ProcessParams) -> Option<Self> {
        match params.n {
            n if n < params.k => Some(Self::short_string(params)),
            n if n == params.k => Some(Self::single_hat(params.k)),
            _ => None,
        }
    }

    /// Concatenates two independent sub-strings; lengths, counts and hats add.
    pub fn combine(&self, other: &Self) -> Self {
        debug_assert_eq!(self.params.k, other.params.k);
        Self {
            params: ProcessParams {
                n: self.params.n + other.params.n,
                k: self.params.k,
            },
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
            hats: self.hats + other.hats,
        }
    }

    /// `left | block | right`: the state obtained after the first block splits
    /// the string into two independent parts.
    pub fn join_around_hat(&self, other: &Self) -> Self {
        self.combine(other)
            .combine(&Self::single_hat(self.params.k))
    }

    pub fn vacancy(&self) -> VacancyValue {
        vacancy(self)
    }

    pub fn spacings(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Total vacant length `sum_j j * counts[j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VacancyValue(pub u64);

pub fn vacancy(g: &GapCounts) -> VacancyValue {
    VacancyValue(
        g.counts
            .iter()
            .enumerate()
            .map(|(idx, &c)| (idx as u64 + 1) * c)
            .sum(),
    )
}

/// Checks that `g` is a possible jammed state of the process with `params`.
///
/// Besides length conservation this requires at least one block once
/// `n >= k`, and no more spacings than there are slots between blocks.
pub fn validate_counts(params: ProcessParams, g: &GapCounts) -> bool {
    if params.k < 2 || g.params != params || g.counts.len() != params.k - 1 {
        return false;
    }
    let used = (params.k as u64)
        .checked_mul(g.hats)
        .and_then(|h| h.checked_add(vacancy(g).0));
    if used != Some(params.n as u64) {
        return false;
    }
    if params.n >= params.k && g.hats == 0 {
        return false;
    }
    g.spacings() <= g.hats + 1
}
