use rand::Rng;

use super::fenwick::Fenwick;
use crate::error::{Error, Result};
use crate::model::{GapCounts, ProcessParams};

/// Open gaps of a partially filled string.
///
/// Each gap of length `g` carries weight `max(g - k + 1, 0)`, the number of
/// block positions it still admits. Drawing a point uniformly from the total
/// weight `W` picks a feasible block uniformly among all of them: the gap is
/// hit with probability `weight / W` and the residual inside its weight is
/// the block's offset.
#[derive(Debug, Clone)]
pub struct GapPool {
    k: usize,
    gaps: Vec<usize>,
    weights: Fenwick,
    total: u64,
    hats: u64,
}

impl GapPool {
    pub fn new(params: ProcessParams) -> Self {
        let mut pool = Self {
            k: params.k,
            gaps: Vec::new(),
            weights: Fenwick::default(),
            total: 0,
            hats: 0,
        };
        pool.reset(params);
        pool
    }

    /// Reinitialises the pool to a single empty string of `params.n` positions.
    pub fn reset(&mut self, params: ProcessParams) {
        self.k = params.k;
        self.gaps.clear();
        self.total = 0;
        self.hats = 0;
        // at most one gap per block plus one
        let slots = params.n / params.k + 1;
        if self.weights.len() < slots {
            self.weights = Fenwick::with_capacity(slots);
        } else {
            self.weights.reset(self.weights.len());
        }
        if params.n > 0 {
            self.push(params.n);
        }
    }

    /// Builds a pool from arbitrary gap lengths (zero lengths are dropped).
    pub fn from_gaps(k: usize, gaps: &[usize]) -> Self {
        let n: usize = gaps.iter().sum();
        let slots = gaps.len() + n / k + 1;
        let mut pool = Self {
            k,
            gaps: Vec::with_capacity(slots),
            weights: Fenwick::with_capacity(slots),
            total: 0,
            hats: 0,
        };
        for &g in gaps.iter().filter(|&&g| g > 0) {
            pool.push(g);
        }
        pool
    }

    fn weight(&self, gap: usize) -> u64 {
        (gap + 1).saturating_sub(self.k) as u64
    }

    fn push(&mut self, gap: usize) {
        let slot = self.gaps.len();
        self.gaps.push(gap);
        let w = self.weight(gap);
        self.weights.add(slot, w as i64);
        self.total += w;
    }

    fn set(&mut self, slot: usize, gap: usize) {
        let old = self.weight(self.gaps[slot]);
        let new = self.weight(gap);
        self.gaps[slot] = gap;
        self.weights.add(slot, new as i64 - old as i64);
        self.total = self.total - old + new;
    }

    /// Total number of feasible block positions.
    pub fn total_weight(&self) -> u64 {
        self.total
    }

    pub fn is_jammed(&self) -> bool {
        self.total == 0
    }

    pub fn hats(&self) -> u64 {
        self.hats
    }

    /// Current gap lengths (zero-length gaps excluded).
    pub fn gaps(&self) -> impl Iterator<Item = usize> + '_ {
        self.gaps.iter().copied().filter(|&g| g > 0)
    }

    /// Places one block uniformly among all feasible positions.
    ///
    /// Returns the length of the gap that was hit and the block's offset in it.
    pub fn sample_gap<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(usize, usize)> {
        if self.total == 0 {
            return Err(Error::EmptyPool);
        }
        let target = rng.gen_range(0..self.total);
        let (slot, residual) = self.weights.locate(target);
        let gap = self.gaps[slot];
        let offset = residual as usize;
        let right = gap - self.k - offset;
        self.hats += 1;
        match (offset, right) {
            (0, 0) => self.set(slot, 0),
            (0, r) => self.set(slot, r),
            (l, 0) => self.set(slot, l),
            (l, r) => {
                self.set(slot, l);
                self.push(r);
            }
        }
        Ok((gap, offset))
    }

    /// Summarises a jammed pool. Call only once `is_jammed()` holds.
    pub fn terminal_counts(&self, params: ProcessParams) -> GapCounts {
        let mut counts = vec![0u64; params.k - 1];
        for g in self.gaps() {
            debug_assert!(g < params.k);
            counts[g - 1] += 1;
        }
        GapCounts {
            params,
            counts,
            hats: self.hats,
        }
    }
}
