//! Monte Carlo simulation of the placement process.
//!
//! Every replication owns an independent ChaCha8 stream: the stream id is the
//! replication index and the key is derived from the batch seed, so a batch
//! gives bit-identical statistics for any number of worker threads.

mod fenwick;
mod pool;
mod stats;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_counts, GapCounts, ProcessParams};

pub use pool::GapPool;
pub use stats::{MomentAccumulator, SampleStats};

/// Identifies the generator in persisted results.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3); key = ChaCha8Rng::seed_from_u64(seed), stream = replication index";

const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: ProcessParams,
    pub replications: u64,
    pub seed: u64,
    /// Projection `c` for the scalar statistic `c . X`; all ones when absent.
    pub projection: Option<Vec<f64>>,
    /// Highest standardized moment of `c . Z` to estimate.
    pub max_order: usize,
}

impl SimConfig {
    pub fn new(params: ProcessParams, replications: u64, seed: u64) -> Self {
        Self {
            params,
            replications,
            seed,
            projection: None,
            max_order: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.k < 2 {
            return Err(Error::InvalidParams {
                n: self.params.n,
                k: self.params.k,
            });
        }
        if self.replications == 0 {
            return Err(Error::InvalidArgument(
                "replications must be at least 1".into(),
            ));
        }
        if let Some(c) = &self.projection {
            if c.len() != self.params.k - 1 {
                return Err(Error::InvalidArgument(format!(
                    "projection has length {}, expected k - 1 = {}",
                    c.len(),
                    self.params.k - 1
                )));
            }
        }
        Ok(())
    }

    pub fn projection_vector(&self) -> Vec<f64> {
        self.projection
            .clone()
            .unwrap_or_else(|| vec![1.0; self.params.k - 1])
    }
}

/// Runs the process once to jamming.
pub fn simulate_once<R: Rng + ?Sized>(params: ProcessParams, rng: &mut R) -> GapCounts {
    let mut pool = GapPool::new(params);
    run_to_jam(&mut pool, params, rng)
}

fn run_to_jam<R: Rng + ?Sized>(
    pool: &mut GapPool,
    params: ProcessParams,
    rng: &mut R,
) -> GapCounts {
    while !pool.is_jammed() {
        pool.sample_gap(rng).expect("pool has positive weight");
    }
    pool.terminal_counts(params)
}

/// Deterministic per-replication streams for one batch seed.
#[derive(Debug, Clone)]
pub struct StreamFactory {
    key: <ChaCha8Rng as SeedableRng>::Seed,
}

impl StreamFactory {
    pub fn new(seed: u64) -> Self {
        Self {
            key: ChaCha8Rng::seed_from_u64(seed).get_seed(),
        }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}

/// Simulates replications `range` of a batch, handing each terminal state to `visit`.
pub fn for_each_replication<F>(
    params: ProcessParams,
    seed: u64,
    range: std::ops::Range<u64>,
    mut visit: F,
) where
    F: FnMut(u64, &GapCounts),
{
    let streams = StreamFactory::new(seed);
    let mut pool = GapPool::new(params);
    for idx in range {
        let mut rng = streams.stream(idx);
        pool.reset(params);
        let g = run_to_jam(&mut pool, params, &mut rng);
        visit(idx, &g);
    }
}

/// Runs `config.replications` independent replications and summarises them.
///
/// Work is split into fixed chunks whose partial sums are merged in chunk
/// order, so the result does not depend on the thread pool.
pub fn simulate_batch(config: &SimConfig) -> Result<SampleStats> {
    config.validate()?;
    let params = config.params;
    let projection = config.projection_vector();

    // the first replication fixes the shift used for projected power sums
    let mut shift = 0.0;
    for_each_replication(params, config.seed, 0..1, |_, g| {
        shift = dot(&projection, &g.counts);
    });

    let chunks = config.replications.div_ceil(CHUNK);
    let partials: Vec<MomentAccumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(config.replications);
            let mut acc =
                MomentAccumulator::new(params, projection.clone(), shift, config.max_order);
            for_each_replication(params, config.seed, start..end, |_, g| {
                acc.push(g, validate_counts(params, g));
            });
            acc
        })
        .collect();

    let mut total = MomentAccumulator::new(params, projection, shift, config.max_order);
    for p in &partials {
        total.merge(p);
    }
    Ok(total.finish(config.clone()))
}

/// Histogram of terminal states over replications `0..replications`.
pub fn simulate_histogram(
    params: ProcessParams,
    replications: u64,
    seed: u64,
) -> std::collections::BTreeMap<GapCounts, u64> {
    let chunks = replications.div_ceil(CHUNK);
    let partials: Vec<_> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(replications);
            let mut hist = std::collections::BTreeMap::new();
            for_each_replication(params, seed, start..end, |_, g| {
                *hist.entry(g.clone()).or_insert(0u64) += 1;
            });
            hist
        })
        .collect();
    let mut hist = std::collections::BTreeMap::new();
    for part in partials {
        for (g, c) in part {
            *hist.entry(g).or_insert(0) += c;
        }
    }
    hist
}

pub(crate) fn dot(c: &[f64], counts: &[u64]) -> f64 {
    c.iter().zip(counts).map(|(a, &b)| a * b as f64).sum()
}
