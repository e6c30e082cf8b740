use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid process parameters: n = {n}, k = {k} (k must be at least 2)")]
    InvalidParams { n: usize, k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what}: n = {n} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("moment of order {order} at n = {n} is outside double range; lower the order or N")]
    Overflow { n: usize, order: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no feasible placement left in the gap pool")]
    EmptyPool,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
