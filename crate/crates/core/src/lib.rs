//! A laboratory for finite concept classes: exact combinatorial dimensions
//! with checkable certificates, online and statistical learners, adversarial
//! constructions, expert covers, adversarial sampling, and information-
//! theoretic stability measures.
//!
//! Everything operates on explicitly enumerated classes over finite domains,
//! so all quantities are computed exactly (or by seeded Monte Carlo where a
//! simulation is the point). Randomness always flows from explicit seeds.

pub mod bits;
pub mod certs;
pub mod class;
pub mod dims;
pub mod dist;
pub mod io;
pub mod learners;
pub mod online;
pub mod pec;
pub mod sampling;
pub mod stability;

pub use bits::Bits;
pub use class::{
    powerset, random_class, singletons, thresholds, ConceptClass, Domain, Hypothesis,
    LabeledExample, LabeledSequence, PointMasks,
};
pub use dist::FiniteDistribution;

use rand_chacha::rand_core::SeedableRng;

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("unrealizable input: {0}")]
    Unrealizable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Deterministic per-trial RNG derived from a base seed and a stream index.
///
/// Trials keyed by `(seed, stream)` are independent and reproducible, so
/// Monte Carlo harnesses may run them in any order (or in parallel) and
/// aggregate identically.
pub fn trial_rng(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&(!seed).to_le_bytes());
    rand_chacha::ChaCha8Rng::from_seed(key)
}
