//! Random number generation contract.
//!
//! Every sampling entry point takes an explicit 64-bit seed and derives a
//! ChaCha8 generator from it. Independent substreams come from the ChaCha
//! stream parameter, which partitions as follows:
//!
//! * stream 0 — a plain chain run (`chain::run`, CLI `sample`);
//! * streams 1 and 2 — the two runs of `random_matching_pair`;
//! * streams with bit 63 set — estimator stages: bits 40..63 hold the
//!   stage index, bits 0..40 the sample index within the stage.
//!
//! Fixing the layout makes every consumer reproducible bit-for-bit from
//! `(seed, role)` alone, and lets samples be drawn in parallel without any
//! sequential hand-off of generator state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ChainRng = ChaCha8Rng;

const ESTIMATOR_BIT: u64 = 1 << 63;

fn with_stream(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChainRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for a single chain run.
pub fn run_rng(seed: u64) -> ChainRng {
    with_stream(seed, 0)
}

/// Generators for the two independent runs of a matching pair draw.
pub fn pair_rng(seed: u64, which: usize) -> ChainRng {
    debug_assert!(which < 2);
    with_stream(seed, 1 + which as u64)
}

/// Generator for sample `sample` of estimator stage `stage`.
pub fn estimator_rng(seed: u64, stage: usize, sample: u64) -> ChainRng {
    debug_assert!(stage < (1 << 23));
    debug_assert!(sample < (1 << 40));
    with_stream(seed, ESTIMATOR_BIT | ((stage as u64) << 40) | sample)
}

/// Generator for item `idx` of a seeded corpus or batch.
pub fn corpus_rng(seed: u64, idx: u64) -> ChainRng {
    with_stream(seed, (1 << 62) | idx)
}
