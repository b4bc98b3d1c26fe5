//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream keyed by
//! `(seed, stream id)`. Bulk sampling fills fixed-size chunks, one stream per
//! chunk, so the output does not depend on how rayon schedules the work.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Draws per chunk in [`par_fill`].
pub const CHUNK: usize = 1 << 14;

/// Stream-id namespaces, kept apart so that callers sharing a seed never
/// reuse a stream for unrelated purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Sample = 1,
    Replication = 2,
    SumLaw = 3,
    Fixture = 4,
}

pub fn stream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << 56) | (index & ((1 << 56) - 1)));
    rng
}

/// Fill a vector of `n` values by calling `draw` with chunk-local streams.
pub fn par_fill<F>(n: usize, seed: u64, domain: Domain, draw: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let mut out = vec![0.0; n];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(chunk, slot)| {
            let mut rng = stream(seed, domain, chunk as u64);
            for v in slot.iter_mut() {
                *v = draw(&mut rng);
            }
        });
    out
}
