//! Seeded, platform-independent random streams.
//!
//! Everything random derives from one 64-bit seed: a ChaCha8 generator keyed
//! with `seed_from_u64(seed)`, with one ChaCha stream per independent work
//! item (simulated subject, replication batch, pool sample). Results are
//! therefore identical across runs and thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let draw = |stream| {
            let mut r = stream_rng(7, stream);
            (0..4).map(|_| r.random::<u64>()).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }
}
