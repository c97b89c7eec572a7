//! Counter-based, splittable uniform random number generation.
//!
//! Every draw is a pure function of `(seed, stream_id, cursor)`, so replaying
//! a run needs no state files: reconstruct the stream and skip to any cursor.
//! Distinct stream ids behave as independent streams, which is what lets
//! replicates fan out across threads and still merge deterministically.
//!
//! The generator hashes the 192-bit input down to 64 bits with two rounds of
//! the SplitMix64 finalizer (Steele, Lea & Flood's avalanche function, also
//! used as the MurmurHash3/xxHash mixer). One round already passes the
//! uniformity screens in this crate; two rounds decouple the stream id from
//! the counter.

/// Name of the generator recorded in run metadata.
pub const GENERATOR_NAME: &str = "splitmix64-counter-2round";

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const STREAM_SALT: u64 = 0xbf58_476d_1ce4_e5b9;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn word_at(seed: u64, stream_id: u64, cursor: u64) -> u64 {
    let base = seed ^ mix64(stream_id.wrapping_mul(STREAM_SALT).wrapping_add(GOLDEN));
    mix64(mix64(base.wrapping_add(cursor.wrapping_mul(GOLDEN))))
}

/// A seeded, replayable stream of uniforms on the open interval `(0,1)`,
/// splittable by stream id.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct UniformStream {
    seed: u64,
    stream_id: u64,
    cursor: u64,
}

impl UniformStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        UniformStream { seed, stream_id, cursor: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of draws consumed so far.
    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    /// A fresh stream over the same seed with a different stream id.
    pub fn split(&self, stream_id: u64) -> Self {
        UniformStream::new(self.seed, stream_id)
    }

    pub fn next_u64(&mut self) -> u64 {
        let w = word_at(self.seed, self.stream_id, self.cursor);
        self.cursor += 1;
        w
    }

    /// Next uniform draw in the open interval `(0,1)`.
    ///
    /// The top 53 bits are centered on the half-integers of a 2^53 grid, so
    /// neither 0.0 nor 1.0 can ever be produced.
    pub fn next_f64(&mut self) -> f64 {
        let w = self.next_u64();
        ((w >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// The draw this stream would produce at an absolute cursor position,
    /// without touching the stream state.
    pub fn value_at(&self, cursor: u64) -> f64 {
        let w = word_at(self.seed, self.stream_id, cursor);
        ((w >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform integer in `0..n` by rejection-free scaling of a fresh word.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let u = self.next_f64();
        let j = (u * n as f64).ceil() as usize;
        j.clamp(1, n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_is_identical() {
        let mut a = UniformStream::new(42, 7);
        let first: Vec<f64> = (0..1000).map(|_| a.next_f64()).collect();
        let mut b = UniformStream::new(42, 7);
        let second: Vec<f64> = (0..1000).map(|_| b.next_f64()).collect();
        assert_eq!(first, second);
    }

    #[test]
    fn draws_are_in_open_unit_interval() {
        let mut s = UniformStream::new(0, 0);
        for _ in 0..100_000 {
            let u = s.next_f64();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn streams_differ_by_id() {
        let mut a = UniformStream::new(9, 0);
        let mut b = UniformStream::new(9, 1);
        let va: Vec<u64> = (0..64).map(|_| a.next_u64()).collect();
        let vb: Vec<u64> = (0..64).map(|_| b.next_u64()).collect();
        assert_ne!(va, vb);
    }

    #[test]
    fn value_at_matches_sequential_draws() {
        let mut s = UniformStream::new(123, 5);
        let probe = s.clone();
        for i in 0..500u64 {
            assert_eq!(s.next_f64(), probe.value_at(i));
        }
    }

    #[test]
    fn coarse_uniformity() {
        // 10 bins, 100k draws: each bin within 5 sigma of 10k.
        let mut s = UniformStream::new(2024, 3);
        let mut bins = [0u32; 10];
        for _ in 0..100_000 {
            bins[(s.next_f64() * 10.0) as usize] += 1;
        }
        for &b in &bins {
            assert!((b as f64 - 10_000.0).abs() < 5.0 * (100_000.0f64 * 0.1 * 0.9).sqrt());
        }
    }
}
