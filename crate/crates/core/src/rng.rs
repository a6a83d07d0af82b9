//! Counter-based reproducible random number generation.
//!
//! Simulations here must be reproducible regardless of thread scheduling, so
//! randomness is addressed, not consumed: every 64-bit word is a pure
//! function of `(seed, stream, counter)`. The construction is the SplitMix64
//! Weyl sequence with its finalizer [`mix64`]:
//!
//! - stream derivation: `base(seed, stream) = mix64(seed) XOR
//!   mix64(stream · STREAM_SALT + GOLDEN_GAMMA)`,
//! - word addressing:   `word(counter) = mix64(base + (counter + 1) ·
//!   GOLDEN_GAMMA)`.
//!
//! Simulation code assigns one stream per trial (trial index → substream) and
//! addresses matrix entries by their linear index within the stream, so a
//! trial's matrix is identical whether it is materialized, applied
//! matrix-free, or evaluated on any worker pool.

/// Weyl increment of SplitMix64 (the golden-ratio constant).
pub const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

const STREAM_SALT: u64 = 0xa076_1d64_78bd_642f;

/// SplitMix64 finalizer: a 64-bit bijective mixer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds extra identifiers (column index, scheme index, …) into a seed, so
/// nested tasks get decorrelated but fully documented sub-seeds.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    let mut acc = mix64(seed);
    for &part in parts {
        acc = mix64(acc ^ mix64(part.wrapping_mul(STREAM_SALT) ^ GOLDEN_GAMMA));
    }
    acc
}

/// Randomly-accessible stream of 64-bit words for one `(seed, stream)` pair.
#[derive(Clone, Copy, Debug)]
pub struct CounterRng {
    base: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        CounterRng {
            base: mix64(seed)
                ^ mix64(stream.wrapping_mul(STREAM_SALT).wrapping_add(GOLDEN_GAMMA)),
        }
    }

    /// The `counter`-th word of the stream.
    #[inline]
    pub fn word(&self, counter: u64) -> u64 {
        mix64(
            self.base
                .wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&self, counter: u64) -> f64 {
        (self.word(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Sequential facade over [`CounterRng`] for generator-style consumers.
#[derive(Clone, Debug)]
pub struct SequentialRng {
    rng: CounterRng,
    counter: u64,
}

impl SequentialRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        SequentialRng {
            rng: CounterRng::new(seed, stream),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let w = self.rng.word(self.counter);
        self.counter += 1;
        w
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` by 128-bit multiply-shift.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}
