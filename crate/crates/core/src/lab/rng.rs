//! Portable pseudo-random generators.
//!
//! Both algorithms are fully specified here so that noise patterns can be
//! reproduced bit-for-bit in other languages.

/// One step of SplitMix64: adds the golden-ratio increment to `x` and
/// returns the mixed result.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D).
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    /// Seeds the state with `splitmix64(seed)`. The all-zero state is a
    /// fixed point of xorshift, so it is replaced by `0x9E3779B97F4A7C15`.
    pub fn new(seed: u64) -> Self {
        let state = match splitmix64(seed) {
            0 => 0x9E37_79B9_7F4A_7C15,
            s => s,
        };
        Self { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)` from the top 53 bits of the next output.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
