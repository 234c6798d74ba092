//! Deterministic xorshift64* generator used for mask generation.
//!
//! The exact state transition is part of the mask reproducibility contract,
//! so it is written out here rather than borrowed from a general-purpose RNG
//! crate whose sampling algorithms may change between releases.
//!
//! Seeding: `state = splitmix64(seed)`; a zero result is replaced by
//! `0x9E37_79B9_7F4A_7C15` because xorshift state must be nonzero.
//!
//! Step:
//!
//! ```text
//! x ^= x >> 12
//! x ^= x << 25
//! x ^= x >> 27
//! state = x
//! output = x * 0x2545_F491_4F6C_DD1D   (wrapping)
//! ```
//!
//! `below(n)` is the high 64 bits of the 128-bit product `output * n`.
//! `unit()` is `(output >> 11) * 2^-53`, uniform on `[0, 1)`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer applied to `seed + GOLDEN`.
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = match splitmix64(seed) {
            0 => GOLDEN,
            s => s,
        };
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish integer in `0..n`. Returns 0 when `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        ((u128::from(self.next_u64()) * u128::from(n)) >> 64) as u64
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
