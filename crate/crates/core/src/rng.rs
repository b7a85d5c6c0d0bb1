//! Deterministic input generation for test vectors and simulator batches.
//!
//! The generator is splitmix64 (Steele, Lea, Flood; public domain), chosen
//! because it is trivially reimplemented in any language, so vector files
//! produced here can be regenerated bit-for-bit by an external reference
//! implementation:
//!
//! ```text
//! x += 0x9E3779B97F4A7C15
//! z  = x
//! z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out = z ^ (z >> 31)
//! ```

/// A splitmix64 stream seeded with a 64-bit value.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    x: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { x: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.x = self.x.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.x;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Four successive outputs, little-endian, as a 32-byte password input.
    pub fn next_pwd(&mut self) -> [u8; 32] {
        let mut out = [0u8; 32];
        for i in 0..4 {
            out[8 * i..8 * i + 8].copy_from_slice(&self.next_u64().to_le_bytes());
        }
        out
    }
}
