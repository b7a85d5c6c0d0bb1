//! The duplex construction Lyra2 is built on.
//!
//! The state is 1024 bits: a 768-bit bitrate (words 0..11, externally XORed)
//! and a 256-bit capacity (words 12..15, only touched by the permutation).
//! The duplex is initialized with zeros in the lower half and the BLAKE2b IV
//! in the upper half, and keeps its state across calls.
//!
//! Byte serialization everywhere is little-endian within each 64-bit word,
//! word 0 first.

use crate::blake2b::{self, State1024, BLAKE2B_IV, FULL_ROUNDS};
use crate::lyra2::Lyra2Params;

/// Bitrate in bits (12 words).
pub const BITRATE_BITS: usize = 768;

/// Capacity in bits (4 words).
pub const CAPACITY_BITS: usize = 256;

/// Words in a bitrate-sized block (one memory-matrix cell).
pub const BLOCK_WORDS: usize = 12;

/// A bitrate-sized (768-bit) duplex input/output block.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub struct Block768(pub [u64; 12]);

/// A 512-bit bootstrap input block.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub struct Block512(pub [u64; 8]);

/// The 256-bit output digest.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub struct Digest256(pub [u64; 4]);

impl Block768 {
    pub fn to_bytes(&self) -> [u8; 96] {
        let mut out = [0u8; 96];
        for (i, w) in self.0.iter().enumerate() {
            out[8 * i..8 * i + 8].copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8; 96]) -> Self {
        let mut words = [0u64; 12];
        for (i, w) in words.iter_mut().enumerate() {
            *w = u64::from_le_bytes(bytes[8 * i..8 * i + 8].try_into().unwrap());
        }
        Self(words)
    }
}

impl Block512 {
    pub fn to_bytes(&self) -> [u8; 64] {
        let mut out = [0u8; 64];
        for (i, w) in self.0.iter().enumerate() {
            out[8 * i..8 * i + 8].copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8; 64]) -> Self {
        let mut words = [0u64; 8];
        for (i, w) in words.iter_mut().enumerate() {
            *w = u64::from_le_bytes(bytes[8 * i..8 * i + 8].try_into().unwrap());
        }
        Self(words)
    }

    /// Widens to a bitrate-sized block with zeros in the upper four words,
    /// which is how 512-bit constants are stored in the simulator's RAM.
    pub fn widen(&self) -> Block768 {
        let mut words = [0u64; 12];
        words[..8].copy_from_slice(&self.0);
        Block768(words)
    }
}

impl Digest256 {
    pub fn to_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        for (i, w) in self.0.iter().enumerate() {
            out[8 * i..8 * i + 8].copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8; 32]) -> Self {
        let mut words = [0u64; 4];
        for (i, w) in words.iter_mut().enumerate() {
            *w = u64::from_le_bytes(bytes[8 * i..8 * i + 8].try_into().unwrap());
        }
        Self(words)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }
}

/// The duplex: 1024-bit state plus a counter of round applications, used by
/// the tests and the simulators to audit the per-phase cycle budget.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DuplexState {
    state: State1024,
    rounds_applied: u64,
}

impl DuplexState {
    /// Fresh duplex: bitrate-low words zero, the upper 512 bits hold the
    /// BLAKE2b IV so the bootstrap absorbs never overwrite it.
    pub fn new() -> Self {
        let mut state = [0u64; 16];
        state[8..16].copy_from_slice(&BLAKE2B_IV);
        Self {
            state,
            rounds_applied: 0,
        }
    }

    pub fn bitrate_bits(&self) -> usize {
        BITRATE_BITS
    }

    pub fn capacity_bits(&self) -> usize {
        CAPACITY_BITS
    }

    pub fn words(&self) -> &State1024 {
        &self.state
    }

    /// Total `round` applications so far.
    pub fn rounds_applied(&self) -> u64 {
        self.rounds_applied
    }

    fn permute(&mut self, rounds: usize) {
        blake2b::permute(&mut self.state, rounds);
        self.rounds_applied += rounds as u64;
    }

    /// Copy of the bitrate part (words 0..11).
    pub fn bitrate(&self) -> Block768 {
        let mut words = [0u64; 12];
        words.copy_from_slice(&self.state[..12]);
        Block768(words)
    }

    /// Full-round absorb of a 512-bit block: XOR into words 0..7, permute 12x.
    pub fn absorb_block512(&mut self, block: &Block512) {
        for (w, b) in self.state[..8].iter_mut().zip(block.0.iter()) {
            *w ^= b;
        }
        self.permute(FULL_ROUNDS);
    }

    /// Full-round absorb of a bitrate-sized block (the wrap-up absorb).
    pub fn absorb_block768(&mut self, block: &Block768) {
        for (w, b) in self.state[..12].iter_mut().zip(block.0.iter()) {
            *w ^= b;
        }
        self.permute(FULL_ROUNDS);
    }

    /// Duplexing: XOR the block into the bitrate, permute, return the new
    /// bitrate. Matrix cells are exactly bitrate-sized, so no padding applies.
    pub fn duplex(&mut self, block: &Block768, rounds: usize) -> Block768 {
        for (w, b) in self.state[..12].iter_mut().zip(block.0.iter()) {
            *w ^= b;
        }
        self.permute(rounds);
        self.bitrate()
    }

    /// Squeeze: read the bitrate, then advance the state (empty absorb).
    /// The output is the bitrate *before* the permutation.
    pub fn squeeze(&mut self, rounds: usize) -> Block768 {
        let out = self.bitrate();
        self.permute(rounds);
        out
    }

    /// Final output: the first 256 bits of the bitrate, no permutation.
    pub fn squeeze_digest(&self) -> Digest256 {
        let mut words = [0u64; 4];
        words.copy_from_slice(&self.state[..4]);
        Digest256(words)
    }
}

impl Default for DuplexState {
    fn default() -> Self {
        Self::new()
    }
}

/// Builds the second bootstrap block: the six parameter fields
/// `len(K) || len(pwd) || len(salt) || T || R || C` as little-endian 64-bit
/// integers (lengths in bytes, salt length reported as the password length),
/// closed by the multi-rate padding `0x80 .. 0x01` that fills the 512-bit
/// block.
pub fn pad_params(params: &Lyra2Params, pwd_len_bytes: u64, key_len_bytes: u64) -> Block512 {
    let mut bytes = [0u8; 64];
    let fields = [
        key_len_bytes,
        pwd_len_bytes,
        pwd_len_bytes,
        params.time_cost,
        params.rows as u64,
        params.cols as u64,
    ];
    for (i, f) in fields.iter().enumerate() {
        bytes[8 * i..8 * i + 8].copy_from_slice(&f.to_le_bytes());
    }
    bytes[48] = 0x80;
    bytes[63] |= 0x01;
    Block512::from_bytes(&bytes)
}
