//! Lyra2 as instantiated in the Lyra2REv2 proof-of-work chain, together with
//! cycle-accurate software models of two hardware datapaths for it.
//!
//! The crate is split into four layers:
//!
//! - [`blake2b`]: the BLAKE2b G-function and the bare (message-free) round
//!   permutation that drives the sponge.
//! - [`sponge`]: the 1024-bit duplex construction with a 768-bit bitrate and
//!   256-bit capacity, including the fixed 512-bit bootstrap padding.
//! - [`lyra2`]: the four phases (bootstrap, setup, wandering, wrap-up) over
//!   the 4x4 memory matrix, producing a 256-bit digest from a 256-bit input.
//! - [`hwsim`]: a cycle-accurate model of an iterative datapath (68 clock
//!   cycles per hash) and an 8-way pipelined datapath (544-cycle latency,
//!   8 concurrent hashes), including the block-RAM port model and a
//!   frequency-to-throughput calculator.

pub mod blake2b;
pub mod hwsim;
pub mod lyra2;
pub mod rng;
pub mod sponge;

pub use lyra2::{lyra2_hash, Lyra2Error, Lyra2Params};
pub use sponge::{Block512, Block768, Digest256, DuplexState};
