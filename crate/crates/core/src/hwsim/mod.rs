//! Cycle-accurate models of two hardware datapaths for the Lyra2 core.
//!
//! The basic iterative datapath executes one permutation round per clock
//! cycle and finishes a hash in 68 cycles. The pipelined datapath splits the
//! round into eight stages and rotates eight independent hash contexts
//! through them, raising per-hash latency to 544 cycles while sustaining
//! eight hashes per 544 cycles.
//!
//! The memory matrix lives in a block-RAM model whose multipumped and
//! replicated ports provide four reads and two writes per cycle; every
//! simulated cycle is pushed through that port model and logged, so the
//! schedule can be audited offline with [`schedule_check`].

mod bram;
mod datapath;
mod trace;

pub use bram::{BramError, BramModel, ReadPort, WritePort, MAX_READS, MAX_WRITES};
pub use datapath::{
    sim_iterative, sim_pipelined, throughput_mhash, Arch, HashContext, IterativeRun, PipelinedRun,
    SimError, ThroughputError, CONCURRENT_HASHES, ITERATIVE_CYCLES, MATRIX_CELLS, PIPELINE_LATENCY,
    PIPELINE_STAGES,
};
pub use trace::{schedule_check, CycleRecord, FsmPhase, SimTrace, Violation};
