//! The datapath model shared by the iterative and pipelined simulators.
//!
//! One core clock cycle executes one round of the permutation for the active
//! context. The FSM walks the phases in order; per cycle it decides which RAM
//! cells feed the duplex input adder (ports qa/qb), which cells feed the two
//! output XOR blocks (qc/qd), and which cells are written (w0/w1).
//!
//! In the iterative datapath everything for a round happens in its own cycle
//! and the second XOR operand is taken combinationally from the qa data, so
//! qd stays idle. In the pipelined datapath the round takes eight cycles, so
//! the XOR operands are fetched on qc/qd eight cycles after the qa/qb fetch,
//! together with the writes; the write-first RAM forwards same-cycle write
//! data to the qa/qb reads of the next round.

use super::bram::{BramError, BramModel, ReadPort, WritePort};
use super::trace::{CycleRecord, FsmPhase, SimTrace};
use crate::blake2b::{FULL_ROUNDS, REDUCED_ROUNDS};
use crate::lyra2::{
    pwd_block, rot_w, wordwise_add, Lyra2Error, Lyra2Params, COLS, PWD_BYTES, ROWS,
};
use crate::sponge::{pad_params, Block768, Digest256, DuplexState};
use thiserror::Error;

/// Clock cycles per hash on the iterative datapath.
pub const ITERATIVE_CYCLES: u64 = 68;

/// Round-internal pipeline stages in the pipelined datapath.
pub const PIPELINE_STAGES: u64 = 8;

/// Hashes in flight on the pipelined datapath.
pub const CONCURRENT_HASHES: usize = 8;

/// Per-hash latency of the pipelined datapath, in clock cycles.
pub const PIPELINE_LATENCY: u64 = ITERATIVE_CYCLES * PIPELINE_STAGES;

/// Matrix cells per hash context.
pub const MATRIX_CELLS: usize = ROWS * COLS;

#[derive(Error, Debug)]
pub enum SimError {
    #[error(transparent)]
    Input(#[from] Lyra2Error),
    #[error("scheduling violation at cycle {cycle}: {source}")]
    Schedule { cycle: u64, source: BramError },
    #[error("pipelined simulator needs exactly {CONCURRENT_HASHES} inputs, got {0}")]
    WrongBatchSize(usize),
}

/// FSM control state: current phase plus the loop counters that generate
/// addresses.
#[derive(Clone, Copy, Debug)]
struct Fsm {
    phase: FsmPhase,
    /// Round within the current full permutation (bootstrap and wrap-up).
    round: usize,
    /// row0 of the setup/wandering loops.
    row: usize,
    col: usize,
    /// Pseudorandom row of the current wandering iteration.
    row1: usize,
    /// Row absorbed by the wrap-up.
    last_row1: usize,
}

impl Fsm {
    fn new() -> Self {
        Self {
            phase: FsmPhase::Bootstrap,
            round: 0,
            row: 0,
            col: 0,
            row1: 0,
            last_row1: 0,
        }
    }
}

/// One hash being computed: its duplex, control state, and matrix region.
pub struct HashContext {
    duplex: DuplexState,
    fsm: Fsm,
    /// First RAM address of this context's 16-cell matrix region.
    base: usize,
    pwd_block: Block768,
    digest: Option<Digest256>,
    /// Deferred output work in pipelined mode: XOR-operand fetches and
    /// writes of the round issued one active cycle earlier.
    pending: Option<Pending>,
}

struct Pending {
    qc: Option<usize>,
    qd: Option<usize>,
    kind: PendingKind,
}

enum PendingKind {
    /// Setup0: `w0 = value ^ qc` (qc is the all-zero constant).
    Squeeze { value: Block768, dest: usize },
    /// Setup1: `w0 = qc ^ rand`.
    Single { rand: Block768, dest: usize },
    /// Setup2 / wandering: `w0 = qc ^ rand`, `w1 = qd ^ rot_w(rand)`.
    Dual {
        rand: Block768,
        dest0: usize,
        dest1: usize,
    },
    /// Wandering row collision: w0 disabled, the first XOR output chains
    /// into the second: `w1 = qc ^ rand ^ rot_w(rand)`.
    Collision { rand: Block768, dest: usize },
}

impl HashContext {
    fn new(pwd: &[u8; PWD_BYTES], base: usize) -> Self {
        Self {
            duplex: DuplexState::new(),
            fsm: Fsm::new(),
            base,
            pwd_block: pwd_block(pwd).widen(),
            digest: None,
            pending: None,
        }
    }

    fn cell_addr(&self, row: usize, col: usize) -> usize {
        self.base + row * COLS + col
    }

    fn done(&self) -> bool {
        self.fsm.phase == FsmPhase::Done
    }

    fn idle(&self) -> bool {
        self.done() && self.pending.is_none()
    }
}

fn xor_blocks(x: &Block768, y: &Block768) -> Block768 {
    let mut out = *x;
    for (o, v) in out.0.iter_mut().zip(y.0.iter()) {
        *o ^= v;
    }
    out
}

/// The shared datapath: one BRAM (with the two constant vectors at the top
/// of the address space) plus one or more hash contexts.
struct Datapath {
    bram: BramModel,
    zero_addr: usize,
    params_addr: usize,
}

impl Datapath {
    fn new(contexts: usize) -> Self {
        let zero_addr = contexts * MATRIX_CELLS;
        let params_addr = zero_addr + 1;
        let mut bram = BramModel::new(params_addr + 1);
        let params = Lyra2Params::default();
        bram.poke(
            params_addr,
            pad_params(&params, PWD_BYTES as u64, (params.output_bits / 8) as u64).widen(),
        );
        Self {
            bram,
            zero_addr,
            params_addr,
        }
    }
}

/// Everything one cycle of a context's FSM step needs and produces, before
/// it is split between "now" and "eight cycles later".
struct StepPlan {
    phase: FsmPhase,
    qa: Option<usize>,
    qb: Option<usize>,
    /// Bootstrap cycle 0 takes `pwd || pwd` straight from the input mux.
    direct_input: bool,
    writeback: Option<WritebackPlan>,
}

struct WritebackPlan {
    qc: Option<usize>,
    qd: Option<usize>,
    kind: WritebackKind,
}

enum WritebackKind {
    Squeeze { dest: usize },
    Single { dest: usize },
    Dual { dest0: usize, dest1: usize },
    Collision { dest: usize },
}

/// Computes the current cycle's port plan and advances the FSM counters.
/// Must be called once per active cycle; the caller applies the round.
fn plan_step(ctx: &mut HashContext, dp: &Datapath) -> Option<StepPlan> {
    let fsm = ctx.fsm;
    match fsm.phase {
        FsmPhase::Done => None,
        FsmPhase::Bootstrap => {
            let r = fsm.round;
            let plan = if r == 0 {
                StepPlan {
                    phase: FsmPhase::Bootstrap,
                    qa: None,
                    qb: None,
                    direct_input: true,
                    writeback: None,
                }
            } else {
                // The params constant enters on qa at the start of the second
                // absorb; every other cycle qa and qb supply the zero vector.
                let qa = if r == FULL_ROUNDS {
                    dp.params_addr
                } else {
                    dp.zero_addr
                };
                StepPlan {
                    phase: FsmPhase::Bootstrap,
                    qa: Some(qa),
                    qb: Some(dp.zero_addr),
                    direct_input: false,
                    writeback: None,
                }
            };
            ctx.fsm.round += 1;
            if ctx.fsm.round == 2 * FULL_ROUNDS {
                ctx.fsm.phase = FsmPhase::Setup0;
                ctx.fsm.round = 0;
                ctx.fsm.col = 0;
            }
            Some(plan)
        }
        FsmPhase::Setup0 => {
            let c = fsm.col;
            let plan = StepPlan {
                phase: FsmPhase::Setup0,
                qa: Some(dp.zero_addr),
                qb: Some(dp.zero_addr),
                direct_input: false,
                writeback: Some(WritebackPlan {
                    qc: Some(dp.zero_addr),
                    qd: None,
                    kind: WritebackKind::Squeeze {
                        dest: ctx.base + COLS - 1 - c,
                    },
                }),
            };
            ctx.fsm.col += 1;
            if ctx.fsm.col == COLS {
                ctx.fsm.phase = FsmPhase::Setup1;
                ctx.fsm.col = 0;
            }
            Some(plan)
        }
        FsmPhase::Setup1 => {
            let c = fsm.col;
            let src = ctx.base + c; // M[0][c]
            let plan = StepPlan {
                phase: FsmPhase::Setup1,
                qa: Some(src),
                qb: Some(dp.zero_addr),
                direct_input: false,
                writeback: Some(WritebackPlan {
                    qc: Some(src),
                    qd: None,
                    kind: WritebackKind::Single {
                        dest: ctx.base + COLS + (COLS - 1 - c),
                    },
                }),
            };
            ctx.fsm.col += 1;
            if ctx.fsm.col == COLS {
                ctx.fsm.phase = FsmPhase::Setup2;
                ctx.fsm.col = 0;
                ctx.fsm.row = 2;
            }
            Some(plan)
        }
        FsmPhase::Setup2 => {
            let (row0, c) = (fsm.row, fsm.col);
            let prev0 = row0 - 1;
            let row1 = row0 - 2;
            let qa = ctx.cell_addr(row1, c);
            let qb = ctx.cell_addr(prev0, c);
            let plan = StepPlan {
                phase: FsmPhase::Setup2,
                qa: Some(qa),
                qb: Some(qb),
                direct_input: false,
                writeback: Some(WritebackPlan {
                    qc: Some(qb),
                    qd: Some(qa),
                    kind: WritebackKind::Dual {
                        dest0: ctx.cell_addr(row0, COLS - 1 - c),
                        dest1: qa,
                    },
                }),
            };
            ctx.fsm.col += 1;
            if ctx.fsm.col == COLS {
                ctx.fsm.col = 0;
                ctx.fsm.row += 1;
                if ctx.fsm.row == ROWS {
                    ctx.fsm.phase = FsmPhase::Wandering;
                    ctx.fsm.row = 0;
                }
            }
            Some(plan)
        }
        FsmPhase::Wandering => {
            let (row0, c) = (fsm.row, fsm.col);
            if c == 0 {
                // lsw of the previous duplex output selects the row to
                // revisit; the bitrate is the live state, so read word 0.
                ctx.fsm.row1 = (ctx.duplex.words()[0] % ROWS as u64) as usize;
            }
            let row1 = ctx.fsm.row1;
            let prev0 = (row0 + ROWS - 1) % ROWS;
            let qa = ctx.cell_addr(row1, c);
            let qb = ctx.cell_addr(prev0, c);
            let qc = ctx.cell_addr(row0, c);
            let writeback = if row0 == row1 {
                WritebackPlan {
                    qc: Some(qc),
                    qd: None,
                    kind: WritebackKind::Collision { dest: qc },
                }
            } else {
                WritebackPlan {
                    qc: Some(qc),
                    qd: Some(qa),
                    kind: WritebackKind::Dual {
                        dest0: qc,
                        dest1: qa,
                    },
                }
            };
            let plan = StepPlan {
                phase: FsmPhase::Wandering,
                qa: Some(qa),
                qb: Some(qb),
                direct_input: false,
                writeback: Some(writeback),
            };
            ctx.fsm.col += 1;
            if ctx.fsm.col == COLS {
                ctx.fsm.col = 0;
                ctx.fsm.row += 1;
                if ctx.fsm.row == ROWS {
                    ctx.fsm.phase = FsmPhase::WrapAbsorb;
                    ctx.fsm.round = 0;
                    ctx.fsm.last_row1 = row1;
                }
            }
            Some(plan)
        }
        FsmPhase::WrapAbsorb => {
            let r = fsm.round;
            let last_row1 = fsm.last_row1;
            let qa = if r == 0 {
                ctx.cell_addr(last_row1, 0)
            } else {
                dp.zero_addr
            };
            let plan = StepPlan {
                phase: FsmPhase::WrapAbsorb,
                qa: Some(qa),
                qb: Some(dp.zero_addr),
                direct_input: false,
                writeback: None,
            };
            ctx.fsm.round += 1;
            if ctx.fsm.round == FULL_ROUNDS {
                ctx.fsm.phase = FsmPhase::Done;
            }
            Some(plan)
        }
    }
}

/// Result of one iterative-simulator run.
pub struct IterativeRun {
    pub digest: Digest256,
    pub cycles: u64,
    pub trace: SimTrace,
}

/// Runs the basic iterative datapath: one round per clock cycle, 68 cycles.
pub fn sim_iterative(pwd: &[u8]) -> Result<IterativeRun, SimError> {
    let pwd: &[u8; PWD_BYTES] = pwd
        .try_into()
        .map_err(|_| Lyra2Error::InvalidPasswordLength(pwd.len()))?;
    let mut dp = Datapath::new(1);
    let mut ctx = HashContext::new(pwd, 0);
    let mut trace = SimTrace::new();
    let mut cycle: u64 = 0;

    while let Some(plan) = plan_step(&mut ctx, &dp) {
        let qa_data = plan.qa.map(|a| *dp.bram.peek(a));
        let qb_data = plan.qb.map(|a| *dp.bram.peek(a));
        let input = if plan.direct_input {
            ctx.pwd_block
        } else {
            wordwise_add(&qa_data.unwrap(), &qb_data.unwrap())
        };
        let pre_round = ctx.duplex.bitrate();
        let rand = ctx.duplex.duplex(&input, REDUCED_ROUNDS);

        let mut reads: Vec<(ReadPort, usize)> = Vec::with_capacity(4);
        if let Some(a) = plan.qa {
            reads.push((ReadPort::Qa, a));
        }
        if let Some(a) = plan.qb {
            reads.push((ReadPort::Qb, a));
        }
        let mut writes: Vec<(WritePort, usize, Block768)> = Vec::with_capacity(2);
        if let Some(wb) = plan.writeback {
            match wb.kind {
                WritebackKind::Squeeze { dest } => {
                    // qc supplies the zero vector; output is the pre-round
                    // bitrate (squeeze reads before permuting).
                    let qc = wb.qc.unwrap();
                    reads.push((ReadPort::Qc, qc));
                    writes.push((WritePort::W0, dest, xor_blocks(&pre_round, dp.bram.peek(qc))));
                }
                WritebackKind::Single { dest } => {
                    // Operand is the qa data, reused combinationally.
                    writes.push((WritePort::W0, dest, xor_blocks(&qa_data.unwrap(), &rand)));
                }
                WritebackKind::Dual { dest0, dest1 } => {
                    // First operand: qb data in Setup2, a third cell read on
                    // qc in the wandering phase. Second operand: qa data.
                    let first = if plan.phase == FsmPhase::Wandering {
                        let qc = wb.qc.unwrap();
                        reads.push((ReadPort::Qc, qc));
                        *dp.bram.peek(qc)
                    } else {
                        qb_data.unwrap()
                    };
                    writes.push((WritePort::W0, dest0, xor_blocks(&first, &rand)));
                    writes.push((
                        WritePort::W1,
                        dest1,
                        xor_blocks(&qa_data.unwrap(), &rot_w(&rand)),
                    ));
                }
                WritebackKind::Collision { dest } => {
                    // w0 disabled; the first XOR output feeds the second.
                    let qc = wb.qc.unwrap();
                    reads.push((ReadPort::Qc, qc));
                    let chained = xor_blocks(&xor_blocks(dp.bram.peek(qc), &rand), &rot_w(&rand));
                    writes.push((WritePort::W1, dest, chained));
                }
            }
        }

        commit(&mut dp.bram, &reads, &writes, cycle)?;
        trace.push(CycleRecord {
            cycle,
            ctx: 0,
            phase: plan.phase,
            reads,
            writes: writes.iter().map(|&(p, a, _)| (p, a)).collect(),
        });
        cycle += 1;
    }

    let digest = ctx.duplex.squeeze_digest();
    debug_assert_eq!(ctx.duplex.rounds_applied(), ITERATIVE_CYCLES);
    Ok(IterativeRun {
        digest,
        cycles: cycle,
        trace,
    })
}

/// Result of one pipelined-simulator run.
pub struct PipelinedRun {
    pub digests: Vec<Digest256>,
    pub latency_cycles: u64,
    pub steady_interval_cycles: u64,
    pub trace: SimTrace,
}

/// Runs the pipelined datapath: eight contexts in a round-robin over the
/// eight round-internal stages. Context `i` advances on cycles congruent to
/// `i` mod 8; its XOR-operand fetches and matrix writes land eight cycles
/// after the round issue, on its next active cycle.
pub fn sim_pipelined(pwds: &[[u8; PWD_BYTES]]) -> Result<PipelinedRun, SimError> {
    if pwds.len() != CONCURRENT_HASHES {
        return Err(SimError::WrongBatchSize(pwds.len()));
    }
    let mut dp = Datapath::new(CONCURRENT_HASHES);
    let mut ctxs: Vec<HashContext> = pwds
        .iter()
        .enumerate()
        .map(|(i, pwd)| HashContext::new(pwd, i * MATRIX_CELLS))
        .collect();
    let mut trace = SimTrace::new();

    // Last context starts at cycle 7 and its final round drains the
    // eight-stage pipe, so the run spans start skew plus full latency.
    let total_cycles = PIPELINE_LATENCY + CONCURRENT_HASHES as u64 - 1;
    for cycle in 0..total_cycles {
        let i = (cycle % CONCURRENT_HASHES as u64) as usize;
        step_pipelined(&mut ctxs[i], &mut dp, cycle, i, &mut trace)?;
    }
    debug_assert!(ctxs.iter().all(|c| c.idle()));

    let digests = ctxs.iter().map(|c| c.digest.unwrap()).collect();
    Ok(PipelinedRun {
        digests,
        latency_cycles: PIPELINE_LATENCY,
        steady_interval_cycles: PIPELINE_LATENCY,
        trace,
    })
}

fn step_pipelined(
    ctx: &mut HashContext,
    dp: &mut Datapath,
    cycle: u64,
    ctx_index: usize,
    trace: &mut SimTrace,
) -> Result<(), SimError> {
    let mut reads: Vec<(ReadPort, usize)> = Vec::with_capacity(4);
    let mut writes: Vec<(WritePort, usize, Block768)> = Vec::with_capacity(2);

    // Complete the round issued on the previous active cycle: fetch the XOR
    // operands on qc/qd and produce the writes.
    if let Some(pending) = ctx.pending.take() {
        let qc_data = pending.qc.map(|a| {
            reads.push((ReadPort::Qc, a));
            *dp.bram.peek(a)
        });
        let qd_data = pending.qd.map(|a| {
            reads.push((ReadPort::Qd, a));
            *dp.bram.peek(a)
        });
        match pending.kind {
            PendingKind::Squeeze { value, dest } => {
                writes.push((WritePort::W0, dest, xor_blocks(&value, &qc_data.unwrap())));
            }
            PendingKind::Single { rand, dest } => {
                writes.push((WritePort::W0, dest, xor_blocks(&qc_data.unwrap(), &rand)));
            }
            PendingKind::Dual { rand, dest0, dest1 } => {
                writes.push((WritePort::W0, dest0, xor_blocks(&qc_data.unwrap(), &rand)));
                writes.push((
                    WritePort::W1,
                    dest1,
                    xor_blocks(&qd_data.unwrap(), &rot_w(&rand)),
                ));
            }
            PendingKind::Collision { rand, dest } => {
                let chained = xor_blocks(&xor_blocks(&qc_data.unwrap(), &rand), &rot_w(&rand));
                writes.push((WritePort::W1, dest, chained));
            }
        }
    }

    // Issue the next round. qa/qb reads that hit one of this cycle's write
    // addresses take the write data (write-first forwarding).
    let forwarded = |writes: &[(WritePort, usize, Block768)], bram: &BramModel, addr: usize| {
        writes
            .iter()
            .find(|&&(_, a, _)| a == addr)
            .map(|&(_, _, v)| v)
            .unwrap_or(*bram.peek(addr))
    };
    let phase = if let Some(plan) = plan_step(ctx, dp) {
        let qa_data = plan.qa.map(|a| {
            reads.push((ReadPort::Qa, a));
            forwarded(&writes, &dp.bram, a)
        });
        let qb_data = plan.qb.map(|a| {
            reads.push((ReadPort::Qb, a));
            forwarded(&writes, &dp.bram, a)
        });
        let input = if plan.direct_input {
            ctx.pwd_block
        } else {
            wordwise_add(&qa_data.unwrap(), &qb_data.unwrap())
        };
        let pre_round = ctx.duplex.bitrate();
        let rand = ctx.duplex.duplex(&input, REDUCED_ROUNDS);
        if let Some(wb) = plan.writeback {
            let kind = match wb.kind {
                WritebackKind::Squeeze { dest } => PendingKind::Squeeze {
                    value: pre_round,
                    dest,
                },
                WritebackKind::Single { dest } => PendingKind::Single { rand, dest },
                WritebackKind::Dual { dest0, dest1 } => PendingKind::Dual { rand, dest0, dest1 },
                WritebackKind::Collision { dest } => PendingKind::Collision { rand, dest },
            };
            ctx.pending = Some(Pending {
                qc: wb.qc,
                qd: wb.qd,
                kind,
            });
        }
        if ctx.done() {
            ctx.digest = Some(ctx.duplex.squeeze_digest());
        }
        plan.phase
    } else {
        FsmPhase::Done
    };

    commit(&mut dp.bram, &reads, &writes, cycle)?;
    trace.push(CycleRecord {
        cycle,
        ctx: ctx_index,
        phase,
        reads,
        writes: writes.iter().map(|&(p, a, _)| (p, a)).collect(),
    });
    Ok(())
}

/// Pushes one cycle of requests through the RAM port model; any rejection is
/// a scheduling bug in the datapath, surfaced as a simulation error.
fn commit(
    bram: &mut BramModel,
    reads: &[(ReadPort, usize)],
    writes: &[(WritePort, usize, Block768)],
    cycle: u64,
) -> Result<(), SimError> {
    let read_addrs: Vec<usize> = reads.iter().map(|&(_, a)| a).collect();
    let write_reqs: Vec<(usize, Block768)> = writes.iter().map(|&(_, a, v)| (a, v)).collect();
    bram.bram_cycle(&read_addrs, &write_reqs)
        .map(|_| ())
        .map_err(|source| SimError::Schedule { cycle, source })
}

/// Hardware architecture selector for the throughput model.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Arch {
    Iterative,
    Pipelined,
}

#[derive(Error, Debug, PartialEq)]
pub enum ThroughputError {
    #[error("frequency must be positive, got {0} MHz")]
    NonPositiveFrequency(f64),
}

/// Steady-state throughput in MHash/s at the given core clock frequency:
/// `f / 68` iteratively, `f * 8 / 544` pipelined (the same value; the
/// pipelined gain comes from the higher achievable frequency).
pub fn throughput_mhash(freq_mhz: f64, arch: Arch) -> Result<f64, ThroughputError> {
    if !(freq_mhz > 0.0) {
        return Err(ThroughputError::NonPositiveFrequency(freq_mhz));
    }
    Ok(match arch {
        Arch::Iterative => freq_mhz / ITERATIVE_CYCLES as f64,
        Arch::Pipelined => {
            freq_mhz * CONCURRENT_HASHES as f64 / PIPELINE_LATENCY as f64
        }
    })
}
