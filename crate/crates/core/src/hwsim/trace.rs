//! Per-cycle trace of FSM state and RAM port activity, plus the schedule
//! auditor that re-checks the port discipline offline.

use super::bram::{ReadPort, WritePort, MAX_READS, MAX_WRITES};
use std::fmt;
use std::io::{self, Write};

/// Control state of a hash context, including loop counters.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FsmPhase {
    Bootstrap,
    Setup0,
    Setup1,
    Setup2,
    Wandering,
    WrapAbsorb,
    Done,
}

impl fmt::Display for FsmPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FsmPhase::Bootstrap => "Bootstrap",
            FsmPhase::Setup0 => "Setup0",
            FsmPhase::Setup1 => "Setup1",
            FsmPhase::Setup2 => "Setup2",
            FsmPhase::Wandering => "Wandering",
            FsmPhase::WrapAbsorb => "WrapAbsorb",
            FsmPhase::Done => "Done",
        };
        f.write_str(name)
    }
}

/// One core clock cycle: which context was active, its FSM phase, and every
/// port request issued.
#[derive(Clone, Debug)]
pub struct CycleRecord {
    pub cycle: u64,
    pub ctx: usize,
    pub phase: FsmPhase,
    pub reads: Vec<(ReadPort, usize)>,
    pub writes: Vec<(WritePort, usize)>,
}

/// Append-only record of a simulator run, one entry per core clock cycle.
#[derive(Clone, Debug, Default)]
pub struct SimTrace {
    records: Vec<CycleRecord>,
}

impl SimTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: CycleRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[CycleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Line-oriented export, one cycle per line:
    /// `cycle=<n> ctx=<i> fsm=<state> qa=<addr|-> ... w1=<addr|->`.
    pub fn export<W: Write>(&self, mut out: W) -> io::Result<()> {
        for rec in &self.records {
            let port = |p: ReadPort| {
                rec.reads
                    .iter()
                    .find(|(q, _)| *q == p)
                    .map(|(_, a)| a.to_string())
                    .unwrap_or_else(|| "-".to_string())
            };
            let wport = |p: WritePort| {
                rec.writes
                    .iter()
                    .find(|(q, _)| *q == p)
                    .map(|(_, a)| a.to_string())
                    .unwrap_or_else(|| "-".to_string())
            };
            writeln!(
                out,
                "cycle={} ctx={} fsm={} qa={} qb={} qc={} qd={} w0={} w1={}",
                rec.cycle,
                rec.ctx,
                rec.phase,
                port(ReadPort::Qa),
                port(ReadPort::Qb),
                port(ReadPort::Qc),
                port(ReadPort::Qd),
                wport(WritePort::W0),
                wport(WritePort::W1),
            )?;
        }
        Ok(())
    }
}

/// A port-discipline violation found in a trace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    TooManyReads { cycle: u64, count: usize },
    TooManyWrites { cycle: u64, count: usize },
    DuplicateWrite { cycle: u64, addr: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooManyReads { cycle, count } => {
                write!(f, "cycle {cycle}: {count} reads (max {MAX_READS})")
            }
            Violation::TooManyWrites { cycle, count } => {
                write!(f, "cycle {cycle}: {count} writes (max {MAX_WRITES})")
            }
            Violation::DuplicateWrite { cycle, addr } => {
                write!(f, "cycle {cycle}: duplicate write to address {addr}")
            }
        }
    }
}

/// Re-checks every cycle of a trace against the port budget: at most four
/// reads, at most two writes, no two writes to the same address. Returns an
/// empty report for any schedule the simulators produce.
pub fn schedule_check(trace: &SimTrace) -> Vec<Violation> {
    let mut violations = Vec::new();
    for rec in trace.records() {
        if rec.reads.len() > MAX_READS {
            violations.push(Violation::TooManyReads {
                cycle: rec.cycle,
                count: rec.reads.len(),
            });
        }
        if rec.writes.len() > MAX_WRITES {
            violations.push(Violation::TooManyWrites {
                cycle: rec.cycle,
                count: rec.writes.len(),
            });
        }
        for (i, &(_, addr)) in rec.writes.iter().enumerate() {
            if rec.writes[..i].iter().any(|&(_, other)| other == addr) {
                violations.push(Violation::DuplicateWrite {
                    cycle: rec.cycle,
                    addr,
                });
            }
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_five_reads_flagged() {
        let mut trace = SimTrace::new();
        trace.push(CycleRecord {
            cycle: 0,
            ctx: 0,
            phase: FsmPhase::Wandering,
            reads: vec![
                (ReadPort::Qa, 0),
                (ReadPort::Qb, 1),
                (ReadPort::Qc, 2),
                (ReadPort::Qd, 3),
                (ReadPort::Qa, 4),
            ],
            writes: vec![],
        });
        let report = schedule_check(&trace);
        assert_eq!(report.len(), 1);
        assert!(matches!(report[0], Violation::TooManyReads { count: 5, .. }));
    }

    #[test]
    fn synthetic_duplicate_write_flagged() {
        let mut trace = SimTrace::new();
        trace.push(CycleRecord {
            cycle: 3,
            ctx: 0,
            phase: FsmPhase::Setup2,
            reads: vec![],
            writes: vec![(WritePort::W0, 9), (WritePort::W1, 9)],
        });
        assert_eq!(
            schedule_check(&trace),
            vec![Violation::DuplicateWrite { cycle: 3, addr: 9 }]
        );
    }

    #[test]
    fn export_format() {
        let mut trace = SimTrace::new();
        trace.push(CycleRecord {
            cycle: 7,
            ctx: 2,
            phase: FsmPhase::Setup1,
            reads: vec![(ReadPort::Qa, 1), (ReadPort::Qb, 16)],
            writes: vec![(WritePort::W0, 6)],
        });
        let mut buf = Vec::new();
        trace.export(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "cycle=7 ctx=2 fsm=Setup1 qa=1 qb=16 qc=- qd=- w0=6 w1=-\n"
        );
    }
}
