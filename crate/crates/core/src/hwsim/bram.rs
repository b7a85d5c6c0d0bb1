//! Block-RAM port model.
//!
//! The physical design uses a standard two-port RAM at double clock
//! (multipumping) plus a coherent replica, which together behave as four
//! read ports and two write ports per core clock cycle. The model keeps only
//! that effective port budget; reads in a cycle always return pre-write
//! contents and writes commit at the end of the cycle.

use crate::sponge::Block768;
use thiserror::Error;

/// Read ports. `Qa`/`Qb` feed the duplex input adder, `Qc`/`Qd` feed the two
/// output XOR blocks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReadPort {
    Qa,
    Qb,
    Qc,
    Qd,
}

/// Write ports for the two output XOR blocks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WritePort {
    W0,
    W1,
}

/// Maximum reads served per core clock cycle.
pub const MAX_READS: usize = 4;

/// Maximum writes served per core clock cycle.
pub const MAX_WRITES: usize = 2;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum BramError {
    #[error("port overflow: {reads} reads / {writes} writes requested in one cycle")]
    PortOverflow { reads: usize, writes: usize },
    #[error("write collision on address {addr}")]
    WriteCollision { addr: usize },
    #[error("address {addr} out of range (capacity {capacity})")]
    AddressOutOfRange { addr: usize, capacity: usize },
}

/// Addressable array of 768-bit cells: one or more 16-cell matrix regions
/// plus two shared constant vectors (all-zero and the padded parameter
/// block).
#[derive(Clone, Debug)]
pub struct BramModel {
    cells: Vec<Block768>,
}

impl BramModel {
    pub fn new(capacity: usize) -> Self {
        Self {
            cells: vec![Block768::default(); capacity],
        }
    }

    pub fn capacity(&self) -> usize {
        self.cells.len()
    }

    /// Direct read outside the port model (initialization and inspection).
    pub fn peek(&self, addr: usize) -> &Block768 {
        &self.cells[addr]
    }

    /// Direct write outside the port model (loading constants).
    pub fn poke(&mut self, addr: usize, value: Block768) {
        self.cells[addr] = value;
    }

    /// One core clock cycle of port activity: up to four reads and two
    /// writes. Reads return the pre-write contents; writes commit at cycle
    /// end and must target distinct addresses.
    pub fn bram_cycle(
        &mut self,
        reads: &[usize],
        writes: &[(usize, Block768)],
    ) -> Result<Vec<Block768>, BramError> {
        if reads.len() > MAX_READS || writes.len() > MAX_WRITES {
            return Err(BramError::PortOverflow {
                reads: reads.len(),
                writes: writes.len(),
            });
        }
        for &addr in reads.iter().chain(writes.iter().map(|(a, _)| a)) {
            if addr >= self.cells.len() {
                return Err(BramError::AddressOutOfRange {
                    addr,
                    capacity: self.cells.len(),
                });
            }
        }
        for (i, &(addr, _)) in writes.iter().enumerate() {
            if writes[..i].iter().any(|&(other, _)| other == addr) {
                return Err(BramError::WriteCollision { addr });
            }
        }
        let out = reads.iter().map(|&a| self.cells[a]).collect();
        for &(addr, value) in writes {
            self.cells[addr] = value;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filled(v: u64) -> Block768 {
        Block768([v; 12])
    }

    #[test]
    fn full_port_budget_accepted() {
        let mut bram = BramModel::new(18);
        let out = bram
            .bram_cycle(&[0, 1, 2, 3], &[(4, filled(4)), (5, filled(5))])
            .unwrap();
        assert_eq!(out.len(), 4);
        assert_eq!(bram.peek(4), &filled(4));
    }

    #[test]
    fn five_reads_overflow() {
        let mut bram = BramModel::new(18);
        assert_eq!(
            bram.bram_cycle(&[0, 1, 2, 3, 4], &[]),
            Err(BramError::PortOverflow {
                reads: 5,
                writes: 0
            })
        );
    }

    #[test]
    fn three_writes_overflow() {
        let mut bram = BramModel::new(18);
        let w = filled(1);
        assert!(matches!(
            bram.bram_cycle(&[], &[(0, w), (1, w), (2, w)]),
            Err(BramError::PortOverflow { .. })
        ));
    }

    #[test]
    fn read_before_write_same_cycle() {
        let mut bram = BramModel::new(18);
        bram.poke(3, filled(0xAA));
        let out = bram.bram_cycle(&[3], &[(3, filled(0xBB))]).unwrap();
        assert_eq!(out[0], filled(0xAA));
        assert_eq!(bram.peek(3), &filled(0xBB));
    }

    #[test]
    fn duplicate_write_address_rejected() {
        let mut bram = BramModel::new(18);
        assert_eq!(
            bram.bram_cycle(&[], &[(7, filled(1)), (7, filled(2))]),
            Err(BramError::WriteCollision { addr: 7 })
        );
    }

    #[test]
    fn out_of_range_rejected() {
        let mut bram = BramModel::new(18);
        assert!(matches!(
            bram.bram_cycle(&[18], &[]),
            Err(BramError::AddressOutOfRange { .. })
        ));
    }
}
