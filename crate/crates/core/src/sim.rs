//! A row of storage nodes holding one member, with failures, repair and lookups.

use crate::blocks::BlockConcatSpec;
use crate::construction::{Construction, Scheme};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::repair::{ErasedView, Repaired};

/// Node `i` stores symbol `i` of the member's one-line listing.
pub struct NodeArray<'a> {
    scheme: &'a Scheme,
    stored: Permutation,
    cells: Vec<Option<usize>>,
    reads: usize,
}

impl<'a> NodeArray<'a> {
    /// Stores `member`, which must belong to the scheme's set.
    pub fn store(scheme: &'a Scheme, member: Permutation) -> Result<Self> {
        if !scheme.contains(&member) {
            return Err(Error::NotAMember);
        }
        let cells = member.symbols().iter().copied().map(Some).collect();
        Ok(NodeArray {
            scheme,
            stored: member,
            cells,
            reads: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn stored(&self) -> &Permutation {
        &self.stored
    }

    pub fn cells(&self) -> &[Option<usize>] {
        &self.cells
    }

    pub fn erase(&mut self, positions: &[usize]) -> Result<()> {
        let n = self.n();
        if let Some(&pos) = positions.iter().find(|&&p| p >= n) {
            return Err(Error::IndexOutOfRange { pos, n });
        }
        for &p in positions {
            self.cells[p] = None;
        }
        Ok(())
    }

    /// Reads node `i`; `None` when it has failed.
    pub fn node_read(&mut self, i: usize) -> Result<Option<usize>> {
        let cell = *self.cells.get(i).ok_or(Error::IndexOutOfRange {
            pos: i,
            n: self.cells.len(),
        })?;
        self.reads += 1;
        Ok(cell)
    }

    /// Node reads since the last repair or query started.
    pub fn reads(&self) -> usize {
        self.reads
    }

    /// Rebuilds node `i` and writes the symbol back.
    pub fn repair(&mut self, i: usize) -> Result<Repaired> {
        self.reads = 0;
        let view = ErasedView::from_cells(self.cells.clone())?;
        let repaired = self.scheme.repairer().repair_at(&view, i)?;
        self.reads = repaired.accesses();
        self.cells[i] = Some(repaired.symbol);
        Ok(repaired)
    }

    /// Repairs every failed node in ascending order, stopping at the first error.
    pub fn repair_all(&mut self) -> Result<Vec<Repaired>> {
        let erased: Vec<usize> = (0..self.n()).filter(|&i| self.cells[i].is_none()).collect();
        erased.into_iter().map(|i| self.repair(i)).collect()
    }

    /// The symbol at node `i`, in one read.
    pub fn q1(&mut self, i: usize) -> Result<(usize, usize)> {
        self.reads = 0;
        let s = self.node_read(i)?.ok_or(Error::CellErased(i))?;
        Ok((s, self.reads))
    }

    /// The node holding symbol `i`, by following the cycle through `i`.
    /// Returns `(position, reads)`.
    pub fn q2(&mut self, i: usize) -> Result<(usize, usize)> {
        if i >= self.n() {
            return Err(Error::OutOfRange {
                symbol: i,
                n: self.n(),
            });
        }
        self.reads = 0;
        let mut x = i;
        loop {
            let y = self.node_read(x)?.ok_or(Error::CellErased(x))?;
            if y == i {
                return Ok((x, self.reads));
            }
            if self.reads > self.n() {
                return Err(Error::NotAMember);
            }
            x = y;
        }
    }

    /// The node holding symbol `i` by probing one node per block, for block concatenations.
    pub fn q2_block_probe(&mut self, i: usize) -> Result<(usize, usize)> {
        let spec: BlockConcatSpec = match self.scheme.construction() {
            Some(Construction::BlockConcat(s)) => *s,
            _ => return Err(Error::param("block probing needs a block concatenation")),
        };
        self.reads = 0;
        let (pos, _) =
            spec.q2_block_probe(i, |p| self.node_read(p)?.ok_or(Error::CellErased(p)))?;
        Ok((pos, self.reads))
    }
}
