//! Erasure views and access-counted repair.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A stored permutation with some positions lost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasedView {
    cells: Vec<Option<usize>>,
}

impl ErasedView {
    /// Erases `positions` from `member`.
    pub fn new(member: &Permutation, positions: &[usize]) -> Result<Self> {
        let mut cells: Vec<Option<usize>> = member.symbols().iter().copied().map(Some).collect();
        for &p in positions {
            if p >= cells.len() {
                return Err(Error::IndexOutOfRange {
                    pos: p,
                    n: cells.len(),
                });
            }
            cells[p] = None;
        }
        Ok(ErasedView { cells })
    }

    /// Builds a view from raw cells, checking that known symbols are distinct and in range.
    pub fn from_cells(cells: Vec<Option<usize>>) -> Result<Self> {
        let n = cells.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut seen = vec![false; n];
        for &s in cells.iter().flatten() {
            if s >= n {
                return Err(Error::OutOfRange { symbol: s, n });
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::DuplicateSymbol(s));
            }
        }
        Ok(ErasedView { cells })
    }

    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn is_erased(&self, pos: usize) -> bool {
        self.cells[pos].is_none()
    }

    pub fn erased(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_erased(i)).collect()
    }

    pub fn cells(&self) -> &[Option<usize>] {
        &self.cells
    }

    /// Writes a recovered symbol back.
    pub fn fill(&mut self, pos: usize, symbol: usize) {
        self.cells[pos] = Some(symbol);
    }
}

/// Reads cells of an [`ErasedView`] and records every position touched.
///
/// Repair procedures only see stored symbols through a probe, so the reported
/// access set is exactly what the procedure read. Erasure status is metadata
/// and costs nothing.
#[derive(Debug)]
pub struct Probe<'a> {
    view: &'a ErasedView,
    accessed: BTreeSet<usize>,
}

impl<'a> Probe<'a> {
    pub fn new(view: &'a ErasedView) -> Self {
        Probe {
            view,
            accessed: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.view.n()
    }

    pub fn is_erased(&self, pos: usize) -> bool {
        self.view.is_erased(pos)
    }

    pub fn erased_count(&self) -> usize {
        self.view.cells.iter().filter(|c| c.is_none()).count()
    }

    /// Reads a cell that must be intact.
    pub fn read(&mut self, pos: usize) -> Result<usize> {
        self.accessed.insert(pos);
        self.view.cells[pos].ok_or(Error::HelperErased(pos))
    }

    pub fn finish(self, pos: usize, symbol: usize) -> Repaired {
        Repaired {
            position: pos,
            symbol,
            accessed: self.accessed.into_iter().collect(),
        }
    }
}

/// Outcome of repairing one erased position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repaired {
    pub position: usize,
    pub symbol: usize,
    /// Positions read, ascending.
    pub accessed: Vec<usize>,
}

impl Repaired {
    pub fn accesses(&self) -> usize {
        self.accessed.len()
    }
}

/// A procedure that rebuilds an erased symbol from a few surviving ones.
pub trait LocalRepair {
    /// The locality this procedure promises.
    fn locality(&self) -> usize;

    /// Recovers the symbol at erased position `pos`.
    fn repair_at(&self, view: &ErasedView, pos: usize) -> Result<Repaired>;

    /// Recovers the only erased position of `view`.
    fn repair(&self, view: &ErasedView) -> Result<Repaired> {
        match view.erased().as_slice() {
            [pos] => self.repair_at(view, *pos),
            [] => Err(Error::param("no erased position")),
            _ => Err(Error::MultipleErasure),
        }
    }
}

/// Common precondition for single-erasure procedures.
pub(crate) fn single_erasure(view: &ErasedView, pos: usize) -> Result<()> {
    if pos >= view.n() {
        return Err(Error::IndexOutOfRange { pos, n: view.n() });
    }
    if !view.is_erased(pos) {
        return Err(Error::NotErased(pos));
    }
    if view.cells.iter().filter(|c| c.is_none()).count() > 1 {
        return Err(Error::MultipleErasure);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn view_and_probe() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let v = ErasedView::new(&p, &[1]).unwrap();
        assert_eq!(v.erased(), vec![1]);
        let mut probe = Probe::new(&v);
        assert_eq!(probe.read(2).unwrap(), 1);
        assert_eq!(probe.read(1), Err(Error::HelperErased(1)));
        assert_eq!(probe.read(2).unwrap(), 1);
        let r = probe.finish(1, 0);
        assert_eq!(r.accessed, vec![1, 2]);
        assert!(ErasedView::from_cells(vec![Some(1), Some(1), None]).is_err());
        assert!(ErasedView::from_cells(vec![Some(3), None, None]).is_err());
        assert!(ErasedView::new(&p, &[5]).is_err());
    }

    #[test]
    fn single_erasure_checks() {
        let p = Permutation::identity(4);
        assert!(single_erasure(&ErasedView::new(&p, &[1]).unwrap(), 1).is_ok());
        assert_eq!(
            single_erasure(&ErasedView::new(&p, &[1]).unwrap(), 2),
            Err(Error::NotErased(2))
        );
        assert_eq!(
            single_erasure(&ErasedView::new(&p, &[1, 2]).unwrap(), 1),
            Err(Error::MultipleErasure)
        );
    }
}
