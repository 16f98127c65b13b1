//! Concatenations of short permutations.
//!
//! * Block concatenation: positions split into `n/h` blocks of length `h`; each
//!   block holds a permutation of one value block `{vh, ..., vh+h-1}`, every
//!   value block used once. Locality `h-1`.
//! * Range restriction: the first `h` positions hold a permutation of one value
//!   block, the remaining positions any permutation of the other values.
//!   Locality `n-h-1`.

use num_bigint::BigUint;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::perm::{arrangements, factorial, Permutation};
use crate::repair::{single_erasure, ErasedView, LocalRepair, Probe, Repaired};
use crate::set::{ConstructionId, PermSet};

fn factorial_big(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockConcatSpec {
    n: usize,
    h: usize,
}

impl BlockConcatSpec {
    pub fn new(n: usize, h: usize) -> Result<Self> {
        if h == 0 || h > n || !n.is_multiple_of(h) {
            return Err(Error::param(format!(
                "block length h={h} must divide n={n}"
            )));
        }
        Ok(BlockConcatSpec { n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn blocks(&self) -> usize {
        self.n / self.h
    }

    /// `(h!)^(n/h) * (n/h)!`
    pub fn count(&self) -> BigUint {
        factorial_big(self.h).pow(self.blocks() as u32) * factorial_big(self.blocks())
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.len() == self.n
            && p.symbols()
                .chunks(self.h)
                .all(|block| block.iter().all(|&s| s / self.h == block[0] / self.h))
    }

    /// Members in order: value-block assignment first, then block contents, both lexicographic.
    pub fn iter(&self) -> BlockConcatIter {
        BlockConcatIter {
            h: self.h,
            outer: arrangements(&(0..self.blocks()).collect::<Vec<_>>()),
            inner: arrangements(&(0..self.h).collect::<Vec<_>>()),
            outer_idx: 0,
            digits: vec![0; self.blocks()],
        }
    }

    pub fn generate(&self, caps: &Caps) -> Result<PermSet> {
        let count = self.count();
        let as_u128 = u128::try_from(&count).unwrap_or(u128::MAX);
        caps.check_materialize("block concatenation", as_u128)?;
        PermSet::new(
            self.n,
            self.iter().collect(),
            ConstructionId::BlockConcat { h: self.h },
            Some(self.h - 1),
        )
    }

    /// Repairs every erased position, provided no block lost two symbols.
    pub fn repair_all(&self, view: &ErasedView) -> Result<Vec<Repaired>> {
        view.erased()
            .into_iter()
            .map(|j| self.repair_at(view, j))
            .collect()
    }

    /// Answers "where is `value`" by probing one cell per block, then scanning
    /// the block whose value range contains it. Returns `(position, queries)`.
    pub fn q2_block_probe(
        &self,
        value: usize,
        mut read: impl FnMut(usize) -> Result<usize>,
    ) -> Result<(usize, usize)> {
        if value >= self.n {
            return Err(Error::OutOfRange {
                symbol: value,
                n: self.n,
            });
        }
        let mut queries = 0;
        for b in 0..self.blocks() {
            let start = b * self.h;
            let first = read(start)?;
            queries += 1;
            if first / self.h != value / self.h {
                continue;
            }
            if first == value {
                return Ok((start, queries));
            }
            for pos in start + 1..start + self.h {
                queries += 1;
                if read(pos)? == value {
                    return Ok((pos, queries));
                }
            }
        }
        Err(Error::NotAMember)
    }
}

impl LocalRepair for BlockConcatSpec {
    fn locality(&self) -> usize {
        self.h - 1
    }

    fn repair_at(&self, view: &ErasedView, pos: usize) -> Result<Repaired> {
        if view.n() != self.n || pos >= self.n {
            return Err(Error::IndexOutOfRange { pos, n: view.n() });
        }
        if !view.is_erased(pos) {
            return Err(Error::NotErased(pos));
        }
        let start = pos / self.h * self.h;
        let block = start..start + self.h;
        if let Some(other) = block.clone().find(|&j| j != pos && view.is_erased(j)) {
            return Err(Error::SameBlockDoubleErasure(
                pos.min(other),
                pos.max(other),
            ));
        }
        if self.h == 1 {
            return Err(Error::param("blocks of length 1 have no surviving symbols"));
        }
        let mut probe = Probe::new(view);
        let survivors = block
            .filter(|&j| j != pos)
            .map(|j| probe.read(j))
            .collect::<Result<Vec<_>>>()?;
        let base = survivors[0] / self.h * self.h;
        let symbol = (base..base + self.h)
            .find(|v| !survivors.contains(v))
            .ok_or(Error::NotAMember)?;
        Ok(probe.finish(pos, symbol))
    }
}

pub struct BlockConcatIter {
    h: usize,
    outer: Vec<Vec<usize>>,
    inner: Vec<Vec<usize>>,
    outer_idx: usize,
    digits: Vec<usize>,
}

impl Iterator for BlockConcatIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let assignment = self.outer.get(self.outer_idx)?;
        let mut symbols = Vec::with_capacity(self.h * assignment.len());
        for (&v, &d) in assignment.iter().zip(&self.digits) {
            symbols.extend(self.inner[d].iter().map(|&s| v * self.h + s));
        }
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.outer_idx += 1;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.inner.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(Permutation::from_vec_unchecked(symbols))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeRestrictedSpec {
    n: usize,
    h: usize,
}

impl RangeRestrictedSpec {
    /// Requires `h | n` and `2 <= h <= n/2`; with `h = 1` the gap in the suffix is not identifiable.
    pub fn new(n: usize, h: usize) -> Result<Self> {
        if h < 2 || !n.is_multiple_of(h) || 2 * h > n {
            return Err(Error::param(format!(
                "range restriction needs h | n and 2 <= h <= n/2, got n={n} h={h}"
            )));
        }
        Ok(RangeRestrictedSpec { n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// `n * (h-1)! * (n-h)!`
    pub fn count(&self) -> BigUint {
        BigUint::from(self.n) * factorial_big(self.h - 1) * factorial_big(self.n - self.h)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.len() == self.n
            && p.symbols()[..self.h]
                .iter()
                .all(|&s| s / self.h == p.get(0) / self.h)
    }

    pub fn generate(&self, caps: &Caps) -> Result<PermSet> {
        let count = self.n as u128 * factorial(self.h - 1) * factorial(self.n - self.h);
        caps.check_materialize("range-restricted set", count)?;
        let mut members = Vec::with_capacity(count as usize);
        for i in 0..self.n / self.h {
            let block: Vec<usize> = (i * self.h..(i + 1) * self.h).collect();
            let rest: Vec<usize> = (0..self.n).filter(|v| v / self.h != i).collect();
            let suffixes = arrangements(&rest);
            for prefix in arrangements(&block) {
                for suffix in &suffixes {
                    let mut s = prefix.clone();
                    s.extend_from_slice(suffix);
                    members.push(Permutation::from_vec_unchecked(s));
                }
            }
        }
        PermSet::new(
            self.n,
            members,
            ConstructionId::RangeRestricted { h: self.h },
            Some(self.n - self.h - 1),
        )
    }
}

impl LocalRepair for RangeRestrictedSpec {
    fn locality(&self) -> usize {
        self.n - self.h - 1
    }

    fn repair_at(&self, view: &ErasedView, pos: usize) -> Result<Repaired> {
        if view.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: view.n(),
            });
        }
        single_erasure(view, pos)?;
        let h = self.h;
        let mut probe = Probe::new(view);
        let symbol = if pos < h {
            let survivors = (0..h)
                .filter(|&j| j != pos)
                .map(|j| probe.read(j))
                .collect::<Result<Vec<_>>>()?;
            let base = survivors[0] / h * h;
            (base..base + h)
                .find(|v| !survivors.contains(v))
                .ok_or(Error::NotAMember)?
        } else {
            let mut seen = vec![false; self.n];
            for j in (h..self.n).filter(|&j| j != pos) {
                seen[probe.read(j)?] = true;
            }
            let mut gaps = (0..self.n / h).filter(|&b| (b * h..(b + 1) * h).all(|v| !seen[v]));
            let gap = gaps.next().ok_or(Error::NotAMember)?;
            if gaps.next().is_some() {
                return Err(Error::Ambiguous(pos));
            }
            (0..self.n)
                .find(|&v| !seen[v] && v / h != gap)
                .ok_or(Error::NotAMember)?
        };
        Ok(probe.finish(pos, symbol))
    }
}
