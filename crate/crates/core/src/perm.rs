//! Permutations in one-line form over the symbols `0..n`.
//!
//! A stored permutation is the listing `(pi^-1(0), ..., pi^-1(n-1))`: reading
//! cell `i` answers "which element sits at rank `i`" in one access, and the
//! forward map is recovered by following cycles.

use std::fmt;

use crate::caps::Caps;
use crate::error::{Error, Result};

/// A validated one-line permutation of `0..n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    symbols: Vec<usize>,
}

impl Permutation {
    pub fn new(symbols: Vec<usize>) -> Result<Self> {
        let n = symbols.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut seen = vec![false; n];
        for &s in &symbols {
            if s >= n {
                return Err(Error::OutOfRange { symbol: s, n });
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::DuplicateSymbol(s));
            }
        }
        Ok(Permutation { symbols })
    }

    /// Parses a 1-based listing such as the ones printed in the literature.
    pub fn from_one_based(symbols: &[usize]) -> Result<Self> {
        let zero = symbols
            .iter()
            .map(|&s| {
                s.checked_sub(1).ok_or(Error::OutOfRange {
                    symbol: 0,
                    n: symbols.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero)
    }

    pub(crate) fn from_vec_unchecked(symbols: Vec<usize>) -> Self {
        debug_assert!(Self::new(symbols.clone()).is_ok());
        Permutation { symbols }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            symbols: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<usize> {
        self.symbols
    }

    pub fn get(&self, i: usize) -> usize {
        self.symbols[i]
    }

    /// The permutation `q` with `q[p[i]] = i`.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &s) in self.symbols.iter().enumerate() {
            inv[s] = i;
        }
        Permutation { symbols: inv }
    }

    /// Positions visited by iterating `j -> p[j]` from `i` until `i` recurs.
    pub fn cycle_containing(&self, i: usize) -> Result<Vec<usize>> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                pos: i,
                n: self.len(),
            });
        }
        let mut cycle = vec![i];
        let mut j = self.symbols[i];
        while j != i {
            cycle.push(j);
            j = self.symbols[j];
        }
        Ok(cycle)
    }

    /// Disjoint cycles, each starting at its smallest position.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for i in 0..self.len() {
            if seen[i] {
                continue;
            }
            let c = self.cycle_containing(i).expect("in range");
            for &j in &c {
                seen[j] = true;
            }
            out.push(c);
        }
        out
    }

    pub fn longest_cycle(&self) -> usize {
        self.cycles().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when the permutation is a product of an even number of transpositions.
    pub fn is_even(&self) -> bool {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        transpositions.is_multiple_of(2)
    }

    /// Space-separated 1-based rendering.
    pub fn to_one_based_string(&self) -> String {
        join(self.symbols.iter().map(|s| s + 1))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(self.symbols.iter().copied()))
    }
}

impl AsRef<[usize]> for Permutation {
    fn as_ref(&self) -> &[usize] {
        &self.symbols
    }
}

pub(crate) fn join(it: impl Iterator<Item = usize>) -> String {
    it.map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

/// Advances `v` to the next permutation in lexicographic order.
/// Returns `false` (leaving `v` sorted descending) when `v` was the last one.
pub fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographic stream over all of S_n.
#[derive(Debug, Clone)]
pub struct SnIter {
    next: Option<Vec<usize>>,
}

impl SnIter {
    fn new(n: usize) -> Self {
        SnIter {
            next: Some((0..n).collect()),
        }
    }
}

impl Iterator for SnIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_lexicographic(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { symbols: cur })
    }
}

/// All `n!` permutations of `0..n` in lexicographic order.
pub fn enumerate_sn(n: usize, caps: &Caps) -> Result<SnIter> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > caps.sn {
        return Err(Error::cap(format!("S_{n} enumeration"), caps.sn as u128));
    }
    Ok(SnIter::new(n))
}

/// Every permutation of the given values, lexicographic in the order supplied.
pub(crate) fn arrangements(values: &[usize]) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&i| values[i]).collect());
        if !next_lexicographic(&mut idx) {
            break;
        }
    }
    out
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}
