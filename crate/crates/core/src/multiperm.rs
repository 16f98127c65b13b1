//! Multi-permutations with two copies of each value, and the sets `A_t` built
//! by splitting every value `i` of a low-spread multi-permutation into the pair
//! `{2i, 2i+1}`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::locality::rate;
use crate::perm::Permutation;
use crate::repair::{single_erasure, ErasedView, LocalRepair, Probe, Repaired};
use crate::set::{ConstructionId, PermSet};

/// A sequence of length `2l` over `0..l` in which every value occurs twice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPermutation {
    symbols: Vec<usize>,
}

impl MultiPermutation {
    pub fn new(symbols: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        if symbols.len() % 2 == 1 {
            return Err(Error::param("multi-permutation length must be even"));
        }
        let ell = symbols.len() / 2;
        let mut seen = vec![0u8; ell];
        for &s in &symbols {
            if s >= ell {
                return Err(Error::OutOfRange { symbol: s, n: ell });
            }
            seen[s] += 1;
            if seen[s] > 2 {
                return Err(Error::DuplicateSymbol(s));
            }
        }
        Ok(MultiPermutation { symbols })
    }

    pub fn from_one_based(symbols: &[usize]) -> Result<Self> {
        let shifted = symbols
            .iter()
            .map(|&s| {
                s.checked_sub(1).ok_or(Error::OutOfRange {
                    symbol: 0,
                    n: symbols.len() / 2,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shifted)
    }

    /// Number of distinct values.
    pub fn ell(&self) -> usize {
        self.symbols.len() / 2
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    /// Positions of the first and second occurrence of every value.
    pub fn occurrences(&self) -> Vec<[usize; 2]> {
        let mut occ = vec![[usize::MAX; 2]; self.ell()];
        for (p, &v) in self.symbols.iter().enumerate() {
            let slot = if occ[v][0] == usize::MAX { 0 } else { 1 };
            occ[v][slot] = p;
        }
        occ
    }

    /// Largest distance between the two occurrences of a value.
    pub fn spread(&self) -> usize {
        self.occurrences()
            .iter()
            .map(|[a, b]| b - a)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for MultiPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::perm::join(self.symbols.iter().copied()))
    }
}

/// For every pair `i`, the order in which `2i` and `2i+1` replace the first
/// and second occurrence of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairAssignment {
    orders: Vec<[usize; 2]>,
}

impl PairAssignment {
    pub fn new(orders: Vec<[usize; 2]>) -> Result<Self> {
        for (i, o) in orders.iter().enumerate() {
            let mut sorted = *o;
            sorted.sort_unstable();
            if sorted != [2 * i, 2 * i + 1] {
                return Err(Error::param(format!(
                    "ordering {o:?} is not a pair ordering of {{{}, {}}}",
                    2 * i,
                    2 * i + 1
                )));
            }
        }
        Ok(PairAssignment { orders })
    }

    /// Bit `i` of `mask` swaps pair `i`.
    pub fn from_mask(ell: usize, mask: u64) -> Self {
        let orders = (0..ell)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    [2 * i + 1, 2 * i]
                } else {
                    [2 * i, 2 * i + 1]
                }
            })
            .collect();
        PairAssignment { orders }
    }

    pub fn ell(&self) -> usize {
        self.orders.len()
    }

    pub fn gamma(&self, i: usize) -> [usize; 2] {
        self.orders[i]
    }
}

/// Replaces the `r`-th occurrence of value `i` by `gamma_i(r)`.
pub fn assign(mp: &MultiPermutation, gammas: &PairAssignment) -> Result<Permutation> {
    if mp.ell() != gammas.ell() {
        return Err(Error::LengthMismatch {
            expected: mp.ell(),
            found: gammas.ell(),
        });
    }
    let mut seen = vec![0usize; mp.ell()];
    let out = mp
        .symbols
        .iter()
        .map(|&v| {
            let r = seen[v];
            seen[v] += 1;
            gammas.orders[v][r]
        })
        .collect();
    Ok(Permutation::from_vec_unchecked(out))
}

/// Inverse of [`assign`]: value `v` belongs to pair `v / 2`, appearance order gives the ordering.
pub fn extract(sigma: &Permutation) -> Result<(MultiPermutation, PairAssignment)> {
    if sigma.is_empty() || sigma.len() % 2 == 1 {
        return Err(Error::param("permutation length must be even and positive"));
    }
    let ell = sigma.len() / 2;
    let mut orders = vec![Vec::with_capacity(2); ell];
    let symbols = sigma
        .symbols()
        .iter()
        .map(|&v| {
            orders[v / 2].push(v);
            v / 2
        })
        .collect();
    let orders = orders.into_iter().map(|o| [o[0], o[1]]).collect();
    Ok((MultiPermutation { symbols }, PairAssignment { orders }))
}

/// All multi-permutations over `0..ell` with spread at most `t`, lexicographic.
pub fn enumerate_bt(ell: usize, t: usize, caps: &Caps) -> Result<Vec<MultiPermutation>> {
    if ell == 0 || t == 0 {
        return Err(Error::param("need ell >= 1 and t >= 1"));
    }
    if 2 * ell > caps.multiperm_len {
        return Err(Error::cap(
            format!("multi-permutation length {}", 2 * ell),
            caps.multiperm_len as u128,
        ));
    }
    let mut out = Vec::new();
    let mut opened = vec![None; ell];
    let mut closed = vec![false; ell];
    let mut cur = Vec::with_capacity(2 * ell);
    fill(ell, t, &mut opened, &mut closed, &mut cur, &mut out);
    Ok(out)
}

fn fill(
    ell: usize,
    t: usize,
    opened: &mut [Option<usize>],
    closed: &mut [bool],
    cur: &mut Vec<usize>,
    out: &mut Vec<MultiPermutation>,
) {
    let p = cur.len();
    if p == 2 * ell {
        out.push(MultiPermutation {
            symbols: cur.clone(),
        });
        return;
    }
    let due = (0..ell).find(|&v| !closed[v] && opened[v].is_some_and(|q| q + t == p));
    let open_count = (0..ell)
        .filter(|&v| !closed[v] && opened[v].is_some())
        .count();
    for v in 0..ell {
        if closed[v] || due.is_some_and(|d| d != v) {
            continue;
        }
        match opened[v] {
            Some(_) => {
                closed[v] = true;
                cur.push(v);
                fill(ell, t, opened, closed, cur, out);
                cur.pop();
                closed[v] = false;
            }
            None => {
                // every open value still needs a later position
                if open_count + 1 > 2 * ell - p - 1 {
                    continue;
                }
                opened[v] = Some(p);
                cur.push(v);
                fill(ell, t, opened, closed, cur, out);
                cur.pop();
                opened[v] = None;
            }
        }
    }
}

/// `|B_t|` for multi-permutations over `0..ell`, without enumerating them.
///
/// Counts perfect matchings of `0..2 ell` with every pair spanning at most
/// `t`, then multiplies by the `ell!` labelings.
pub fn count_bt(ell: usize, t: usize) -> Result<BigUint> {
    if ell == 0 || t == 0 {
        return Err(Error::param("need ell >= 1 and t >= 1"));
    }
    let t = t.min(2 * ell - 1);
    if t > 127 {
        return Err(Error::param(format!("spread {t} too large to count")));
    }
    // bit k: a position opened k+1 steps ago is still waiting for its partner
    let mut states: HashMap<u128, BigUint> = HashMap::from([(0, BigUint::one())]);
    let oldest = 1u128 << (t - 1);
    for p in 0..2 * ell {
        let remaining = 2 * ell - p;
        let mut next: HashMap<u128, BigUint> = HashMap::new();
        for (mask, ways) in states {
            let mut push = |m: u128| *next.entry(m).or_insert_with(BigUint::zero) += &ways;
            if mask & oldest != 0 {
                push((mask & !oldest) << 1);
                continue;
            }
            if (mask.count_ones() as usize) < remaining - 1 {
                push((mask << 1) | 1);
            }
            let mut bits = mask;
            while bits != 0 {
                let low = bits & bits.wrapping_neg();
                push((mask & !low) << 1);
                bits &= !low;
            }
        }
        states = next;
    }
    let matchings = states.remove(&0).unwrap_or_default();
    Ok(matchings * (1..=ell).map(BigUint::from).product::<BigUint>())
}

/// The set `A_t` of permutations of `0..n` obtained from `B_t` by pair assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtSpec {
    n: usize,
    t: usize,
}

impl AtSpec {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if n < 2 || n % 2 == 1 {
            return Err(Error::param(format!("n={n} must be even and at least 2")));
        }
        if t == 0 {
            return Err(Error::param("t must be at least 1"));
        }
        Ok(AtSpec { n, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `2^{n/2} |B_t|`.
    pub fn count(&self) -> Result<BigUint> {
        Ok(count_bt(self.n / 2, self.t)? << (self.n / 2))
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.len() == self.n && extract(p).is_ok_and(|(mp, _)| mp.spread() <= self.t)
    }

    /// Members ordered by multi-permutation, then by assignment mask.
    pub fn generate(&self, caps: &Caps) -> Result<PermSet> {
        let count = u128::try_from(&self.count()?).unwrap_or(u128::MAX);
        caps.check_materialize("pair-assigned set", count)?;
        let ell = self.n / 2;
        let mut members = Vec::with_capacity(count as usize);
        for mp in enumerate_bt(ell, self.t, caps)? {
            for mask in 0..1u64 << ell {
                members.push(assign(&mp, &PairAssignment::from_mask(ell, mask))?);
            }
        }
        PermSet::new(
            self.n,
            members,
            ConstructionId::Multiperm { t: self.t },
            Some(4 * self.t),
        )
    }
}

fn mate(v: usize) -> usize {
    v ^ 1
}

impl LocalRepair for AtSpec {
    fn locality(&self) -> usize {
        4 * self.t
    }

    /// Reads the window of radius `2t` around `pos`; the lost value is the mate
    /// of the unique nearby value whose own mate was not seen.
    fn repair_at(&self, view: &ErasedView, pos: usize) -> Result<Repaired> {
        if view.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: view.n(),
            });
        }
        single_erasure(view, pos)?;
        let t = self.t;
        let lo = pos.saturating_sub(2 * t);
        let hi = (pos + 2 * t).min(self.n - 1);
        let mut probe = Probe::new(view);
        let mut seen = Vec::with_capacity(4 * t);
        for q in (lo..=hi).filter(|&q| q != pos) {
            seen.push((q, probe.read(q)?));
        }
        let mut candidates = seen
            .iter()
            .filter(|&&(q, v)| q.abs_diff(pos) <= t && !seen.iter().any(|&(_, w)| w == mate(v)));
        let (_, u) = *candidates.next().ok_or(Error::NotAMember)?;
        if candidates.next().is_some() {
            return Err(Error::Ambiguous(pos));
        }
        Ok(probe.finish(pos, mate(u)))
    }
}

/// One row of a rate report.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub t: usize,
    pub size: BigUint,
    pub rate: f64,
}

/// Exact sizes and rates of `A_t` for every `n` in `ns` and `t` in `ts`.
pub fn rate_table(ns: &[usize], ts: &[usize]) -> Result<Vec<RateRow>> {
    let mut rows = Vec::with_capacity(ns.len() * ts.len());
    for &n in ns {
        for &t in ts {
            let size = AtSpec::new(n, t)?.count()?;
            let rate = rate(&size, n);
            rows.push(RateRow { n, t, size, rate });
        }
    }
    Ok(rows)
}
