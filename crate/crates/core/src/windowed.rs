//! Sets repaired from a window of nearby positions.
//!
//! * The infinity-metric ball: every symbol within `r` of its position. A lost
//!   symbol is the only in-range value missing from the `2r` cells on either side.
//! * The media set: permutations whose every prefix, or every suffix, is a run
//!   of consecutive values. Repaired from at most four cells.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::locality::{find_helpers, RepairMap, RepairRule};
use crate::perm::Permutation;
use crate::repair::{single_erasure, ErasedView, LocalRepair, Probe, Repaired};
use crate::set::{ConstructionId, PermSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InfBallSpec {
    n: usize,
    r: usize,
}

impl InfBallSpec {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n == 0 || r >= n {
            return Err(Error::param(format!(
                "ball radius needs 0 <= r <= n-1, got n={n} r={r}"
            )));
        }
        Ok(InfBallSpec { n, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.len() == self.n
            && p.symbols()
                .iter()
                .enumerate()
                .all(|(j, &s)| s.abs_diff(j) <= self.r)
    }

    /// Ball size by a transfer count over which values near the current position are used.
    pub fn count(&self) -> u128 {
        let (n, r) = (self.n as i64, self.r as i64);
        let width = 2 * self.r + 1;
        let absent = |v: i64| v < 0 || v >= n;
        let mut init = 0usize;
        for k in 0..width {
            if absent(k as i64 - r) {
                init |= 1 << k;
            }
        }
        let mut states = std::collections::HashMap::from([(init, 1u128)]);
        for j in 0..n {
            let mut next = std::collections::HashMap::new();
            for (&mask, &ways) in &states {
                for k in (0..width).filter(|k| mask >> k & 1 == 0) {
                    let placed = mask | 1 << k;
                    if placed & 1 == 0 {
                        continue;
                    }
                    let mut shifted = placed >> 1;
                    if absent(j + 1 + r) {
                        shifted |= 1 << (width - 1);
                    }
                    *next.entry(shifted).or_insert(0) += ways;
                }
            }
            states = next;
        }
        states.values().sum()
    }

    /// Members in lexicographic order.
    pub fn generate(&self, caps: &Caps) -> Result<PermSet> {
        let mut members = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        let mut used = vec![false; self.n];
        self.extend(&mut cur, &mut used, &mut members, caps.materialize)?;
        PermSet::new(
            self.n,
            members,
            ConstructionId::InfBall { r: self.r },
            Some(4 * self.r),
        )
    }

    fn extend(
        &self,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Permutation>,
        cap: usize,
    ) -> Result<()> {
        let j = cur.len();
        if j == self.n {
            if out.len() >= cap {
                return Err(Error::cap("infinity ball size", cap as u128));
            }
            out.push(Permutation::from_vec_unchecked(cur.clone()));
            return Ok(());
        }
        let lo = j.saturating_sub(self.r);
        let hi = (j + self.r).min(self.n - 1);
        // A value must sit at most r positions after its own index.
        let forced = (j >= self.r && !used[j - self.r]).then(|| j - self.r);
        for v in lo..=hi {
            if used[v] || forced.is_some_and(|f| f != v) {
                continue;
            }
            used[v] = true;
            cur.push(v);
            self.extend(cur, used, out, cap)?;
            cur.pop();
            used[v] = false;
        }
        Ok(())
    }
}

impl LocalRepair for InfBallSpec {
    fn locality(&self) -> usize {
        4 * self.r
    }

    fn repair_at(&self, view: &ErasedView, pos: usize) -> Result<Repaired> {
        if view.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: view.n(),
            });
        }
        single_erasure(view, pos)?;
        let mut probe = Probe::new(view);
        let lo = pos.saturating_sub(2 * self.r);
        let hi = (pos + 2 * self.r).min(self.n - 1);
        let mut seen = HashSet::new();
        for j in (lo..=hi).filter(|&j| j != pos) {
            seen.insert(probe.read(j)?);
        }
        let mut candidates = (pos.saturating_sub(self.r)..=(pos + self.r).min(self.n - 1))
            .filter(|v| !seen.contains(v));
        let symbol = candidates.next().ok_or(Error::NotAMember)?;
        if candidates.next().is_some() {
            return Err(Error::Ambiguous(pos));
        }
        Ok(probe.finish(pos, symbol))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MediaSetSpec {
    n: usize,
}

/// Every prefix is a run of consecutive values.
pub fn prefix_consecutive(symbols: &[usize]) -> bool {
    let Some(&first) = symbols.first() else {
        return true;
    };
    let (mut lo, mut hi) = (first, first);
    for (len, &s) in symbols.iter().enumerate().skip(1) {
        lo = lo.min(s);
        hi = hi.max(s);
        if hi - lo != len {
            return false;
        }
    }
    true
}

pub fn suffix_consecutive(symbols: &[usize]) -> bool {
    let rev: Vec<usize> = symbols.iter().rev().copied().collect();
    prefix_consecutive(&rev)
}

/// `{j-1, j+1, 0, n-1}` without `j`, clipped to the range and sorted.
pub fn media_default_helpers(n: usize, j: usize) -> Vec<usize> {
    let mut h: Vec<usize> = [j.checked_sub(1), Some(j + 1), Some(0), n.checked_sub(1)]
        .into_iter()
        .flatten()
        .filter(|&x| x < n && x != j)
        .collect();
    h.sort_unstable();
    h.dedup();
    h
}

impl MediaSetSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("media set needs n >= 2"));
        }
        Ok(MediaSetSpec { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2^n - 2`
    pub fn count(&self) -> BigUint {
        (BigUint::from(1u32) << self.n) - 2u32
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.len() == self.n && (prefix_consecutive(p.symbols()) || suffix_consecutive(p.symbols()))
    }

    /// Prefix-consecutive members (by start value, lower extension first), then
    /// the reversals that are not already present.
    pub fn generate(&self, caps: &Caps) -> Result<PermSet> {
        caps.check_materialize(
            "media set",
            u128::try_from(self.count()).unwrap_or(u128::MAX),
        )?;
        let mut prefix = Vec::with_capacity(1 << (self.n - 1));
        for start in 0..self.n {
            self.grow(vec![start], start, start, &mut prefix);
        }
        let known: HashSet<Vec<usize>> = prefix.iter().cloned().collect();
        let mut members: Vec<Permutation> = prefix
            .iter()
            .cloned()
            .map(Permutation::from_vec_unchecked)
            .collect();
        for s in &prefix {
            let rev: Vec<usize> = s.iter().rev().copied().collect();
            if !known.contains(&rev) {
                members.push(Permutation::from_vec_unchecked(rev));
            }
        }
        PermSet::new(self.n, members, ConstructionId::Media, Some(4))
    }

    fn grow(&self, cur: Vec<usize>, lo: usize, hi: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == self.n {
            out.push(cur);
            return;
        }
        if lo > 0 {
            let mut next = cur.clone();
            next.push(lo - 1);
            self.grow(next, lo - 1, hi, out);
        }
        if hi + 1 < self.n {
            let mut next = cur;
            next.push(hi + 1);
            self.grow(next, lo, hi + 1, out);
        }
    }
}

/// Repair rules for the media set: the default four-cell helper set where it
/// determines the lost symbol, otherwise the smallest helper set found by search.
#[derive(Debug, Clone)]
pub struct MediaRepairer {
    map: RepairMap,
    fallback: Vec<usize>,
}

impl MediaRepairer {
    pub fn new(spec: MediaSetSpec, caps: &Caps) -> Result<Self> {
        let set = spec.generate(caps)?;
        let n = spec.n;
        let mut rules = Vec::with_capacity(n);
        let mut fallback = Vec::new();
        for j in 0..n {
            match RepairRule::build(set.members(), j, media_default_helpers(n, j)) {
                Ok(rule) => rules.push(rule),
                Err(Error::Ambiguous(_)) => {
                    fallback.push(j);
                    let helpers =
                        find_helpers(set.members(), n, j, 4, n).ok_or(Error::Ambiguous(j))?;
                    rules.push(RepairRule::build(set.members(), j, helpers)?);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(MediaRepairer {
            map: RepairMap::from_rules(n, 4, rules)?,
            fallback,
        })
    }

    /// Positions where the default helper set was ambiguous.
    pub fn fallback_positions(&self) -> &[usize] {
        &self.fallback
    }

    pub fn helper_sets(&self) -> Vec<Vec<usize>> {
        self.map.helper_sets()
    }
}

impl LocalRepair for MediaRepairer {
    fn locality(&self) -> usize {
        4
    }

    fn repair_at(&self, view: &ErasedView, pos: usize) -> Result<Repaired> {
        if view.n() != self.map.n() {
            return Err(Error::LengthMismatch {
                expected: self.map.n(),
                found: view.n(),
            });
        }
        single_erasure(view, pos)?;
        self.map.repair_at(view, pos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locality::verify_locality;
    use crate::perm::enumerate_sn;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ball_basics() {
        let caps = Caps::default();
        let b0 = InfBallSpec::new(5, 0).unwrap().generate(&caps).unwrap();
        assert_eq!(b0.members(), &[Permutation::identity(5)]);
        assert_eq!(
            InfBallSpec::new(5, 1)
                .unwrap()
                .generate(&caps)
                .unwrap()
                .len(),
            8
        );
        assert_eq!(
            InfBallSpec::new(5, 4)
                .unwrap()
                .generate(&caps)
                .unwrap()
                .len(),
            120
        );
        assert!(InfBallSpec::new(5, 5).is_err());
    }

    #[test]
    fn ball_counts_match_brute_force() {
        let caps = Caps::default();
        for n in 1..=8 {
            let all: Vec<_> = enumerate_sn(n, &caps).unwrap().collect();
            for r in 0..n.min(4) {
                let spec = InfBallSpec::new(n, r).unwrap();
                let brute = all
                    .iter()
                    .filter(|q| {
                        q.symbols()
                            .iter()
                            .enumerate()
                            .all(|(j, &s)| (s as i64 - j as i64).abs() <= r as i64)
                    })
                    .count();
                assert_eq!(spec.generate(&caps).unwrap().len(), brute, "n={n} r={r}");
                assert_eq!(spec.count(), brute as u128, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn ball_repair() {
        let spec = InfBallSpec::new(6, 1).unwrap();
        let m = p(&[1, 0, 2, 4, 3, 5]);
        let r = spec.repair(&ErasedView::new(&m, &[3]).unwrap()).unwrap();
        assert_eq!(r.symbol, 4);
        assert_eq!(r.accessed, vec![1, 2, 4, 5]);
        for j in 0..6 {
            let r = spec
                .repair(&ErasedView::new(&Permutation::identity(6), &[j]).unwrap())
                .unwrap();
            assert_eq!(r.symbol, j);
            assert!(r.accesses() <= 4);
        }
    }

    #[test]
    fn media_counts_and_predicate() {
        let caps = Caps::default();
        assert_eq!(
            MediaSetSpec::new(2).unwrap().generate(&caps).unwrap().len(),
            2
        );
        for n in 3..=12 {
            let spec = MediaSetSpec::new(n).unwrap();
            let set = spec.generate(&caps).unwrap();
            assert_eq!(set.len() as u128, (1u128 << n) - 2);
            assert_eq!(spec.count(), BigUint::from(set.len()));
            assert!(set.members().iter().all(|m| spec.contains(m)));
        }
        for n in 3..=7 {
            let set = MediaSetSpec::new(n).unwrap().generate(&caps).unwrap();
            let idx = set.index();
            let spec = MediaSetSpec::new(n).unwrap();
            for q in enumerate_sn(n, &caps).unwrap() {
                assert_eq!(idx.contains(&q), spec.contains(&q));
            }
        }
    }

    #[test]
    fn media_repair() {
        let caps = Caps::default();
        let rep = MediaRepairer::new(MediaSetSpec::new(4).unwrap(), &caps).unwrap();
        let r = rep
            .repair(&ErasedView::new(&p(&[2, 3, 1, 0]), &[1]).unwrap())
            .unwrap();
        assert_eq!(r.symbol, 3);
        let r = rep
            .repair(&ErasedView::new(&Permutation::identity(4), &[0]).unwrap())
            .unwrap();
        assert_eq!(r.symbol, 0);
        assert_eq!(rep.fallback_positions(), &[0, 3]);
        assert_eq!(media_default_helpers(4, 1), vec![0, 2, 3]);
        assert_eq!(media_default_helpers(4, 0), vec![1, 3]);
    }

    #[test]
    fn media_exhaustive_repair() {
        let caps = Caps::default();
        for n in 2..=8 {
            let spec = MediaSetSpec::new(n).unwrap();
            let set = spec.generate(&caps).unwrap();
            let rep = MediaRepairer::new(spec, &caps).unwrap();
            for m in set.members() {
                for j in 0..n {
                    let r = rep.repair(&ErasedView::new(m, &[j]).unwrap()).unwrap();
                    assert_eq!(r.symbol, m.get(j));
                    assert!(r.accesses() <= 4);
                }
            }
            assert!(verify_locality(&set, 4, &caps).unwrap().is_certified());
        }
    }
}
