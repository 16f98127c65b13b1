//! Locality certification, bounds, the parity-coset census and maximal-set search.
//!
//! Locality here means fixed repair groups: position `i` has one helper set
//! `J_i` shared by every member of the set, and the symbol at `i` is a function
//! of the projection onto `J_i`.

mod bounds;
mod census;
mod search;

pub use bounds::{bounds, double_factorial, ln_big, ln_factorial, rate, BoundReport};
pub use census::{coset_census, coset_members, CosetCensus};
pub use search::{max_set_search, SearchOutcome};

use std::collections::HashMap;

use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::repair::{ErasedView, LocalRepair, Probe, Repaired};
use crate::set::PermSet;

/// Packs a projection into an integer key when it fits, else keeps the symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ProjKey {
    Packed(u128),
    Wide(Vec<usize>),
}

fn projection_key(word: &[usize], helpers: &[usize], radix: Option<u128>) -> ProjKey {
    match radix {
        Some(r) => ProjKey::Packed(
            helpers
                .iter()
                .fold(0u128, |acc, &j| acc * r + word[j] as u128),
        ),
        None => ProjKey::Wide(helpers.iter().map(|&j| word[j]).collect()),
    }
}

fn packing_radix(alphabet: usize, len: usize) -> Option<u128> {
    let r = alphabet.max(1) as u128;
    r.checked_pow(len as u32).map(|_| r)
}

fn alphabet_of<W: AsRef<[usize]>>(words: &[W]) -> usize {
    words
        .iter()
        .flat_map(|w| w.as_ref().iter().copied())
        .max()
        .map_or(1, |m| m + 1)
}

/// True iff no two words agree on `helpers` yet differ at `target`.
pub fn determines<W: AsRef<[usize]> + Sync>(words: &[W], helpers: &[usize], target: usize) -> bool {
    let radix = packing_radix(alphabet_of(words), helpers.len());
    determines_with(words, helpers, target, radix)
}

fn determines_with<W: AsRef<[usize]>>(
    words: &[W],
    helpers: &[usize],
    target: usize,
    radix: Option<u128>,
) -> bool {
    let mut seen: HashMap<ProjKey, usize> = HashMap::with_capacity(words.len());
    for w in words {
        let w = w.as_ref();
        let key = projection_key(w, helpers, radix);
        match seen.get(&key) {
            Some(&s) if s != w[target] => return false,
            Some(_) => {}
            None => {
                seen.insert(key, w[target]);
            }
        }
    }
    true
}

/// A fixed helper set for one position and the lookup from helper symbols to the lost symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairRule {
    pub position: usize,
    pub helpers: Vec<usize>,
    table: HashMap<Vec<usize>, usize>,
}

impl RepairRule {
    /// Builds the rule from the words it must cover. Fails if `helpers` do not determine `position`.
    pub fn build<W: AsRef<[usize]>>(
        words: &[W],
        position: usize,
        helpers: Vec<usize>,
    ) -> Result<Self> {
        let mut table = HashMap::with_capacity(words.len());
        for w in words {
            let w = w.as_ref();
            let key: Vec<usize> = helpers.iter().map(|&j| w[j]).collect();
            if let Some(prev) = table.insert(key, w[position]) {
                if prev != w[position] {
                    return Err(Error::Ambiguous(position));
                }
            }
        }
        Ok(RepairRule {
            position,
            helpers,
            table,
        })
    }

    /// The symbol at `position` given the helper symbols, in helper order.
    pub fn lookup(&self, helper_symbols: &[usize]) -> Option<usize> {
        self.table.get(helper_symbols).copied()
    }

    fn relabel(&self, f: &[usize]) -> RepairRule {
        RepairRule {
            position: self.position,
            helpers: self.helpers.clone(),
            table: self
                .table
                .iter()
                .map(|(k, &v)| (k.iter().map(|&s| f[s]).collect(), f[v]))
                .collect(),
        }
    }
}

/// Per-position repair rules certifying locality `d` for a set of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairMap {
    n: usize,
    d: usize,
    rules: Vec<RepairRule>,
}

impl RepairMap {
    pub fn from_rules(n: usize, d: usize, rules: Vec<RepairRule>) -> Result<Self> {
        if rules.len() != n || rules.iter().enumerate().any(|(i, r)| r.position != i) {
            return Err(Error::param(
                "repair map needs one rule per position, in order",
            ));
        }
        if let Some(r) = rules
            .iter()
            .find(|r| r.helpers.len() > d || r.helpers.contains(&r.position))
        {
            return Err(Error::param(format!(
                "bad helper set for position {}",
                r.position
            )));
        }
        Ok(RepairMap { n, d, rules })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rule(&self, pos: usize) -> &RepairRule {
        &self.rules[pos]
    }

    pub fn rules(&self) -> &[RepairRule] {
        &self.rules
    }

    pub fn helper_sets(&self) -> Vec<Vec<usize>> {
        self.rules.iter().map(|r| r.helpers.clone()).collect()
    }

    /// Largest helper set actually used.
    pub fn max_helpers(&self) -> usize {
        self.rules
            .iter()
            .map(|r| r.helpers.len())
            .max()
            .unwrap_or(0)
    }

    /// Same helper positions, tables pushed through the injective symbol map `f`.
    pub fn relabel(&self, f: &[usize]) -> Result<RepairMap> {
        check_injective(f)?;
        Ok(RepairMap {
            n: self.n,
            d: self.d,
            rules: self.rules.iter().map(|r| r.relabel(f)).collect(),
        })
    }
}

pub(crate) fn check_injective(f: &[usize]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for &v in f {
        if !seen.insert(v) {
            return Err(Error::NonInjectiveMap(v));
        }
    }
    Ok(())
}

impl LocalRepair for RepairMap {
    fn locality(&self) -> usize {
        self.d
    }

    fn repair_at(&self, view: &ErasedView, pos: usize) -> Result<Repaired> {
        if pos >= view.n() || view.n() != self.n {
            return Err(Error::IndexOutOfRange { pos, n: view.n() });
        }
        if !view.is_erased(pos) {
            return Err(Error::NotErased(pos));
        }
        let rule = &self.rules[pos];
        let mut probe = Probe::new(view);
        let key = rule
            .helpers
            .iter()
            .map(|&j| probe.read(j))
            .collect::<Result<Vec<_>>>()?;
        let symbol = rule.lookup(&key).ok_or(Error::NotAMember)?;
        Ok(probe.finish(pos, symbol))
    }
}

/// Result of a locality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalityVerdict {
    Certified(RepairMap),
    /// The first position for which no helper set of size `<= d` works.
    Fails {
        position: usize,
    },
}

impl LocalityVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, LocalityVerdict::Certified(_))
    }

    pub fn repair_map(self) -> Option<RepairMap> {
        match self {
            LocalityVerdict::Certified(m) => Some(m),
            LocalityVerdict::Fails { .. } => None,
        }
    }
}

/// Lexicographic `k`-subsets of `items`.
pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let n = items.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Smallest helper set (size first, then lexicographic) that determines `target`.
pub(crate) fn find_helpers<W: AsRef<[usize]>>(
    words: &[W],
    n: usize,
    target: usize,
    d: usize,
    radix_alphabet: usize,
) -> Option<Vec<usize>> {
    let others: Vec<usize> = (0..n).filter(|&j| j != target).collect();
    for k in 0..=d.min(others.len()) {
        let radix = packing_radix(radix_alphabet, k);
        for cand in combinations(&others, k) {
            if determines_with(words, &cand, target, radix) {
                return Some(cand);
            }
        }
    }
    None
}

/// Certifies locality `d` for arbitrary equal-length words with distinct symbols.
pub fn verify_locality_words<W: AsRef<[usize]> + Sync>(
    n: usize,
    words: &[W],
    d: usize,
    caps: &Caps,
) -> Result<LocalityVerdict> {
    if words.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(w) = words.iter().find(|w| w.as_ref().len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: w.as_ref().len(),
        });
    }
    let d = d.min(n.saturating_sub(1));
    let candidates: u128 = (0..=d).map(|k| binomial(n.saturating_sub(1), k)).sum();
    if candidates > caps.helper_sets as u128 {
        return Err(Error::SearchBudgetExceeded(caps.helper_sets));
    }
    let alphabet = alphabet_of(words);
    let found: Vec<Option<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|i| find_helpers(words, n, i, d, alphabet))
        .collect();
    let mut rules = Vec::with_capacity(n);
    for (i, helpers) in found.into_iter().enumerate() {
        match helpers {
            Some(h) => rules.push(RepairRule::build(words, i, h)?),
            None => return Ok(LocalityVerdict::Fails { position: i }),
        }
    }
    Ok(LocalityVerdict::Certified(RepairMap { n, d, rules }))
}

/// Certifies that `set` has locality `d` under fixed repair groups.
pub fn verify_locality(set: &PermSet, d: usize, caps: &Caps) -> Result<LocalityVerdict> {
    verify_locality_words(set.n(), set.members(), d, caps)
}
