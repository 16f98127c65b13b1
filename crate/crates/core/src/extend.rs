//! Extending a set with locality by a suffix codeword with distinct symbols.
//!
//! For a codeword `e` of length `t` over `0..n`, `f_E` relabels the inner
//! alphabet `0..n-t` so that it avoids the symbols of `e`: symbols not in `e`
//! stay put, and the `s`-th smallest displaced symbol moves to the `s`-th
//! smallest free symbol of `n-t..n`. A member `p ⊙ e` is `f_E(p)` followed by `e`.

use std::collections::HashSet;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::DistinctCode;
use crate::locality::{check_injective, verify_locality, RepairMap};
use crate::perm::Permutation;
use crate::repair::{single_erasure, ErasedView, LocalRepair, Probe, Repaired};
use crate::set::{ConstructionId, PermSet};

/// The relabeling `f_E` of `0..n-t` determined by a suffix codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementMap {
    n: usize,
    e: Vec<usize>,
    forward: Vec<usize>,
    inverse: Vec<Option<usize>>,
}

/// Builds `f_E` for the codeword `e` inside `0..n`.
pub fn build_f(n: usize, e: &[usize]) -> Result<ReplacementMap> {
    let t = e.len();
    if t > n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: t,
        });
    }
    let mut in_e = vec![false; n];
    for &s in e {
        if s >= n {
            return Err(Error::OutOfRange { symbol: s, n });
        }
        if std::mem::replace(&mut in_e[s], true) {
            return Err(Error::DuplicateSymbolInE(s));
        }
    }
    let low = n - t;
    let mut spare = (low..n).filter(|&s| !in_e[s]);
    let forward: Vec<usize> = in_e[..low]
        .iter()
        .enumerate()
        .map(|(i, &displaced)| {
            if displaced {
                spare.next().expect("spare symbols match displaced ones")
            } else {
                i
            }
        })
        .collect();
    let mut inverse = vec![None; n];
    for (i, &s) in forward.iter().enumerate() {
        inverse[s] = Some(i);
    }
    Ok(ReplacementMap {
        n,
        e: e.to_vec(),
        forward,
        inverse,
    })
}

impl ReplacementMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.e.len()
    }

    pub fn e(&self) -> &[usize] {
        &self.e
    }

    /// `f_E(i)` for `i < n - t`.
    pub fn apply(&self, i: usize) -> usize {
        self.forward[i]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    /// The preimage of `symbol`, if it lies in the image.
    pub fn invert(&self, symbol: usize) -> Option<usize> {
        self.inverse.get(symbol).copied().flatten()
    }

    /// `f_E(p)` followed by `e`.
    pub fn odot(&self, p: &Permutation) -> Result<Permutation> {
        if p.len() != self.forward.len() {
            return Err(Error::LengthMismatch {
                expected: self.forward.len(),
                found: p.len(),
            });
        }
        let mut out: Vec<usize> = p.symbols().iter().map(|&s| self.forward[s]).collect();
        out.extend_from_slice(&self.e);
        Ok(Permutation::from_vec_unchecked(out))
    }
}

/// `p ⊙ e` for a permutation of `0..n-t` and a codeword with distinct symbols in `0..n`.
pub fn odot(p: &Permutation, e: &[usize]) -> Result<Permutation> {
    build_f(p.len() + e.len(), e)?.odot(p)
}

/// An inner set with locality `d` and a distinct-symbol code, combined by `⊙`.
#[derive(Debug, Clone)]
pub struct ExtendedSpec {
    inner: PermSet,
    inner_index: HashSet<Permutation>,
    inner_map: RepairMap,
    code: DistinctCode,
    maps: Vec<ReplacementMap>,
}

impl ExtendedSpec {
    /// Certifies the inner set at locality `inner_d` and prepares one `f_E` per codeword.
    pub fn new(inner: PermSet, inner_d: usize, code: DistinctCode, caps: &Caps) -> Result<Self> {
        let inner_map = verify_locality(&inner, inner_d, caps)?
            .repair_map()
            .ok_or_else(|| Error::param(format!("inner set does not have locality {inner_d}")))?;
        Self::with_repair_map(inner, inner_map, code)
    }

    /// Uses an already certified repair map for the inner set.
    pub fn with_repair_map(
        inner: PermSet,
        inner_map: RepairMap,
        code: DistinctCode,
    ) -> Result<Self> {
        if inner_map.n() != inner.n() {
            return Err(Error::LengthMismatch {
                expected: inner.n(),
                found: inner_map.n(),
            });
        }
        let n = inner.n() + code.t();
        if code.field().size() != n {
            return Err(Error::param(format!(
                "field of size {} does not match n={n}",
                code.field().size()
            )));
        }
        let maps = code
            .codewords()
            .iter()
            .map(|e| build_f(n, e))
            .collect::<Result<Vec<_>>>()?;
        let inner_index = inner.members().iter().cloned().collect();
        Ok(ExtendedSpec {
            inner,
            inner_index,
            inner_map,
            code,
            maps,
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n() + self.code.t()
    }

    pub fn t(&self) -> usize {
        self.code.t()
    }

    pub fn inner(&self) -> &PermSet {
        &self.inner
    }

    pub fn inner_map(&self) -> &RepairMap {
        &self.inner_map
    }

    pub fn code(&self) -> &DistinctCode {
        &self.code
    }

    /// `d + t - δ + 1`.
    pub fn claimed_locality(&self) -> usize {
        self.inner_map.d() + self.code.t() - self.code.distance() + 1
    }

    pub fn count(&self) -> BigUint {
        BigUint::from(self.inner.len()) * BigUint::from(self.code.len())
    }

    pub fn construction(&self) -> ConstructionId {
        match self.inner.construction() {
            ConstructionId::BlockConcat { h } => ConstructionId::Extend {
                t: self.t(),
                m: self.code.field().m(),
                h,
            },
            _ => ConstructionId::Custom,
        }
    }

    /// Members in inner-major, codeword-minor order.
    pub fn iter(&self) -> impl Iterator<Item = Permutation> + '_ {
        self.inner.members().iter().flat_map(move |p| {
            self.maps
                .iter()
                .map(move |f| f.odot(p).expect("inner length checked"))
        })
    }

    /// Materializes every member.
    pub fn generate(&self, caps: &Caps) -> Result<PermSet> {
        let count = u128::try_from(&self.count()).unwrap_or(u128::MAX);
        caps.check_materialize("extended set", count)?;
        let members: Vec<Permutation> = self
            .inner
            .members()
            .par_iter()
            .flat_map_iter(|p| {
                self.maps
                    .iter()
                    .map(move |f| f.odot(p).expect("inner length checked"))
            })
            .collect();
        PermSet::new(
            self.n(),
            members,
            self.construction(),
            Some(self.claimed_locality()),
        )
    }

    /// Splits a member into its inner permutation and codeword index.
    pub fn decompose(&self, member: &Permutation) -> Result<(Permutation, usize)> {
        let n = self.n();
        if member.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: member.len(),
            });
        }
        let split = n - self.t();
        let idx = self
            .code
            .position_of(&member.symbols()[split..])
            .ok_or(Error::NotInCode)?;
        let f = &self.maps[idx];
        let inner = member.symbols()[..split]
            .iter()
            .map(|&s| f.invert(s).ok_or(Error::NotAMember))
            .collect::<Result<Vec<_>>>()?;
        let inner = Permutation::from_vec_unchecked(inner);
        if !self.inner_index.contains(&inner) {
            return Err(Error::NotAMember);
        }
        Ok((inner, idx))
    }

    pub fn contains(&self, member: &Permutation) -> bool {
        self.decompose(member).is_ok()
    }

    fn suffix_codeword(&self, probe: &mut Probe, skip: Option<usize>) -> Result<usize> {
        let split = self.n() - self.t();
        let k = self.code.k();
        let mut partial = vec![None; self.t()];
        for c in (0..self.t()).filter(|&c| Some(split + c) != skip).take(k) {
            partial[c] = Some(probe.read(split + c)?);
        }
        let word = self.code.erasure_interpolate(&partial)?;
        self.code.position_of(&word).ok_or(Error::NotInCode)
    }
}

impl LocalRepair for ExtendedSpec {
    fn locality(&self) -> usize {
        self.claimed_locality()
    }

    fn repair_at(&self, view: &ErasedView, pos: usize) -> Result<Repaired> {
        if view.n() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: view.n(),
            });
        }
        single_erasure(view, pos)?;
        let split = self.n() - self.t();
        let mut probe = Probe::new(view);
        if pos >= split {
            let idx = self.suffix_codeword(&mut probe, Some(pos))?;
            let symbol = self.code.codewords()[idx][pos - split];
            return Ok(probe.finish(pos, symbol));
        }
        let f = &self.maps[self.suffix_codeword(&mut probe, None)?];
        let rule = self.inner_map.rule(pos);
        let key = rule
            .helpers
            .iter()
            .map(|&j| {
                probe
                    .read(j)
                    .and_then(|s| f.invert(s).ok_or(Error::NotAMember))
            })
            .collect::<Result<Vec<_>>>()?;
        let symbol = f.apply(rule.lookup(&key).ok_or(Error::NotAMember)?);
        Ok(probe.finish(pos, symbol))
    }
}

/// Applies the injective symbol map `f` to every member. The result keeps the
/// locality of `set` with the same helper positions.
pub fn relabel_set(set: &PermSet, f: &[usize]) -> Result<Vec<Vec<usize>>> {
    if f.len() != set.n() {
        return Err(Error::LengthMismatch {
            expected: set.n(),
            found: f.len(),
        });
    }
    check_injective(f)?;
    Ok(set
        .members()
        .iter()
        .map(|p| p.symbols().iter().map(|&s| f[s]).collect())
        .collect())
}
