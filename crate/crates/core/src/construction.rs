//! One entry point per construction: membership, generation and repair.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::blocks::{BlockConcatSpec, RangeRestrictedSpec};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::extend::ExtendedSpec;
use crate::gf::{build_distinct_code, FieldSpec};
use crate::locality::verify_locality;
use crate::multiperm::AtSpec;
use crate::perm::{enumerate_sn, Permutation};
use crate::repair::{single_erasure, ErasedView, LocalRepair, Probe, Repaired};
use crate::set::{ConstructionId, PermSet};
use crate::windowed::{InfBallSpec, MediaRepairer, MediaSetSpec};

/// The whole symmetric group: a lost symbol is the one missing from the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullGroup {
    n: usize,
}

impl FullGroup {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(FullGroup { n })
    }
}

impl LocalRepair for FullGroup {
    fn locality(&self) -> usize {
        self.n - 1
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
        let mut seen = vec![false; self.n];
        for j in (0..self.n).filter(|&j| j != pos) {
            let s = probe.read(j)?;
            *seen.get_mut(s).ok_or(Error::NotAMember)? = true;
        }
        let symbol = seen.iter().position(|&b| !b).ok_or(Error::NotAMember)?;
        Ok(probe.finish(pos, symbol))
    }
}

/// A construction with its parameters.
#[derive(Debug, Clone)]
pub enum Construction {
    Full(FullGroup),
    BlockConcat(BlockConcatSpec),
    RangeRestricted(RangeRestrictedSpec),
    InfBall(InfBallSpec),
    Media(MediaSetSpec),
    Extend(Box<ExtendedSpec>),
    Multiperm(AtSpec),
}

impl Construction {
    /// Rebuilds the construction named by `id` over `0..n`. `Custom` has no rule to rebuild.
    pub fn from_id(id: ConstructionId, n: usize, caps: &Caps) -> Result<Self> {
        Ok(match id {
            ConstructionId::Full => Construction::Full(FullGroup::new(n)?),
            ConstructionId::BlockConcat { h } => {
                Construction::BlockConcat(BlockConcatSpec::new(n, h)?)
            }
            ConstructionId::RangeRestricted { h } => {
                Construction::RangeRestricted(RangeRestrictedSpec::new(n, h)?)
            }
            ConstructionId::InfBall { r } => Construction::InfBall(InfBallSpec::new(n, r)?),
            ConstructionId::Media => Construction::Media(MediaSetSpec::new(n)?),
            ConstructionId::Extend { t, m, h } => {
                Construction::Extend(Box::new(extended(n, t, m, h, caps)?))
            }
            ConstructionId::Multiperm { t } => Construction::Multiperm(AtSpec::new(n, t)?),
            ConstructionId::Custom => {
                return Err(Error::param("custom sets have no construction rule"))
            }
        })
    }

    pub fn id(&self) -> ConstructionId {
        match self {
            Construction::Full(_) => ConstructionId::Full,
            Construction::BlockConcat(s) => ConstructionId::BlockConcat { h: s.h() },
            Construction::RangeRestricted(s) => ConstructionId::RangeRestricted { h: s.h() },
            Construction::InfBall(s) => ConstructionId::InfBall { r: s.r() },
            Construction::Media(_) => ConstructionId::Media,
            Construction::Extend(s) => s.construction(),
            Construction::Multiperm(s) => ConstructionId::Multiperm { t: s.t() },
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Construction::Full(s) => s.n,
            Construction::BlockConcat(s) => s.n(),
            Construction::RangeRestricted(s) => s.n(),
            Construction::InfBall(s) => s.n(),
            Construction::Media(s) => s.n(),
            Construction::Extend(s) => s.n(),
            Construction::Multiperm(s) => s.n(),
        }
    }

    pub fn claimed_locality(&self) -> usize {
        match self {
            Construction::Full(s) => s.locality(),
            Construction::BlockConcat(s) => s.h() - 1,
            Construction::RangeRestricted(s) => s.n() - s.h() - 1,
            Construction::InfBall(s) => 4 * s.r(),
            Construction::Media(_) => 4,
            Construction::Extend(s) => s.claimed_locality(),
            Construction::Multiperm(s) => 4 * s.t(),
        }
    }

    pub fn count(&self) -> Result<BigUint> {
        Ok(match self {
            Construction::Full(s) => (1..=s.n).map(BigUint::from).product(),
            Construction::BlockConcat(s) => s.count(),
            Construction::RangeRestricted(s) => s.count(),
            Construction::InfBall(s) => BigUint::from(s.count()),
            Construction::Media(s) => s.count(),
            Construction::Extend(s) => s.count(),
            Construction::Multiperm(s) => s.count()?,
        })
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.len() == self.n()
            && match self {
                Construction::Full(_) => true,
                Construction::BlockConcat(s) => s.contains(p),
                Construction::RangeRestricted(s) => s.contains(p),
                Construction::InfBall(s) => s.contains(p),
                Construction::Media(s) => s.contains(p),
                Construction::Extend(s) => s.contains(p),
                Construction::Multiperm(s) => s.contains(p),
            }
    }

    pub fn generate(&self, caps: &Caps) -> Result<PermSet> {
        match self {
            Construction::Full(s) => {
                let members = enumerate_sn(s.n, caps)?.collect::<Vec<_>>();
                caps.check_materialize("full group", members.len() as u128)?;
                PermSet::new(s.n, members, ConstructionId::Full, Some(s.locality()))
            }
            Construction::BlockConcat(s) => s.generate(caps),
            Construction::RangeRestricted(s) => s.generate(caps),
            Construction::InfBall(s) => s.generate(caps),
            Construction::Media(s) => s.generate(caps),
            Construction::Extend(s) => s.generate(caps),
            Construction::Multiperm(s) => s.generate(caps),
        }
    }

    /// The construction's own repair procedure.
    pub fn repairer(&self, caps: &Caps) -> Result<Box<dyn LocalRepair + Send + Sync>> {
        Ok(match self {
            Construction::Full(s) => Box::new(*s),
            Construction::BlockConcat(s) => Box::new(*s),
            Construction::RangeRestricted(s) => Box::new(*s),
            Construction::InfBall(s) => Box::new(*s),
            Construction::Media(s) => Box::new(MediaRepairer::new(*s, caps)?),
            Construction::Extend(s) => Box::new((**s).clone()),
            Construction::Multiperm(s) => Box::new(*s),
        })
    }
}

/// The extension of `block_concat(n - t, h)` by the degree-4 permutation-polynomial code over GF(2^m).
pub fn extended(n: usize, t: usize, m: u32, h: usize, caps: &Caps) -> Result<ExtendedSpec> {
    if t >= n {
        return Err(Error::param(format!(
            "suffix length t={t} must be below n={n}"
        )));
    }
    let inner = BlockConcatSpec::new(n - t, h)?;
    let field = FieldSpec::new(m)?;
    let code = build_distinct_code(&field, t, None, caps)?;
    ExtendedSpec::new(inner.generate(caps)?, h.saturating_sub(1), code, caps)
}

/// Membership and repair for a stored set: the construction's own rules when
/// the set names one, otherwise rules certified from the members.
pub struct Scheme {
    construction: Option<Construction>,
    members: HashSet<Permutation>,
    repairer: Box<dyn LocalRepair + Send + Sync>,
}

impl Scheme {
    pub fn from_construction(construction: Construction, caps: &Caps) -> Result<Self> {
        let repairer = construction.repairer(caps)?;
        Ok(Scheme {
            construction: Some(construction),
            members: HashSet::new(),
            repairer,
        })
    }

    pub fn for_set(set: &PermSet, caps: &Caps) -> Result<Self> {
        if set.construction() != ConstructionId::Custom {
            if let Ok(c) = Construction::from_id(set.construction(), set.n(), caps) {
                if set.members().iter().all(|p| c.contains(p)) {
                    return Self::from_construction(c, caps);
                }
            }
        }
        let d = set.claimed_locality().unwrap_or(set.n().saturating_sub(1));
        let map = verify_locality(set, d, caps)?
            .repair_map()
            .ok_or_else(|| Error::param(format!("set does not have locality {d}")))?;
        Ok(Scheme {
            construction: None,
            members: set.members().iter().cloned().collect(),
            repairer: Box::new(map),
        })
    }

    pub fn construction(&self) -> Option<&Construction> {
        self.construction.as_ref()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        match &self.construction {
            Some(c) => c.contains(p),
            None => self.members.contains(p),
        }
    }

    pub fn repairer(&self) -> &(dyn LocalRepair + Send + Sync) {
        self.repairer.as_ref()
    }

    pub fn locality(&self) -> usize {
        self.repairer.locality()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trip() {
        let caps = Caps::default();
        let cases = [
            (ConstructionId::Full, 4),
            (ConstructionId::BlockConcat { h: 2 }, 6),
            (ConstructionId::RangeRestricted { h: 2 }, 6),
            (ConstructionId::InfBall { r: 1 }, 6),
            (ConstructionId::Media, 6),
            (ConstructionId::Extend { t: 6, m: 3, h: 2 }, 8),
            (ConstructionId::Multiperm { t: 2 }, 6),
        ];
        for (id, n) in cases {
            let c = Construction::from_id(id, n, &caps).unwrap();
            assert_eq!(c.id(), id);
            let set = c.generate(&caps).unwrap();
            assert_eq!(BigUint::from(set.len()), c.count().unwrap(), "{id}");
            assert_eq!(set.claimed_locality(), Some(c.claimed_locality()));
            let rep = c.repairer(&caps).unwrap();
            for m in set.members().iter().step_by(5) {
                assert!(c.contains(m));
                for j in 0..n {
                    let r = rep.repair(&ErasedView::new(m, &[j]).unwrap()).unwrap();
                    assert_eq!(r.symbol, m.get(j));
                    assert!(r.accesses() <= c.claimed_locality(), "{id}");
                }
            }
        }
    }

    #[test]
    fn custom_sets_use_certified_rules() {
        let caps = Caps::default();
        let set = BlockConcatSpec::new(4, 2).unwrap().generate(&caps).unwrap();
        let custom =
            PermSet::new(4, set.members().to_vec(), ConstructionId::Custom, Some(1)).unwrap();
        let scheme = Scheme::for_set(&custom, &caps).unwrap();
        assert!(scheme.construction().is_none());
        assert_eq!(scheme.locality(), 1);
        assert!(!scheme.contains(&Permutation::new(vec![2, 0, 1, 3]).unwrap()));
        assert!(Construction::from_id(ConstructionId::Custom, 4, &caps).is_err());
    }
}
