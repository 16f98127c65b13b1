//! The permutation-set container and its text file format.
//!
//! ```text
//! PERMSET 1
//! n=4 d=1 construction=block-concat:h=2
//! 0 1 2 3
//! ...
//! ```

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Identifies how a set was built, with the parameters needed to rebuild its repair rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionId {
    /// All of S_n.
    Full,
    BlockConcat {
        h: usize,
    },
    RangeRestricted {
        h: usize,
    },
    InfBall {
        r: usize,
    },
    Media,
    /// Inner block concatenation with block length `h` over `n - t` symbols,
    /// extended by a degree-4 permutation-polynomial code over GF(2^m).
    Extend {
        t: usize,
        m: u32,
        h: usize,
    },
    Multiperm {
        t: usize,
    },
    /// Anything else; repair rules come from the generic verifier.
    Custom,
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionId::Full => write!(f, "full"),
            ConstructionId::BlockConcat { h } => write!(f, "block-concat:h={h}"),
            ConstructionId::RangeRestricted { h } => write!(f, "range-restricted:h={h}"),
            ConstructionId::InfBall { r } => write!(f, "inf-ball:r={r}"),
            ConstructionId::Media => write!(f, "media"),
            ConstructionId::Extend { t, m, h } => write!(f, "extend:t={t},m={m},h={h}"),
            ConstructionId::Multiperm { t } => write!(f, "multiperm:t={t}"),
            ConstructionId::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for ConstructionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for item in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("construction parameter `{item}`")))?;
            let v: usize = v
                .parse()
                .map_err(|_| Error::Format(format!("construction parameter `{item}`")))?;
            kv.push((k, v));
        }
        let get = |key: &str| {
            kv.iter()
                .find(|(k, _)| *k == key)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::Format(format!("construction `{s}` lacks `{key}`")))
        };
        Ok(match name {
            "full" => ConstructionId::Full,
            "block-concat" => ConstructionId::BlockConcat { h: get("h")? },
            "range-restricted" => ConstructionId::RangeRestricted { h: get("h")? },
            "inf-ball" => ConstructionId::InfBall { r: get("r")? },
            "media" => ConstructionId::Media,
            "extend" => ConstructionId::Extend {
                t: get("t")?,
                m: get("m")? as u32,
                h: get("h")?,
            },
            "multiperm" => ConstructionId::Multiperm { t: get("t")? },
            "custom" => ConstructionId::Custom,
            other => return Err(Error::Format(format!("unknown construction `{other}`"))),
        })
    }
}

/// A deduplicated collection of same-length permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermSet {
    n: usize,
    members: Vec<Permutation>,
    construction: ConstructionId,
    claimed_locality: Option<usize>,
}

impl PermSet {
    /// Builds a set, rejecting members of the wrong length and duplicates.
    /// Member order is preserved.
    pub fn new(
        n: usize,
        members: Vec<Permutation>,
        construction: ConstructionId,
        claimed_locality: Option<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut seen = HashSet::with_capacity(members.len());
        for m in &members {
            if m.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: m.len(),
                });
            }
            if !seen.insert(m) {
                return Err(Error::DuplicateMember(m.to_string()));
            }
        }
        Ok(PermSet {
            n,
            members,
            construction,
            claimed_locality,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn construction(&self) -> ConstructionId {
        self.construction
    }

    pub fn claimed_locality(&self) -> Option<usize> {
        self.claimed_locality
    }

    pub fn with_claimed_locality(mut self, d: Option<usize>) -> Self {
        self.claimed_locality = d;
        self
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.contains(p)
    }

    /// Hash index over the members, for repeated membership tests.
    pub fn index(&self) -> HashSet<&Permutation> {
        self.members.iter().collect()
    }

    /// True when both sets hold the same members, ignoring order and metadata.
    pub fn same_members(&self, other: &PermSet) -> bool {
        self.n == other.n && self.len() == other.len() && {
            let idx = self.index();
            other.members.iter().all(|m| idx.contains(m))
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "PERMSET 1")?;
        let d = self
            .claimed_locality
            .map_or_else(|| "-".to_string(), |d| d.to_string());
        writeln!(w, "n={} d={} construction={}", self.n, d, self.construction)?;
        for m in &self.members {
            writeln!(w, "{m}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next_line = |what: &str| -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::Format(format!("missing {what} line")))
        };
        let magic = next_line("magic")?;
        if magic != "PERMSET 1" {
            return Err(Error::Format(format!("bad magic `{magic}`")));
        }
        let header = next_line("header")?;
        let fields: Vec<&str> = header.split(' ').collect();
        let [nf, df, cf] = fields.as_slice() else {
            return Err(Error::Format(format!("bad header `{header}`")));
        };
        let field = |f: &'_ str, key: &str| -> Result<String> {
            f.strip_prefix(key)
                .and_then(|s| s.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| Error::Format(format!("expected `{key}=` in header")))
        };
        let n: usize = field(nf, "n")?
            .parse()
            .map_err(|_| Error::Format("n is not an integer".into()))?;
        let d = match field(df, "d")?.as_str() {
            "-" => None,
            s => Some(
                s.parse()
                    .map_err(|_| Error::Format("d is not an integer".into()))?,
            ),
        };
        let construction: ConstructionId = field(cf, "construction")?.parse()?;
        let mut members = Vec::new();
        for line in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let symbols = line
                .split(' ')
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Format(format!("bad symbol `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            members.push(Permutation::new(symbols)?);
        }
        PermSet::new(n, members, construction, d)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::read_from(text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::perm::enumerate_sn;
    use proptest::prelude::*;

    #[test]
    fn exact_format() {
        let s = PermSet::new(
            3,
            vec![
                Permutation::identity(3),
                Permutation::new(vec![1, 2, 0]).unwrap(),
            ],
            ConstructionId::BlockConcat { h: 3 },
            Some(2),
        )
        .unwrap();
        assert_eq!(
            s.to_text(),
            "PERMSET 1\nn=3 d=2 construction=block-concat:h=3\n0 1 2\n1 2 0\n"
        );
        let none = s.clone().with_claimed_locality(None);
        assert!(none.to_text().contains("n=3 d=- construction="));
    }

    #[test]
    fn rejects_bad_sets() {
        let id = Permutation::identity(3);
        assert!(matches!(
            PermSet::new(
                3,
                vec![id.clone(), id.clone()],
                ConstructionId::Custom,
                None
            ),
            Err(Error::DuplicateMember(_))
        ));
        assert!(matches!(
            PermSet::new(4, vec![id], ConstructionId::Custom, None),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(PermSet::parse("PERMSET 2\nn=1 d=- construction=custom\n0\n").is_err());
        assert!(PermSet::parse("PERMSET 1\nn=2 d=x construction=custom\n").is_err());
        assert!(PermSet::parse("PERMSET 1\nn=2 d=1 construction=custom\n0 0\n").is_err());
    }

    #[test]
    fn construction_ids_round_trip() {
        for id in [
            ConstructionId::Full,
            ConstructionId::BlockConcat { h: 2 },
            ConstructionId::RangeRestricted { h: 3 },
            ConstructionId::InfBall { r: 1 },
            ConstructionId::Media,
            ConstructionId::Extend { t: 6, m: 3, h: 2 },
            ConstructionId::Multiperm { t: 2 },
            ConstructionId::Custom,
        ] {
            assert_eq!(id.to_string().parse::<ConstructionId>().unwrap(), id);
        }
        assert!("extend:t=6".parse::<ConstructionId>().is_err());
    }

    proptest! {
        #[test]
        fn file_round_trip(n in 1usize..6, picks in proptest::collection::vec(any::<bool>(), 120), d in proptest::option::of(0usize..6)) {
            let mut members: Vec<_> = enumerate_sn(n, &Caps::default()).unwrap()
                .zip(picks.iter().cycle())
                .filter(|(_, &keep)| keep)
                .map(|(p, _)| p)
                .collect();
            members.reverse();
            let s = PermSet::new(n, members, ConstructionId::Custom, d).unwrap();
            let back = PermSet::parse(&s.to_text()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
