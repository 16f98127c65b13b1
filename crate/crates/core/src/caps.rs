//! Enumeration and search limits.
//!
//! Every exhaustive routine in the crate consults a [`Caps`] value instead of a
//! hard-coded constant. The CLI reads overrides from `PERMLOC_CAP`.

use crate::error::{Error, Result};

/// Limits applied by enumerations, materializations and searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` for which all of S_n may be enumerated.
    pub sn: usize,
    /// Largest `n` accepted by the coset census.
    pub census: usize,
    /// Largest number of members a constructed set may materialize.
    pub materialize: usize,
    /// Largest multi-permutation length `2l` enumerated exhaustively.
    pub multiperm_len: usize,
    /// Largest number of candidate helper sets `verify_locality` may test per position.
    pub helper_sets: u64,
    /// Node budget for the maximal-set search.
    pub search_nodes: u64,
    /// Largest `n` accepted by the maximal-set search.
    pub search_n: usize,
    /// Largest field size for brute-force polynomial enumeration.
    pub pp_exhaustive: usize,
    /// Largest field size for normalized polynomial enumeration.
    pub pp_normalized: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            sn: 10,
            census: 7,
            materialize: 5_000_000,
            multiperm_len: 14,
            helper_sets: 1_000_000,
            search_nodes: 200_000_000,
            search_n: 5,
            pp_exhaustive: 16,
            pp_normalized: 256,
        }
    }
}

impl Caps {
    /// Applies overrides of the form `key=value[,key=value...]` on top of `self`.
    ///
    /// A bare integer overrides `materialize`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(v) = spec.parse::<usize>() {
            self.materialize = v;
            return Ok(self);
        }
        for item in spec.split(',') {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::param(format!("cap override `{item}` is not key=value")))?;
            let value: u64 = value.trim().parse().map_err(|_| {
                Error::param(format!("cap override `{item}` has a non-integer value"))
            })?;
            let as_usize =
                usize::try_from(value).map_err(|_| Error::param("cap value too large"))?;
            match key.trim() {
                "sn" => self.sn = as_usize,
                "census" => self.census = as_usize,
                "materialize" => self.materialize = as_usize,
                "multiperm_len" => self.multiperm_len = as_usize,
                "helper_sets" => self.helper_sets = value,
                "search_nodes" => self.search_nodes = value,
                "search_n" => self.search_n = as_usize,
                "pp_exhaustive" => self.pp_exhaustive = as_usize,
                "pp_normalized" => self.pp_normalized = as_usize,
                other => return Err(Error::param(format!("unknown cap `{other}`"))),
            }
        }
        Ok(self)
    }

    pub(crate) fn check_materialize(&self, what: &str, count: u128) -> Result<()> {
        if count > self.materialize as u128 {
            Err(Error::cap(
                format!("{what} size {count}"),
                self.materialize as u128,
            ))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let c = Caps::default().with_overrides("sn=11, census=8").unwrap();
        assert_eq!(c.sn, 11);
        assert_eq!(c.census, 8);
        assert_eq!(
            Caps::default().with_overrides("42").unwrap().materialize,
            42
        );
        assert!(Caps::default().with_overrides("bogus=1").is_err());
        assert!(Caps::default().with_overrides("sn").is_err());
    }
}
