use num_bigint::BigInt;
use num_rational::BigRational;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::perm::{enumerate_sn, factorial, Permutation};
use crate::set::{ConstructionId, PermSet};

/// How the permutations of S_n fall into the cosets of the consecutive-block parity code over Z_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetCensus {
    pub n: usize,
    pub d: usize,
    /// `n^(n/(d+1))`
    pub cosets: usize,
    /// Permutation count per coset, indexed by syndrome (first parity most significant).
    pub histogram: Vec<u64>,
    pub max_count: u64,
    /// Smallest syndrome index attaining `max_count`.
    pub argmax: usize,
}

impl CosetCensus {
    /// `n! / cosets`, the pigeonhole guarantee on `max_count`.
    pub fn pigeonhole_bound(&self) -> BigRational {
        BigRational::new(BigInt::from(factorial(self.n)), BigInt::from(self.cosets))
    }

    pub fn total(&self) -> u64 {
        self.histogram.iter().sum()
    }
}

fn check(n: usize, d: usize, caps: &Caps) -> Result<usize> {
    if d == 0 || d >= n {
        return Err(Error::param(format!(
            "census needs 1 <= d <= n-1, got n={n} d={d}"
        )));
    }
    if !n.is_multiple_of(d + 1) {
        return Err(Error::DivisibilityViolation { n, d1: d + 1 });
    }
    if n > caps.census {
        return Err(Error::cap(
            format!("census over S_{n}"),
            caps.census as u128,
        ));
    }
    Ok(n / (d + 1))
}

/// Syndrome of a word: parity `b` covers information symbols `b*d .. (b+1)*d`
/// and sits at coordinate `n - groups + b`.
fn syndrome(word: &[usize], d: usize, groups: usize) -> usize {
    let n = word.len();
    let info = n - groups;
    (0..groups).fold(0usize, |acc, b| {
        let block: usize = word[b * d..(b + 1) * d].iter().sum();
        let s = (word[info + b] + n * d - block % n) % n;
        acc * n + s
    })
}

/// Classifies every permutation of S_n by its coset syndrome.
pub fn coset_census(n: usize, d: usize, caps: &Caps) -> Result<CosetCensus> {
    let groups = check(n, d, caps)?;
    let cosets = n.pow(groups as u32);
    let mut histogram = vec![0u64; cosets];
    for p in enumerate_sn(n, caps)? {
        histogram[syndrome(p.symbols(), d, groups)] += 1;
    }
    let max_count = *histogram.iter().max().expect("nonempty");
    let argmax = histogram
        .iter()
        .position(|&c| c == max_count)
        .expect("present");
    Ok(CosetCensus {
        n,
        d,
        cosets,
        histogram,
        max_count,
        argmax,
    })
}

/// The permutations lying in the coset with the given syndrome index.
pub fn coset_members(n: usize, d: usize, syndrome_index: usize, caps: &Caps) -> Result<PermSet> {
    let groups = check(n, d, caps)?;
    let members: Vec<Permutation> = enumerate_sn(n, caps)?
        .filter(|p| syndrome(p.symbols(), d, groups) == syndrome_index)
        .collect();
    PermSet::new(n, members, ConstructionId::Custom, Some(d))
}
