use std::fmt;

use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;

/// A polynomial over GF(2^m), coefficients low-to-high with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldPoly {
    coeffs: Vec<usize>,
}

impl FieldPoly {
    pub fn new(mut coeffs: Vec<usize>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        FieldPoly { coeffs: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[usize] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, field: &FieldSpec, x: usize) -> usize {
        field.eval(&self.coeffs, x)
    }

    /// Coefficients padded with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<usize> {
        let mut c = self.coeffs.clone();
        c.resize(len.max(c.len()), 0);
        c
    }
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&crate::perm::join(self.coeffs.iter().copied()))
    }
}

/// How permutation polynomials are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpMode {
    /// Test every polynomial of bounded degree.
    Exhaustive,
    /// Test only `x^k + ... + c1 x` and expand by `a f + b`, which preserves bijectivity.
    Normalized,
}

/// Lower bound on the number of permutation polynomials of degree at most 4
/// over a field of even size `n`: `(n-1)(2n + n(n^2+2)/3)`.
pub fn pp_count_lower_bound(n: usize) -> u128 {
    let n = n as u128;
    (n - 1) * (2 * n + n * (n * n + 2) / 3)
}

/// True when `x -> f(x)` is a bijection of the field.
pub fn is_permutation_poly(field: &FieldSpec, coeffs: &[usize]) -> bool {
    let n = field.size();
    let mut seen = vec![0u64; n.div_ceil(64)];
    for x in 0..n {
        let y = field.eval(coeffs, x);
        let (w, b) = (y / 64, y % 64);
        if seen[w] >> b & 1 == 1 {
            return false;
        }
        seen[w] |= 1 << b;
    }
    true
}

fn check_degree(field: &FieldSpec, max_deg: usize) -> Result<()> {
    if max_deg == 0 || max_deg + 1 >= field.size() {
        return Err(Error::param(format!(
            "degree cap {max_deg} must satisfy 1 <= cap < n-1 for n={}",
            field.size()
        )));
    }
    Ok(())
}

/// Bijective `x^deg + c_{deg-1} x^{deg-1} + ... + c1 x` for `1 <= deg <= max_deg`.
fn normalized_pps(field: &FieldSpec, max_deg: usize) -> Vec<Vec<usize>> {
    let n = field.size();
    (1..=max_deg)
        .flat_map(|deg| {
            let free = deg - 1;
            let total = n.pow(free as u32);
            (0..total)
                .into_par_iter()
                .filter_map(move |code| {
                    let mut coeffs = vec![0usize; deg + 1];
                    let mut c = code;
                    for slot in coeffs[1..deg].iter_mut() {
                        *slot = c % n;
                        c /= n;
                    }
                    coeffs[deg] = 1;
                    is_permutation_poly(field, &coeffs).then_some(coeffs)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Number of permutation polynomials of degree `<= max_deg`, without listing them.
pub fn count_pp(field: &FieldSpec, max_deg: usize, caps: &Caps) -> Result<u128> {
    check_degree(field, max_deg)?;
    let n = field.size();
    if n > caps.pp_normalized {
        return Err(Error::cap(
            format!("normalized enumeration over GF({n})"),
            caps.pp_normalized as u128,
        ));
    }
    let normalized = normalized_pps(field, max_deg).len() as u128;
    Ok(normalized * n as u128 * (n as u128 - 1))
}

/// All permutation polynomials of degree `<= max_deg`, sorted by coefficient
/// tuple `(c0, c1, ...)`.
pub fn enumerate_pp(
    field: &FieldSpec,
    max_deg: usize,
    mode: PpMode,
    caps: &Caps,
) -> Result<Vec<FieldPoly>> {
    check_degree(field, max_deg)?;
    let n = field.size();
    let mut out = match mode {
        PpMode::Exhaustive => {
            if n > caps.pp_exhaustive {
                return Err(Error::cap(
                    format!("exhaustive enumeration over GF({n})"),
                    caps.pp_exhaustive as u128,
                ));
            }
            let tail = n.pow(max_deg as u32);
            (0..n)
                .into_par_iter()
                .flat_map_iter(|c0| {
                    (0..tail).filter_map(move |code| {
                        let mut coeffs = vec![c0; max_deg + 1];
                        let mut c = code;
                        for slot in coeffs[1..].iter_mut().rev() {
                            *slot = c % n;
                            c /= n;
                        }
                        is_permutation_poly(field, &coeffs).then(|| FieldPoly::new(coeffs))
                    })
                })
                .collect::<Vec<_>>()
        }
        PpMode::Normalized => {
            if n > caps.pp_normalized {
                return Err(Error::cap(
                    format!("normalized enumeration over GF({n})"),
                    caps.pp_normalized as u128,
                ));
            }
            let base = normalized_pps(field, max_deg);
            let total = base.len() * n * (n - 1);
            caps.check_materialize("permutation polynomial list", total as u128)?;
            let mut v = Vec::with_capacity(total);
            for g in &base {
                for a in 1..n {
                    for b in 0..n {
                        let mut coeffs: Vec<usize> = g.iter().map(|&c| field.mul(a, c)).collect();
                        coeffs[0] ^= b;
                        v.push(FieldPoly::new(coeffs));
                    }
                }
            }
            v
        }
    };
    out.sort_unstable();
    Ok(out)
}
