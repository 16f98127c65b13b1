//! Arithmetic in GF(2^m), permutation polynomials, and the distinct-symbol
//! Reed-Solomon subcodes built from them.
//!
//! Field elements are identified with the integers `0..2^m` by their bit
//! pattern in the polynomial basis, so `0` and `1` are the additive and
//! multiplicative identities and elements double as permutation symbols.

mod code;
mod poly;

pub use code::{build_distinct_code, DistinctCode};
pub use poly::{count_pp, enumerate_pp, is_permutation_poly, pp_count_lower_bound, FieldPoly, PpMode};

use std::sync::Arc;

use crate::error::{Error, Result};

/// Irreducible moduli used when none is given: bit `i` is the coefficient of `x^i`.
pub fn default_modulus(m: u32) -> Option<u32> {
    Some(match m {
        1 => 0b11,
        2 => 0b111,
        3 => 0b1011,      // x^3 + x + 1
        4 => 0b1_0011,    // x^4 + x + 1
        5 => 0b10_0101,   // x^5 + x^2 + 1
        6 => 0b100_0011,  // x^6 + x + 1
        7 => 0b1000_0011, // x^7 + x + 1
        8 => 0x11b,       // x^8 + x^4 + x^3 + x + 1
        _ => return None,
    })
}

fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

/// Remainder of carry-less division over GF(2).
fn poly_mod(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// True when `modulus` has degree `m` and no factor of degree `1..=m/2`.
pub fn is_irreducible(modulus: u32, m: u32) -> bool {
    if m == 0 || modulus == 0 || degree(modulus) != m {
        return false;
    }
    (1..=m / 2).all(|k| ((1u32 << k)..(1u32 << (k + 1))).all(|g| poly_mod(modulus, g) != 0))
}

/// GF(2^m) for `1 <= m <= 16`.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    m: u32,
    modulus: u32,
    table: Option<Arc<Vec<u16>>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    pub fn new(m: u32) -> Result<Self> {
        let modulus = default_modulus(m)
            .ok_or_else(|| Error::param(format!("no default modulus for m={m}; supply one")))?;
        Self::with_modulus(m, modulus)
    }

    pub fn with_modulus(m: u32, modulus: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::param(format!(
                "extension degree m={m} outside 1..=16"
            )));
        }
        if !is_irreducible(modulus, m) {
            return Err(Error::ReducibleModulus(modulus));
        }
        let mut f = FieldSpec {
            m,
            modulus,
            table: None,
        };
        if m <= 8 {
            let n = f.size();
            let mut t = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = f.clmul(a, b) as u16;
                }
            }
            f.table = Some(Arc::new(t));
        }
        Ok(f)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        a ^ b
    }

    fn clmul(&self, mut a: usize, mut b: usize) -> usize {
        let mut acc = 0usize;
        let top = 1usize << self.m;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus as usize;
            }
        }
        acc
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[(a << self.m) | b] as usize,
            None => self.clmul(a, b),
        }
    }

    pub fn pow(&self, mut a: usize, mut e: u64) -> usize {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: usize) -> Result<usize> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() as u64 - 2))
    }

    pub fn div(&self, a: usize, b: usize) -> Result<usize> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Horner evaluation of coefficients given low-to-high.
    pub fn eval(&self, coeffs: &[usize], x: usize) -> usize {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}
