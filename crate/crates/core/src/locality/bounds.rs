use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Upper and lower bounds on the largest subset of S_n with locality `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub d: usize,
    /// `n! / ceil(n/(d+1))!`
    pub upper_general: BigUint,
    /// `n!!`, only for `d = 1`.
    pub upper_d1: Option<BigUint>,
    /// `n! / n^(n/(d+1))`
    pub lower_existential: BigRational,
    /// Set when `d+1` does not divide `n` and the exponent was rounded up.
    pub adapted: bool,
    /// `d/(d+1)`, the rate ceiling of a systematic LRC.
    pub lrc_rate_bound: BigRational,
    /// `log|S| / log n!` for a supplied set size.
    pub rate_of: Option<f64>,
}

impl BoundReport {
    /// Attaches the rate of a set of the given size.
    pub fn with_size(mut self, size: &BigUint) -> Self {
        self.rate_of = Some(rate(size, self.n));
        self
    }

    /// The tightest upper bound available.
    pub fn best_upper(&self) -> &BigUint {
        match &self.upper_d1 {
            Some(u) if u < &self.upper_general => u,
            _ => &self.upper_general,
        }
    }
}

fn factorial_big(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `n!! = n (n-2) (n-4) ...` down to 1 or 2.
pub fn double_factorial(n: usize) -> BigUint {
    (0..n.div_ceil(2)).fold(BigUint::one(), |acc, i| acc * (n - 2 * i))
}

/// Evaluates all bound formulas for `1 <= d <= n-1` in exact arithmetic.
pub fn bounds(n: usize, d: usize) -> Result<BoundReport> {
    if n < 2 || d == 0 || d >= n {
        return Err(Error::param(format!(
            "bounds need 1 <= d <= n-1, got n={n} d={d}"
        )));
    }
    let nfact = factorial_big(n);
    let groups = n.div_ceil(d + 1);
    let upper_general = &nfact / factorial_big(groups);
    let upper_d1 = (d == 1).then(|| double_factorial(n));
    let adapted = !n.is_multiple_of(d + 1);
    let exponent = if adapted { groups } else { n / (d + 1) };
    let lower_existential = BigRational::new(
        BigInt::from(nfact),
        BigInt::from(BigUint::from(n).pow(exponent as u32)),
    );
    let upper_q = BigRational::from_integer(BigInt::from(upper_general.clone()));
    if lower_existential > upper_q {
        return Err(Error::param(format!(
            "lower bound exceeds upper bound at n={n} d={d}"
        )));
    }
    Ok(BoundReport {
        n,
        d,
        upper_general,
        upper_d1,
        lower_existential,
        adapted,
        lrc_rate_bound: BigRational::new(BigInt::from(d), BigInt::from(d + 1)),
        rate_of: None,
    })
}

/// Natural log of an arbitrarily large integer.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `log|S| / log n!`; a set in S_1 has rate 1.
pub fn rate(size: &BigUint, n: usize) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    ln_big(size) / ln_factorial(n)
}
