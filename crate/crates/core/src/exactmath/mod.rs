//! Exact integer and rational arithmetic plus the number-theoretic
//! primitives (factoring, square roots, rational roots) used by every other
//! module.
//!
//! Integers are [`num_bigint::BigInt`]; rationals are
//! [`num_rational::BigRational`], which keeps the denominator positive and the
//! fraction reduced after every operation.

mod factor;
mod poly;
mod roots;

pub use factor::{factorize, factorize_with, factorize_with_hints, is_probable_prime, FactorLimits, Factorization};
pub use num_bigint::BigInt;
pub use poly::{rational_roots, UniPoly};
pub use roots::{integer_sqrt_exact, jacobi, rational_sqrt_exact, sqrt_mod_p, sqrt_mod_squarefree};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type BigRat = num_rational::BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_rat(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

/// Parses `"m/n"` or `"m"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::ZeroDenominator(s.to_string()));
            }
            Ok(BigRat::new(num, den))
        }
        None => Ok(BigRat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("malformed integer {s:?}")))
}

/// Formats a rational as `"m/n"` with positive `n` (always with a denominator).
pub fn format_rational(q: &BigRat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Least common multiple of the denominators.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a BigRat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// gcd of a list of integers (zero for an empty or all-zero list).
pub fn content<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Writes `n = s^2 * core` with `core` squarefree, returning `(core, s)`.
/// The sign is kept on `core`.
pub fn squarefree_decompose(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if n.is_zero() {
        return Ok((BigInt::zero(), BigInt::one()));
    }
    let f = factorize(n)?;
    let mut core = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut root = BigInt::one();
    for (p, e) in &f.factors {
        if e % 2 == 1 {
            core *= p;
        }
        root *= num_traits::pow(p.clone(), (*e / 2) as usize);
    }
    Ok((core, root))
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(n: &BigInt, p: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// Number of decimal digits of |n|.
pub fn digits(n: &BigInt) -> usize {
    n.abs().to_string().len()
}
