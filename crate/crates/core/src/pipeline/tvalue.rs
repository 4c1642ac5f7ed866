use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{parse_int, BigInt, BigRat};

/// `t = m/n` in lowest terms with `n > 0`, `m, n` of opposite parity and `m/n > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TValue {
    m: BigInt,
    n: BigInt,
}

impl TValue {
    pub fn new(m: BigInt, n: BigInt) -> Result<Self> {
        let shown = format!("{m}/{n}");
        let bad = |why: &str| Err(Error::InvalidT(shown.clone(), why.into()));
        if !n.is_positive() {
            return bad("denominator must be positive");
        }
        if !m.gcd(&n).is_one() {
            return bad("not in lowest terms");
        }
        if m <= n {
            return bad("t must exceed 1");
        }
        if m.is_odd() == n.is_odd() {
            let suggestion = normalize_t(&m, &n).map(|t| format!("; use {t}")).unwrap_or_default();
            return Err(Error::InvalidT(shown, format!("m and n are both odd{suggestion}")));
        }
        Ok(TValue { m, n })
    }

    pub fn from_ints(m: i64, n: i64) -> Result<Self> {
        Self::new(m.into(), n.into())
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn to_rational(&self) -> BigRat {
        BigRat::new(self.m.clone(), self.n.clone())
    }
}

impl fmt::Display for TValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

impl FromStr for TValue {
    type Err = Error;

    /// Strict `m/n`; both-odd input is rejected with the normalized value suggested.
    fn from_str(s: &str) -> Result<Self> {
        let (m, n) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::InvalidT(s.into(), "expected m/n".into()))?;
        Self::new(parse_int(m)?, parse_int(n)?)
    }
}

/// Opposite-parity `(m, n)` pass through; both odd maps to `(m+n, m-n)` reduced.
pub fn normalize_t(m: &BigInt, n: &BigInt) -> Result<TValue> {
    let (m, n) = if n.is_negative() { (-m, -n) } else { (m.clone(), n.clone()) };
    if n.is_zero() || !m.gcd(&n).is_one() {
        return Err(Error::InvalidT(format!("{m}/{n}"), "not in lowest terms".into()));
    }
    if m.abs() <= n {
        return Err(Error::InvalidT(format!("{m}/{n}"), "|t| must exceed 1".into()));
    }
    if m.is_odd() && n.is_odd() {
        let (p, q) = (&m + &n, &m - &n);
        let g = p.gcd(&q);
        let (p, q) = (p / &g, q / &g);
        return TValue::new(p, q);
    }
    TValue::new(m, n)
}

/// `150 | n`, or `25(6E+1) | (m-n)` for some integer `E` together with `6 | n`.
///
/// Any `25(6E+1)` dividing `m - n` forces `25 | (m - n)`, and `E = 0` gives
/// the converse, so the existential reduces to `25 | (m - n)`.
pub fn conjecture_filter(t: &TValue) -> bool {
    let (m, n) = (&t.m, &t.n);
    let divides = |d: i64, x: &BigInt| (x % BigInt::from(d)).is_zero();
    divides(150, n) || (divides(25, &(m - n)) && divides(6, n))
}

/// Every `TValue` with `m + n <= max_sum` and `n >= 2`, ascending by `m + n`,
/// then by `m`.
pub fn enumerate_t(max_sum: u64) -> impl Iterator<Item = TValue> {
    (3..=max_sum).flat_map(|s| {
        ((s / 2 + 1)..=s.saturating_sub(2)).filter_map(move |m| {
            let n = s - m;
            (n >= 2 && m.gcd(&n) == 1 && (m + n) % 2 == 1).then(|| TValue { m: m.into(), n: n.into() })
        })
    })
}
