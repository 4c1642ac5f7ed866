use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{content, lcm_denominators, BigRat};

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRat::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRat) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Self::new(vec![BigRat::zero(), BigRat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigRat {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn leading(&self) -> Option<&BigRat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs.iter().rev().fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: &BigRat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRat::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(BigRat::one()), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].clone() / lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[top - dd + i] -= &c * d;
                }
                quot[top - dd] = c;
            }
            rem.pop();
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    /// Integer coefficients of the primitive form (positive leading coefficient),
    /// lowest degree first. Empty for the zero polynomial.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = lcm_denominators(&self.coeffs);
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &d).to_integer()).collect();
        let mut g = content(&ints);
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*X")?,
                _ => write!(f, "({c})*X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// All rational roots of `f`, each once, ascending.
///
/// Works on the squarefree primitive integer form: roots are found modulo a
/// small prime `l` that keeps the reduction squarefree and of full degree,
/// Hensel-lifted past the Cauchy bound, and reconstructed as `c / lead`.
/// Nothing here factors the coefficients, so the cost grows only polynomially
/// with their size.
pub fn rational_roots(f: &UniPoly) -> Vec<BigRat> {
    assert!(!f.is_zero(), "rational_roots of the zero polynomial");
    let mut roots = Vec::new();
    let mut g = f.clone();
    if g.coeff(0).is_zero() {
        roots.push(BigRat::zero());
        let shift = g.coeffs.iter().take_while(|c| c.is_zero()).count();
        g = UniPoly::new(g.coeffs[shift..].to_vec());
    }
    let g = {
        let d = g.gcd(&g.derivative());
        g.div_rem(&d).0
    };
    match g.degree() {
        None | Some(0) => {}
        Some(1) => roots.push(-g.coeff(0) / g.coeff(1)),
        Some(_) => roots.extend(lifted_roots(&g.primitive_integer_coeffs())),
    }
    roots.sort();
    roots.dedup();
    roots
}

fn lifted_roots(ints: &[BigInt]) -> Vec<BigRat> {
    let lead = ints.last().unwrap().clone();
    let bound = ints.iter().map(|c| c.abs()).max().unwrap() + lead.abs();
    let ell = choose_prime(ints);
    let small: Vec<u64> = ints.iter().map(|c| c.mod_floor(&BigInt::from(ell)).to_u64().unwrap()).collect();
    let residues: Vec<u64> = (0..ell).filter(|&x| eval_u64(&small, x, ell) == 0).collect();
    if residues.is_empty() {
        return Vec::new();
    }
    let ell_b = BigInt::from(ell);
    let mut modulus = ell_b.clone();
    let mut precision = 1u32;
    let mut lifts: Vec<BigInt> = residues.iter().map(|&r| BigInt::from(r)).collect();
    let df: Vec<BigInt> = ints.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
    while modulus <= &bound * 2 {
        precision *= 2;
        modulus = num_traits::pow(ell_b.clone(), precision as usize);
        for r in lifts.iter_mut() {
            // Newton step modulo l^precision
            let fr = eval_mod(ints, r, &modulus);
            let dfr = eval_mod(&df, r, &modulus);
            let inv = dfr.extended_gcd(&modulus).x;
            *r = (&*r - fr * inv).mod_floor(&modulus);
        }
    }
    let half = &modulus >> 1;
    let poly = UniPoly::new(ints.iter().map(|c| BigRat::from_integer(c.clone())).collect());
    lifts
        .into_iter()
        .filter_map(|r| {
            let mut c = (&lead * r).mod_floor(&modulus);
            if c > half {
                c -= &modulus;
            }
            let cand = BigRat::new(c, lead.clone());
            poly.eval(&cand).is_zero().then_some(cand)
        })
        .collect()
}

fn eval_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn eval_u64(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Smallest odd prime not dividing the leading coefficient for which the
/// reduction stays squarefree.
fn choose_prime(ints: &[BigInt]) -> u64 {
    let mut p = 3u64;
    loop {
        if is_small_prime(p) {
            let pb = BigInt::from(p);
            let red: Vec<u64> = ints.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
            if *red.last().unwrap() != 0 && squarefree_mod_p(&red, p) {
                return p;
            }
        }
        p += 2;
    }
}

fn is_small_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    let (mut b, mut e, mut r) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn trim_u64(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn squarefree_mod_p(f: &[u64], p: u64) -> bool {
    let mut a = f.to_vec();
    let mut b: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect();
    trim_u64(&mut a);
    trim_u64(&mut b);
    if b.is_empty() {
        return false;
    }
    while !b.is_empty() {
        // a mod b
        let inv = inv_mod_u64(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let c = a.last().unwrap() * inv % p;
            let off = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[off + i] = (a[off + i] + p - c * bc % p) % p;
            }
            trim_u64(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() == 1
}
