use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BigRat;

// Bit i of QUAD_RES_N is set iff i is a square modulo N.
const QUAD_RES_64: u64 = 0x0202_0212_0203_0213;
const QUAD_RES_63: u64 = 0x0402_4830_1245_0293;
const QUAD_RES_65: u64 = 0x218a_0198_6601_4613;
const QUAD_RES_11: u64 = 0x23b;

fn residue(n: &BigInt, m: u32) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// `Some(r)` with `r >= 0`, `r^2 = n` when `n` is a perfect square.
pub fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if (QUAD_RES_64 >> residue(n, 64)) & 1 == 0
        || (QUAD_RES_63 >> residue(n, 63)) & 1 == 0
        || (QUAD_RES_65 >> (residue(n, 65) & 63)) & 1 == 0
        || (QUAD_RES_11 >> residue(n, 11)) & 1 == 0
    {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Nonnegative rational square root, if `q` is the square of a rational.
pub fn rational_sqrt_exact(q: &BigRat) -> Option<BigRat> {
    let num = integer_sqrt_exact(q.numer())?;
    let den = integer_sqrt_exact(q.denom())?;
    Some(BigRat::new(num, den))
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    assert!(n.is_positive() && n.is_odd(), "jacobi symbol needs odd positive modulus");
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = residue(&n, 8);
        if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
            result = -result;
        }
        if residue(&a, 4) == 3 && residue(&n, 4) == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Tonelli–Shanks. Returns the smaller of the two roots in `[0, p)`.
pub fn sqrt_mod_p(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if *p == BigInt::from(2) {
        return Some(a);
    }
    if jacobi(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let p1: BigInt = p - 1;
    let s = p1.trailing_zeros().unwrap();
    let q = &p1 >> s;
    let root = if s == 1 {
        a.modpow(&((p + 1) >> 2), p)
    } else {
        let mut z = BigInt::from(2);
        while jacobi(&z, p) != -1 {
            z += 1;
        }
        let mut m = s;
        let mut c = z.modpow(&q, p);
        let mut t = a.modpow(&q, p);
        let mut r = a.modpow(&((&q + 1) >> 1), p);
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = (&t2 * &t2) % p;
                i += 1;
            }
            let b = c.modpow(&(&one << (m - i - 1)), p);
            r = (r * &b) % p;
            c = (&b * &b) % p;
            t = (t * &c) % p;
            m = i;
        }
        r
    };
    let other = p - &root;
    Some(root.min(other))
}

/// Square root of `a` modulo a squarefree `n` given its prime factors, via CRT.
pub fn sqrt_mod_squarefree(a: &BigInt, primes: &[BigInt]) -> Option<BigInt> {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for p in primes {
        let r = sqrt_mod_p(a, p)?;
        // x ≡ x (mod modulus), x ≡ r (mod p)
        let inv = modulus.extended_gcd(p).x.mod_floor(p);
        let k = ((r - &x) * inv).mod_floor(p);
        x += &modulus * k;
        modulus *= p;
    }
    Some(x.mod_floor(&modulus))
}
