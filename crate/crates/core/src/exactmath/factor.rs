use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::error::{Error, Result};

const TRIAL_BOUND: u32 = 1_000_000;

/// Above this bound Miller–Rabin switches from the fixed witness set to random witnesses.
const DETERMINISTIC_MR_BOUND: &str = "3317044064679887385961981";
const MR_WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const RANDOM_MR_ROUNDS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorLimits {
    /// Largest composite cofactor (in decimal digits) handed to Pollard rho.
    pub max_digits: usize,
    /// Iteration budget for each rho attempt.
    pub rho_iterations: u64,
}

impl Default for FactorLimits {
    fn default() -> Self {
        FactorLimits { max_digits: 60, rho_iterations: 1 << 21 }
    }
}

static MAX_DIGITS: AtomicUsize = AtomicUsize::new(60);
static RHO_ITERATIONS: AtomicU64 = AtomicU64::new(1 << 21);

impl FactorLimits {
    /// Process-wide limits used by [`factorize`].
    pub fn current() -> Self {
        FactorLimits {
            max_digits: MAX_DIGITS.load(Ordering::Relaxed),
            rho_iterations: RHO_ITERATIONS.load(Ordering::Relaxed),
        }
    }

    pub fn install(self) {
        MAX_DIGITS.store(self.max_digits, Ordering::Relaxed);
        RHO_ITERATIONS.store(self.rho_iterations, Ordering::Relaxed);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub negative: bool,
    /// Distinct primes in ascending order with their exponents.
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn product(&self) -> BigInt {
        let mut n = BigInt::one();
        for (p, e) in &self.factors {
            n *= num_traits::pow(p.clone(), *e as usize);
        }
        if self.negative {
            -n
        } else {
            n
        }
    }

    fn from_primes(negative: bool, mut primes: Vec<BigInt>) -> Self {
        primes.sort();
        let mut factors: Vec<(BigInt, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { negative, factors }
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Factors with the process-wide limits.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with(n, &FactorLimits::current())
}

/// Trial division to 10^6, then Pollard rho (Brent) on the cofactor.
pub fn factorize_with(n: &BigInt, limits: &FactorLimits) -> Result<Factorization> {
    assert!(!n.is_zero(), "factorize(0)");
    let negative = n.is_negative();
    let mut m = n.abs();
    let mut primes = Vec::new();
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            primes.push(pb.clone());
            m = q;
        }
    }
    if !m.is_one() {
        split_cofactor(m, limits, &mut primes)?;
    }
    Ok(Factorization::from_primes(negative, primes))
}

/// Factors `n` after first dividing out the primes of the (small) `hints`.
///
/// The hints need not divide `n`; they only seed the prime list so that a
/// large `n` built from known small pieces never reaches Pollard rho.
pub fn factorize_with_hints(n: &BigInt, hints: &[BigInt], limits: &FactorLimits) -> Result<Factorization> {
    assert!(!n.is_zero(), "factorize(0)");
    let negative = n.is_negative();
    let mut m = n.abs();
    let mut primes = Vec::new();
    let mut seeds: Vec<BigInt> = Vec::new();
    for h in hints.iter().filter(|h| !h.is_zero()) {
        seeds.extend(factorize_with(h, limits)?.factors.into_iter().map(|(p, _)| p));
    }
    seeds.sort();
    seeds.dedup();
    for p in seeds {
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            primes.push(p.clone());
            m = q;
        }
    }
    if !m.is_one() {
        let rest = factorize_with(&m, limits)?;
        for (p, e) in rest.factors {
            primes.extend(std::iter::repeat(p).take(e as usize));
        }
    }
    Ok(Factorization::from_primes(negative, primes))
}

fn split_cofactor(m: BigInt, limits: &FactorLimits, out: &mut Vec<BigInt>) -> Result<()> {
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            out.push(m);
            continue;
        }
        if let Some(r) = perfect_power_root(&m) {
            // m = r^k; push k copies by repeated division
            let mut rest = m.clone();
            while (&rest % &r).is_zero() {
                rest /= &r;
                stack.push(r.clone());
            }
            stack.push(rest);
            continue;
        }
        let digits = m.to_string().len();
        if digits > limits.max_digits {
            return Err(Error::FactorizationTooHard { digits });
        }
        let d = find_divisor(&m, limits).ok_or(Error::FactorizationTooHard { digits })?;
        stack.push(&m / &d);
        stack.push(d);
    }
    Ok(())
}

fn perfect_power_root(m: &BigInt) -> Option<BigInt> {
    let bits = m.bits();
    for k in 2..=bits.min(64) as u32 {
        let r = m.nth_root(k);
        if r > BigInt::one() && num_traits::pow(r.clone(), k as usize) == *m {
            return Some(r);
        }
    }
    None
}

fn find_divisor(m: &BigInt, limits: &FactorLimits) -> Option<BigInt> {
    if let Some(small) = m.to_u64() {
        for c in 1..16u64 {
            if let Some(d) = rho_u64(small, c, limits.rho_iterations) {
                return Some(BigInt::from(d));
            }
        }
        return None;
    }
    for c in 1..8u32 {
        if let Some(d) = rho_big(m, &BigInt::from(c), limits.rho_iterations) {
            return Some(d);
        }
    }
    None
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn rho_u64(n: u64, c: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (0u64, 0u64);
    let m = 128u64;
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
        }
        steps += r;
        r *= 2;
        if steps > budget {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigInt, c: &BigInt, budget: u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let f = |x: &BigInt| (x * x + c) % n;
    let mut y = BigInt::from(2);
    let mut r = 1u64;
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut x = BigInt::zero();
    let mut ys = BigInt::zero();
    let m = 128u64;
    let mut steps = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        steps += r;
        r *= 2;
        if steps > budget {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn mr_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mr_round(n: &BigInt, d: &BigInt, s: u64, a: &BigInt) -> bool {
    let n1 = n - 1;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Miller–Rabin: deterministic below 3.3·10^24, random witnesses above.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return mr_u64(small);
    }
    for p in MR_WITNESSES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n1: BigInt = n - 1;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let bound: BigInt = DETERMINISTIC_MR_BOUND.parse().unwrap();
    if *n < bound {
        return MR_WITNESSES.iter().all(|&a| mr_round(n, &d, s, &BigInt::from(a)));
    }
    // Seeded from n so repeated calls agree.
    let seed = n.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |h, w| h.rotate_left(7) ^ w);
    let mut rng = StdRng::seed_from_u64(seed);
    let upper: BigUint = (n - 2u32).to_biguint().unwrap();
    (0..RANDOM_MR_ROUNDS).all(|_| {
        let a = BigInt::from(rng.gen_biguint_range(&BigUint::from(2u32), &upper));
        mr_round(n, &d, s, &a)
    })
}
