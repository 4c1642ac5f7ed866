use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::padic::zp_soluble;
use super::BinaryQuartic;
use crate::error::{Error, Result};
use crate::exactmath::{factorize_with_hints, jacobi, valuation, BigInt, BigRat, FactorLimits, UniPoly};

/// Whether `Y^2 = g(X)` has a point over the reals and every `Q_p`.
pub fn is_locally_soluble(q: &BinaryQuartic) -> Result<bool> {
    is_locally_soluble_with_hints(q, &[])
}

/// As [`is_locally_soluble`], with integers whose prime factors are likely to
/// divide the discriminant; they let the factorization skip most of the work.
pub fn is_locally_soluble_with_hints(q: &BinaryQuartic, hints: &[BigInt]) -> Result<bool> {
    if q.is_degenerate() {
        return Err(Error::DegenerateQuartic);
    }
    if !real_soluble(q) {
        return Ok(false);
    }
    let (g, _) = q.integral_model();
    let integral = BinaryQuartic::new(g.clone().map(BigRat::from_integer)).expect("nonzero");
    let disc = integral.discriminant().to_integer();
    let mut primes = vec![BigInt::from(2), BigInt::from(3)];
    let limits = FactorLimits::current();
    for n in [&disc, &g[0]] {
        if !n.is_zero() {
            primes.extend(factorize_with_hints(n, hints, &limits)?.primes().cloned());
        }
    }
    primes.sort();
    primes.dedup();
    for p in primes {
        if !p_adic_soluble(&g, &p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Real points exist iff `g` is positive somewhere on `R ∪ {∞}` or has a real root.
pub fn real_soluble(q: &BinaryQuartic) -> bool {
    if q.a().is_positive() || !q.e().is_negative() {
        return true;
    }
    let f = q.poly();
    match f.degree() {
        Some(d) if d % 2 == 1 => true,
        _ => real_root_count(&f) > 0,
    }
}

/// Distinct real roots by Sturm's theorem.
fn real_root_count(f: &UniPoly) -> usize {
    let mut seq = vec![f.clone(), f.derivative()];
    while let Some(last) = seq.last() {
        if last.is_zero() {
            seq.pop();
            break;
        }
        let prev = &seq[seq.len() - 2];
        let r = prev.div_rem(last).1;
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    let sign_changes = |signs: Vec<i32>| {
        let nz: Vec<i32> = signs.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |x: &BigRat| if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 };
    let at_pos: Vec<i32> = seq.iter().map(|p| sign(p.leading().unwrap())).collect();
    let at_neg: Vec<i32> = seq
        .iter()
        .map(|p| {
            let s = sign(p.leading().unwrap());
            if p.degree().unwrap() % 2 == 1 { -s } else { s }
        })
        .collect();
    sign_changes(at_neg) - sign_changes(at_pos)
}

/// `Y^2 = g(X)` (integer coefficients, `A` first) has a `Q_p` point.
fn p_adic_soluble(g: &[BigInt; 5], p: &BigInt) -> bool {
    // an even power of p in the content does not change square classes
    let k = g.iter().filter_map(|c| valuation(c, p)).min().unwrap_or(0);
    let strip = num_traits::pow(p.clone(), (k - k % 2) as usize);
    let g: Vec<BigInt> = g.iter().map(|c| c / &strip).collect();
    let f: Vec<BigInt> = g.iter().rev().cloned().collect();
    let rev: Vec<BigInt> = g.to_vec();
    if *p != BigInt::from(2) {
        // infinity: X = 1/(p z) with z in Z_p
        let rev_scaled: Vec<BigInt> = rev.iter().enumerate().map(|(i, c)| c * num_traits::pow(p.clone(), i)).collect();
        return zp_soluble(&f, p) || zp_soluble(&rev_scaled, p);
    }
    disc_soluble(&f, p, &BigInt::zero(), 0) || disc_soluble(&rev, p, &BigInt::zero(), 1)
}

fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative(f: &[BigInt]) -> Vec<BigInt> {
    f.iter().enumerate().skip(1).map(|(i, c)| c * i).collect()
}

/// `v` is a nonzero square in `Q_p`.
fn is_p_adic_square(v: &BigInt, p: &BigInt) -> bool {
    let Some(k) = valuation(v, p) else { return true };
    if k % 2 == 1 {
        return false;
    }
    let u = v / num_traits::pow(p.clone(), k as usize);
    if *p == BigInt::from(2) {
        u.mod_floor(&BigInt::from(8)).is_one()
    } else {
        jacobi(&u, p) == 1
    }
}

/// Some `x` in `x0 + p^nu Z_p` makes `f(x)` a square in `Q_p`.
///
/// On the disc, `f(x) ≡ f(x0) mod p^min(mu+nu, 2nu)` with `mu = v(f'(x0))`, and
/// the square class of `f(x0)` is fixed modulo `p^(lambda+1)` (`p^(lambda+3)`
/// at 2). Either that settles the disc, Hensel's lemma gives a root inside it,
/// or it is split into `p` subdiscs.
fn disc_soluble(f: &[BigInt], p: &BigInt, x0: &BigInt, nu: u32) -> bool {
    let fx = eval(f, x0);
    if fx.is_zero() || is_p_adic_square(&fx, p) {
        return true;
    }
    let lambda = valuation(&fx, p).unwrap();
    let mu = valuation(&eval(&derivative(f), x0), p);
    if let Some(mu) = mu {
        if lambda > 2 * mu && lambda - mu >= nu {
            return true;
        }
    }
    let e = if *p == BigInt::from(2) { 3 } else { 1 };
    let fixed = match mu {
        Some(mu) => (mu + nu).min(2 * nu),
        None => 2 * nu,
    };
    if fixed >= lambda + e {
        return false;
    }
    let step = num_traits::pow(p.clone(), nu as usize);
    let count = p.to_u64().expect("local primes fit in u64");
    (0..count).any(|r| disc_soluble(f, p, &(x0 + &step * r), nu + 1))
}
