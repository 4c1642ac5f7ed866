//! Shrinking a known zero of a diagonal ternary form.
//!
//! For `a x^2 + b y^2 + c z^2` with squarefree, pairwise coprime coefficients
//! and a primitive zero `P`, the vectors congruent to multiples of `P` modulo
//! each coefficient form a lattice of index `|abc|` on which the form takes
//! values divisible by `abc`. After LLL reduction for the weights
//! `(|a|, |b|, |c|)` the form restricted to the lattice has bounded entries, so
//! a zero with small coordinates shows up among small combinations of the
//! reduced basis.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ternary::{primitive, squarefree};
use crate::error::Result;
use crate::exactmath::{BigInt, BigRat};

const SPAN: i64 = 3;

/// A zero of `a x^2 + b y^2 + c z^2` no larger (in max-norm) than `sol`,
/// usually close to the Holzer bound. Ties are broken lexicographically.
pub(crate) fn reduce_solution(a: &BigInt, b: &BigInt, c: &BigInt, sol: &[BigInt; 3]) -> Result<[BigInt; 3]> {
    let (coef, scale) = normalize(a, b, c)?;
    let local: [BigRat; 3] = std::array::from_fn(|i| BigRat::from_integer(sol[i].clone()) / &scale[i]);
    let p = primitive(&local);
    let Some(mut basis) = lattice_basis(&coef, &p) else {
        return Ok(sol.clone());
    };
    let weights = coef.clone().map(|x| x.abs());
    lll(&mut basis, &weights);

    let mut best = sol.clone();
    for u0 in -SPAN..=SPAN {
        for u1 in -SPAN..=SPAN {
            for u2 in -SPAN..=SPAN {
                if u0 == 0 && u1 == 0 && u2 == 0 {
                    continue;
                }
                let u = [BigInt::from(u0), BigInt::from(u1), BigInt::from(u2)];
                let v: [BigInt; 3] = std::array::from_fn(|k| (0..3).map(|i| &u[i] * &basis[i][k]).sum());
                let q: BigInt = (0..3).map(|k| &coef[k] * &v[k] * &v[k]).sum();
                if !q.is_zero() {
                    continue;
                }
                let back: [BigRat; 3] = std::array::from_fn(|k| BigRat::from_integer(v[k].clone()) * &scale[k]);
                let cand = primitive(&back).map(|x| x.abs());
                if better(&cand, &best) {
                    best = cand;
                }
            }
        }
    }
    Ok(best)
}

fn better(x: &[BigInt; 3], y: &[BigInt; 3]) -> bool {
    let mx = x.iter().max().unwrap();
    let my = y.iter().map(|v| v.abs()).max().unwrap();
    mx < &my || (mx == &my && x < &y.clone().map(|v| v.abs()))
}

/// Squarefree, pairwise coprime coefficients and per-coordinate scales with
/// `x_original = scale * x_normalized` (projectively).
fn normalize(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<([BigInt; 3], [BigRat; 3])> {
    let mut coef = [a.clone(), b.clone(), c.clone()];
    let mut scale: [BigRat; 3] = std::array::from_fn(|_| BigRat::one());
    loop {
        let g = coef.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        for x in coef.iter_mut() {
            *x /= &g;
        }
        for i in 0..3 {
            let (core, root) = squarefree(&coef[i])?;
            coef[i] = core;
            scale[i] /= BigRat::from_integer(root);
        }
        let mut changed = false;
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let g = coef[i].gcd(&coef[j]);
            if !g.is_one() {
                // g divides the third term, so z = g z'
                coef[i] /= &g;
                coef[j] /= &g;
                coef[k] *= &g;
                scale[k] *= BigRat::from_integer(g);
                changed = true;
            }
        }
        if !changed {
            return Ok((coef, scale));
        }
    }
}

fn inv_mod(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = x.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Rows of a basis of `{v : v ≡ λ P mod a, b, c}`.
fn lattice_basis(coef: &[BigInt; 3], p: &[BigInt; 3]) -> Option<[[BigInt; 3]; 3]> {
    let [a, b, c] = coef.clone().map(|x| x.abs());
    let [x0, y0, z0] = p.clone();
    // y ≡ la z (mod a), x ≡ lb z (mod b), x ≡ lc y (mod c)
    let la = (&y0 * inv_mod(&z0, &a)?).mod_floor(&a);
    let lb = (&x0 * inv_mod(&z0, &b)?).mod_floor(&b);
    let lc = (&x0 * inv_mod(&y0, &c)?).mod_floor(&c);
    // CRT idempotents for b, c
    let eb = &c * inv_mod(&c, &b)?;
    let ec = &b * inv_mod(&b, &c)?;
    let bc = &b * &c;
    let v1 = [bc.clone(), BigInt::zero(), BigInt::zero()];
    let v2 = [(&ec * &lc * &a).mod_floor(&bc), a.clone(), BigInt::zero()];
    let v3 = [(&eb * &lb + &ec * &lc * &la).mod_floor(&bc), la, BigInt::one()];
    Some([v1, v2, v3])
}

fn dot(u: &[BigInt; 3], v: &[BigInt; 3], w: &[BigInt; 3]) -> BigInt {
    (0..3).map(|k| &w[k] * &u[k] * &v[k]).sum()
}

fn round(q: &BigRat) -> BigInt {
    (q + BigRat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

fn gram_schmidt(basis: &[[BigInt; 3]; 3], w: &[BigInt; 3]) -> ([[BigRat; 3]; 3], [BigRat; 3]) {
    let mut mu: [[BigRat; 3]; 3] = Default::default();
    let mut norms: [BigRat; 3] = Default::default();
    let mut star: Vec<[BigRat; 3]> = Vec::new();
    for i in 0..3 {
        let mut s: [BigRat; 3] = std::array::from_fn(|k| BigRat::from_integer(basis[i][k].clone()));
        for j in 0..i {
            let num: BigRat = (0..3).map(|k| BigRat::from_integer(&w[k] * &basis[i][k]) * &star[j][k]).sum();
            mu[i][j] = num / &norms[j];
            for k in 0..3 {
                let d = &mu[i][j] * &star[j][k];
                s[k] -= d;
            }
        }
        norms[i] = (0..3).map(|k| BigRat::from_integer(w[k].clone()) * &s[k] * &s[k]).sum();
        star.push(s);
    }
    (mu, norms)
}

fn lll(basis: &mut [[BigInt; 3]; 3], w: &[BigInt; 3]) {
    let delta = BigRat::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    while k < 3 {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(basis, w);
            let q = round(&mu[k][j]);
            if !q.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(bj.iter()) {
                    *x -= &q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(basis, w);
        if norms[k] >= (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    debug_assert!(basis.iter().all(|v| dot(v, v, w).is_positive()));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn shrinks_a_scaled_up_zero() {
        // x^2 + y^2 - 2 z^2 has (1, 1, 1); (7, 17, 13) is a larger zero
        let r = reduce_solution(&b(1), &b(1), &b(-2), &[b(7), b(17), b(13)]).unwrap();
        assert_eq!(r, [b(1), b(1), b(1)]);
    }

    #[test]
    fn holzer_size_for_large_coefficients() {
        // coefficients shaped like the cleared conic at t = 511/450
        let (m, n) = (511i64, 450i64);
        let a = b(1);
        let bb = b(-6 * (m * m - n * n));
        let c = -(b(m * m - 7 * n * n) * b(m * m + n * n));
        let Some(sol) = crate::quadform::legendre_solve(&a, &bb, &c).unwrap() else { return };
        let bound = [&bb * &c, &a * &c, &a * &bb].map(|v| num_integer::Roots::sqrt(&v.abs()) * 2 + 1);
        for k in 0..3 {
            assert!(sol[k] <= bound[k], "{sol:?} vs {bound:?}");
        }
    }
}
