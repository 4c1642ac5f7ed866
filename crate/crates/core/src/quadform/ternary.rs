use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::reduce::reduce_solution;
use crate::error::Result;
use crate::exactmath::{
    content, factorize, jacobi, lcm_denominators, sqrt_mod_squarefree, valuation, BigInt, BigRat,
};

/// A place of Q: the real place or a finite prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Real,
    Prime(BigInt),
}

/// Symmetric ternary quadratic form `x^T M x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryForm {
    m: [[BigRat; 3]; 3],
}

/// Result of diagonalising a ternary form by completing squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagonalization {
    /// `Q(back · y) = Σ coeffs[i] · y_i^2` for every `y`.
    Diagonal { coeffs: [BigRat; 3], back: [[BigRat; 3]; 3] },
    /// A zero pivot exposed an isotropic vector directly.
    Isotropic([BigRat; 3]),
}

impl TernaryForm {
    pub fn new(m: [[BigRat; 3]; 3]) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[i][j], m[j][i], "ternary form not symmetric");
            }
        }
        TernaryForm { m }
    }

    pub fn diagonal(a: BigRat, b: BigRat, c: BigRat) -> Self {
        let z = BigRat::zero;
        TernaryForm { m: [[a, z(), z()], [z(), b, z()], [z(), z(), c]] }
    }

    pub fn matrix(&self) -> &[[BigRat; 3]; 3] {
        &self.m
    }

    pub fn eval(&self, v: &[BigRat; 3]) -> BigRat {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, u: &[BigRat; 3], v: &[BigRat; 3]) -> BigRat {
        let mut acc = BigRat::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += &self.m[i][j] * &u[i] * &v[j];
            }
        }
        acc
    }

    /// LDLᵀ without pivoting. `back` is `(Lᵀ)⁻¹`.
    pub fn diagonalize(&self) -> Diagonalization {
        let mut a = self.m.clone();
        // lt = Lᵀ, unit upper triangular
        let mut lt: [[BigRat; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigRat::one() } else { BigRat::zero() }));
        let mut coeffs: [BigRat; 3] = std::array::from_fn(|_| BigRat::zero());
        for k in 0..3 {
            let pivot = a[k][k].clone();
            if pivot.is_zero() {
                // y = e_k: x_k = 1, x_j = 0 (j > k), y_i = 0 (i < k)
                let mut x: [BigRat; 3] = std::array::from_fn(|_| BigRat::zero());
                x[k] = BigRat::one();
                for i in (0..k).rev() {
                    let s: BigRat = ((i + 1)..3).map(|j| &lt[i][j] * &x[j]).sum();
                    x[i] = -s;
                }
                return Diagonalization::Isotropic(x);
            }
            for i in (k + 1)..3 {
                let l = &a[k][i] / &pivot;
                for j in (k + 1)..3 {
                    let d = &l * &a[k][j];
                    a[i][j] -= d;
                }
                lt[k][i] = l;
            }
            coeffs[k] = pivot;
        }
        // invert the unit upper triangular lt
        let mut back: [[BigRat; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigRat::one() } else { BigRat::zero() }));
        for col in 0..3 {
            for i in (0..3).rev() {
                let s: BigRat = ((i + 1)..3).map(|j| &lt[i][j] * &back[j][col]).sum();
                let e = if i == col { BigRat::one() } else { BigRat::zero() };
                back[i][col] = e - s;
            }
        }
        Diagonalization::Diagonal { coeffs, back }
    }

    /// A primitive integer zero of the form, or `None` if it has no rational zero.
    pub fn solve(&self) -> Result<Option<[BigInt; 3]>> {
        match self.diagonalize() {
            Diagonalization::Isotropic(x) => Ok(Some(primitive(&x))),
            Diagonalization::Diagonal { coeffs, back } => {
                let l = lcm_denominators(&coeffs);
                let ints: [BigInt; 3] = std::array::from_fn(|i| (&coeffs[i] * &l).to_integer());
                let Some(y) = legendre_solve(&ints[0], &ints[1], &ints[2])? else {
                    return Ok(None);
                };
                let y = y.map(BigRat::from_integer);
                let x: [BigRat; 3] = std::array::from_fn(|i| (0..3).map(|j| &back[i][j] * &y[j]).sum());
                Ok(Some(primitive(&x)))
            }
        }
    }
}

/// Clears denominators and removes content; the first nonzero entry is made positive.
pub(crate) fn primitive(v: &[BigRat; 3]) -> [BigInt; 3] {
    let d = lcm_denominators(v);
    let ints: [BigInt; 3] = std::array::from_fn(|i| (&v[i] * &d).to_integer());
    let mut g = content(&ints);
    if g.is_zero() {
        return ints;
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.map(|x| x / &g)
}

/// Primitive nonzero `(x, y, z)` with `a x^2 + b y^2 + c z^2 = 0`, or `None` when
/// the form is anisotropic at some place.
///
/// Tries a small exhaustive window first so easy forms get the smallest
/// solution (max-norm, then lexicographic); otherwise runs Legendre's descent on
/// `(-ac) X^2 + (-bc) Y^2 = Z^2` and shrinks the result by lattice reduction.
pub fn legendre_solve(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<Option<[BigInt; 3]>> {
    let unit = |i: usize| -> [BigInt; 3] { std::array::from_fn(|j| if i == j { BigInt::one() } else { BigInt::zero() }) };
    for (i, v) in [a, b, c].into_iter().enumerate() {
        if v.is_zero() {
            return Ok(Some(unit(i)));
        }
    }
    if a.is_positive() == b.is_positive() && b.is_positive() == c.is_positive() {
        return Ok(None);
    }
    if let Some(v) = small_window(a, b, c) {
        return Ok(Some(v));
    }
    let g = content([a, b, c]);
    let (a, b, c) = (a / &g, b / &g, c / &g);
    let aa = -(&a * &c);
    let bb = -(&b * &c);
    let Some([x, y, z]) = norm_equation(&aa, &bb)? else {
        return Ok(None);
    };
    // (x, y, z / c) solves the original form
    let c_r = BigRat::from_integer(c.clone());
    let sol = [x, y, z / c_r];
    let sol = primitive(&sol).map(|v| v.abs());
    let sol = reduce_solution(&a, &b, &c, &sol)?;
    debug_assert!((&a * &sol[0] * &sol[0] + &b * &sol[1] * &sol[1] + &c * &sol[2] * &sol[2]).is_zero());
    Ok(Some(sol))
}

const WINDOW: i64 = 24;

fn small_window(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<[BigInt; 3]> {
    let limit = 1i128 << 100;
    let (a, b, c) = (a.to_i128()?, b.to_i128()?, c.to_i128()?);
    if a.abs() > limit || b.abs() > limit || c.abs() > limit {
        return None;
    }
    for norm in 1..=WINDOW as i128 {
        for x in 0..=norm {
            for y in 0..=norm {
                for z in 0..=norm {
                    if x.max(y).max(z) != norm {
                        continue;
                    }
                    if x.gcd(&y).gcd(&z) != 1 {
                        continue;
                    }
                    if a * x * x + b * y * y + c * z * z == 0 {
                        return Some([x.into(), y.into(), z.into()]);
                    }
                }
            }
        }
    }
    None
}

/// Solves `a x^2 + b y^2 = z^2` (a, b nonzero) in rationals, not all zero.
fn norm_equation(a: &BigInt, b: &BigInt) -> Result<Option<[BigRat; 3]>> {
    let (a_core, a_root) = squarefree(a)?;
    let (b_core, b_root) = squarefree(b)?;
    let Some([x, y, z]) = descend(&a_core, &b_core)? else {
        return Ok(None);
    };
    // a_core = a / a_root^2
    Ok(Some([
        x / BigRat::from_integer(a_root),
        y / BigRat::from_integer(b_root),
        z,
    ]))
}

pub(super) fn squarefree(n: &BigInt) -> Result<(BigInt, BigInt)> {
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

/// Legendre descent for squarefree `a`, `b`.
fn descend(a: &BigInt, b: &BigInt) -> Result<Option<[BigRat; 3]>> {
    let one = || BigRat::one();
    let zero = || BigRat::zero();
    if a.is_one() {
        return Ok(Some([one(), zero(), one()]));
    }
    if b.is_one() {
        return Ok(Some([zero(), one(), one()]));
    }
    if a.is_negative() && b.is_negative() {
        return Ok(None);
    }
    if a.abs() > b.abs() {
        return Ok(descend(b, a)?.map(|[x, y, z]| [y, x, z]));
    }
    let b_abs = b.abs();
    let primes: Vec<BigInt> = factorize(&b_abs)?.factors.into_iter().map(|(p, _)| p).collect();
    let Some(mut t) = sqrt_mod_squarefree(a, &primes) else {
        return Ok(None);
    };
    if &t * 2 > b_abs {
        t -= &b_abs;
    }
    let n = (&t * &t - a) / b;
    debug_assert!(((&t * &t - a) % b).is_zero());
    if n.is_zero() {
        // t^2 = a with a squarefree forces a = 1, handled above
        unreachable!("descent hit t^2 = a for squarefree a != 1");
    }
    let (b_next, k) = squarefree(&n)?;
    let Some([xx, yy, zz]) = descend(a, &b_next)? else {
        return Ok(None);
    };
    // z = Z t + a X, x = Z + t X, y = b' k Y
    let t_r = BigRat::from_integer(t);
    let a_r = BigRat::from_integer(a.clone());
    let x = &zz + &t_r * &xx;
    let z = &zz * &t_r + &a_r * &xx;
    let y = BigRat::from_integer(&b_next * &k) * yy;
    Ok(Some([x, y, z]))
}

/// Hilbert symbol `(a, b)_v` for nonzero integers.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, place: &Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero());
    match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            let alpha = valuation(a, p).unwrap();
            let beta = valuation(b, p).unwrap();
            let u = a / num_traits::pow(p.clone(), alpha as usize);
            let v = b / num_traits::pow(p.clone(), beta as usize);
            if *p == BigInt::from(2) {
                let eps = |x: &BigInt| (x.mod_floor(&BigInt::from(4)) == BigInt::from(3)) as u32;
                let omega = |x: &BigInt| {
                    let r = x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
                    (r == 3 || r == 5) as u32
                };
                let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let mut s = 1;
                if alpha % 2 == 1 && beta % 2 == 1 && p.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
                    s = -s;
                }
                if beta % 2 == 1 {
                    s *= jacobi(&u, p);
                }
                if alpha % 2 == 1 {
                    s *= jacobi(&v, p);
                }
                s
            }
        }
    }
}

/// First place where `a x^2 + b y^2 + c z^2` is anisotropic (real place first,
/// then primes ascending), or `None` if it is locally isotropic everywhere.
pub fn local_obstruction(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<Option<Place>> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Ok(None);
    }
    let aa = -(a * c);
    let bb = -(b * c);
    if hilbert_symbol(&aa, &bb, &Place::Real) == -1 {
        return Ok(Some(Place::Real));
    }
    let mut primes = vec![BigInt::from(2)];
    for v in [a, b, c] {
        primes.extend(factorize(v)?.factors.into_iter().map(|(p, _)| p));
    }
    primes.sort();
    primes.dedup();
    for p in primes {
        let place = Place::Prime(p);
        if hilbert_symbol(&aa, &bb, &place) == -1 {
            return Ok(Some(place));
        }
    }
    Ok(None)
}
