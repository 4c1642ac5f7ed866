//! Binary quartics `Y^2 = A X^4 + B X^3 + C X^2 + D X + E`: the two quartics
//! attached to a parameter `t`, their invariants and covariant, local
//! solubility, a light reduction step and a sieved point search.

mod local;
mod padic;
mod reduce;
mod search;

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{int_rat, lcm_denominators, BigInt, BigRat, UniPoly};
use crate::quadform::{build_m1, build_m2, BinaryQuadric, ConicBasePoint, QuadricPair};

pub use local::{is_locally_soluble, is_locally_soluble_with_hints, real_soluble};
pub use reduce::{reduce_quartic, QuarticTransform};
pub use search::search_points;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryQuartic {
    /// `[A, B, C, D, E]`
    coeffs: [BigRat; 5],
}

/// Rational point on `Y^2 = g(X)`. At infinity `y` is a square root of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuarticPoint {
    Finite { x: BigRat, y: BigRat },
    AtInfinity { y: BigRat },
}

impl Ord for QuarticPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        use QuarticPoint::*;
        match (self, other) {
            (Finite { x, y }, Finite { x: x2, y: y2 }) => (x, y).cmp(&(x2, y2)),
            (Finite { .. }, AtInfinity { .. }) => Ordering::Less,
            (AtInfinity { .. }, Finite { .. }) => Ordering::Greater,
            (AtInfinity { y }, AtInfinity { y: y2 }) => y.cmp(y2),
        }
    }
}

impl PartialOrd for QuarticPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BinaryQuartic {
    pub fn new(coeffs: [BigRat; 5]) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("quartic is identically zero".into()));
        }
        Ok(BinaryQuartic { coeffs })
    }

    pub fn from_ints(c: [i64; 5]) -> Self {
        Self::new(c.map(int_rat)).expect("nonzero quartic")
    }

    pub fn coeffs(&self) -> &[BigRat; 5] {
        &self.coeffs
    }

    pub fn a(&self) -> &BigRat {
        &self.coeffs[0]
    }

    pub fn e(&self) -> &BigRat {
        &self.coeffs[4]
    }

    /// `g` as a polynomial in `X`.
    pub fn poly(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs.iter().fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    /// `(I, J)` with `I = 12AE - 3BD + C^2`.
    pub fn invariants(&self) -> (BigRat, BigRat) {
        let [a, b, c, d, e] = &self.coeffs;
        let i = int_rat(12) * a * e - int_rat(3) * b * d + c * c;
        let j = int_rat(72) * a * c * e + int_rat(9) * b * c * d
            - int_rat(27) * a * d * d
            - int_rat(27) * b * b * e
            - int_rat(2) * c * c * c;
        (i, j)
    }

    /// `(4 I^3 - J^2) / 27`, zero exactly when the binary form has a repeated root.
    pub fn discriminant(&self) -> BigRat {
        let (i, j) = self.invariants();
        (int_rat(4) * &i * &i * &i - &j * &j) / int_rat(27)
    }

    pub fn is_degenerate(&self) -> bool {
        self.discriminant().is_zero()
    }

    /// The quartic covariant `g4`.
    pub fn covariant_g4(&self) -> UniPoly {
        let [a, b, c, d, e] = &self.coeffs;
        let i = |n: i64| int_rat(n);
        UniPoly::new(vec![
            i(3) * d * d - i(8) * c * e,
            i(4) * (c * d - i(6) * b * e),
            i(2) * (i(2) * c * c - i(24) * a * e - i(3) * b * d),
            i(4) * (b * c - i(6) * a * d),
            i(3) * b * b - i(8) * a * c,
        ])
    }

    /// `true` when `point` satisfies the equation.
    pub fn contains(&self, point: &QuarticPoint) -> bool {
        match point {
            QuarticPoint::Finite { x, y } => y * y == self.eval(x),
            QuarticPoint::AtInfinity { y } => y * y == *self.a() && !self.a().is_zero(),
        }
    }

    /// Integer coefficients of `l^2 g` with `l` the common denominator, and `l`.
    pub fn integral_model(&self) -> ([BigInt; 5], BigInt) {
        let l = lcm_denominators(&self.coeffs);
        let l2 = BigRat::from_integer(&l * &l);
        (self.coeffs.clone().map(|c| (c * &l2).to_integer()), l)
    }

    /// `X^4 g(1/X)`.
    pub fn reversed(&self) -> BinaryQuartic {
        let mut c = self.coeffs.clone();
        c.reverse();
        BinaryQuartic { coeffs: c }
    }
}

impl fmt::Display for BinaryQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = &self.coeffs;
        write!(f, "Y^2 = ({a})X^4 + ({b})X^3 + ({c})X^2 + ({d})X + ({e})")
    }
}

/// The quartic in the conic slope `k`, coefficients as closed forms in
/// `t` and the base point.
pub fn build_section3_quartic(t: &BigRat, base: &ConicBasePoint) -> Result<BinaryQuartic> {
    let i = |n: i64| int_rat(n);
    let (p0, q0, r0) = (int_rat(base.p0.clone()), int_rat(base.q0.clone()), int_rat(base.r0.clone()));
    let t2 = t * t;
    let w = &t2 + i(1);
    let w2 = &w * &w;
    let w3 = &w2 * &w;
    let a = &w3 * (i(8) * &p0 * &p0 * t - i(24) * &p0 * &q0 * t - i(3) * &q0 * &q0 * (&t2 - i(8) * t + i(1)));
    let b = i(16) * &r0 * t * &w3 * (i(3) * &q0 - i(2) * &p0);
    let poly4 = |c: [i64; 5]| c.iter().fold(BigRat::zero(), |acc, &x| acc * t + i(x));
    let c = i(2)
        * &w2
        * (i(8) * &p0 * &p0 * t * (&t2 - i(7))
            + i(192) * &p0 * &q0 * t
            + i(3) * &q0 * &q0 * poly4([1, -8, -6, -40, -7])
            + i(16) * &r0 * &r0 * t * &w);
    let d = i(-16) * &r0 * t * &w2 * (i(2) * &p0 * (&t2 - i(7)) + i(3) * &q0 * (&t2 + i(9)));
    let sextic = [1, -8, -13, -80, 35, -584, 49].iter().fold(BigRat::zero(), |acc, &x| acc * t + i(x));
    let t2m7 = &t2 - i(7);
    let e = &w
        * (i(8) * &p0 * &p0 * t * &t2m7 * &t2m7 + i(24) * &p0 * &q0 * t * &t2m7 * (&t2 + i(9))
            - i(3) * &q0 * &q0 * sextic);
    BinaryQuartic::new([a, b, c, d, e])
}

/// `Y^2 = delta2 * Q2(P(k), Q(k))` for the pair's conic parameterisation
/// through `base`, computed by polynomial substitution.
pub fn build_quartic_from_pair(pair: &QuadricPair, base: &ConicBasePoint) -> Result<BinaryQuartic> {
    let (p, q) = parameterization_polys(&pair.conic, base);
    let o = &pair.other;
    let g = &(&(&p * &p).scale(&o.alpha) + &(&p * &q).scale(&o.beta)) + &(&q * &q).scale(&o.gamma);
    let g = g.scale(&o.delta);
    BinaryQuartic::new(std::array::from_fn(|i| g.coeff(4 - i)))
}

/// `P(k)` and `Q(k)` of the conic parameterisation.
pub fn parameterization_polys(conic: &BinaryQuadric, base: &ConicBasePoint) -> (UniPoly, UniPoly) {
    let (p0, q0, r0) = (int_rat(base.p0.clone()), int_rat(base.q0.clone()), int_rat(base.r0.clone()));
    let de = &conic.delta;
    let p = UniPoly::new(vec![&conic.alpha * &p0 + &conic.beta * &q0, int_rat(-2) * de * &r0, de * &p0]);
    let q = UniPoly::new(vec![-(&q0 * &conic.alpha), BigRat::zero(), &q0 * de]);
    (p, q)
}

/// `det(X M1 + M2)` as a polynomial determinant.
pub fn build_pencil_quartic(t: &BigRat) -> Result<BinaryQuartic> {
    let m1 = build_m1(t)?.rows();
    let m2 = build_m2(t)?.rows();
    let entries: [[UniPoly; 4]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|j| UniPoly::new(vec![m2[i][j].clone(), m1[i][j].clone()])));
    let det = poly_det4(&entries);
    BinaryQuartic::new(std::array::from_fn(|i| det.coeff(4 - i)))
}

fn poly_det4(m: &[[UniPoly; 4]; 4]) -> UniPoly {
    // Leibniz over the 24 permutations
    let mut total = UniPoly::zero();
    let mut perm = [0usize, 1, 2, 3];
    for_each_permutation(&mut perm, 0, &mut |p| {
        let inversions = (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut term = UniPoly::constant(BigRat::one());
        for (row, &col) in p.iter().enumerate() {
            term = &term * &m[row][col];
        }
        total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
    });
    total
}

fn for_each_permutation(p: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        for_each_permutation(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `K = t^4 - 8t^3 - 6t^2 + 24t - 7`.
pub fn k_of(t: &BigRat) -> BigRat {
    [1, -8, -6, 24, -7].iter().fold(BigRat::zero(), |acc, &x| acc * t + int_rat(x))
}

/// Closed forms `(I, J)` of the pencil quartic.
pub fn pencil_invariants_closed(t: &BigRat) -> (BigRat, BigRat) {
    let horner = |c: &[i64]| c.iter().fold(BigRat::zero(), |acc, &x| acc * t + int_rat(x));
    let i = int_rat(9) * horner(&[1, -16, 52, -48, 22, -176, 276, -144, 49]);
    let j = int_rat(54) * k_of(t) * horner(&[1, -16, 52, -144, 214, -176, 84, -48, 49]);
    (i, j)
}
