use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{BinaryQuartic, QuarticPoint};
use crate::exactmath::{factorize, int_rat, BigInt, BigRat, UniPoly};

/// `X = (a X' + b) / (c X' + d)`, `Y = scale * Y' / (c X' + d)^2`, with
/// `ad - bc = ±1`. Maps points of the transformed quartic back to the
/// original one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticTransform {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub scale: BigRat,
}

impl QuarticTransform {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt, scale: BigRat) -> Self {
        let det = &a * &d - &b * &c;
        assert!(det.abs().is_one(), "transform must be unimodular");
        assert!(!scale.is_zero());
        QuarticTransform { a, b, c, d, scale }
    }

    pub fn identity() -> Self {
        Self::new(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one(), BigRat::one())
    }

    fn from_matrix(m: [i64; 4]) -> Self {
        let [a, b, c, d] = m.map(BigInt::from);
        Self::new(a, b, c, d, BigRat::one())
    }

    /// `self` followed by `next` (points go `next` first, then `self`).
    pub fn then(&self, next: &Self) -> Self {
        Self::new(
            &self.a * &next.a + &self.b * &next.c,
            &self.a * &next.b + &self.b * &next.d,
            &self.c * &next.a + &self.d * &next.c,
            &self.c * &next.b + &self.d * &next.d,
            &self.scale * &next.scale,
        )
    }

    /// The transformed quartic `g((aX+b)/(cX+d)) (cX+d)^4 / scale^2`.
    pub fn apply(&self, q: &BinaryQuartic) -> BinaryQuartic {
        let num = UniPoly::new(vec![int_rat(self.b.clone()), int_rat(self.a.clone())]);
        let den = UniPoly::new(vec![int_rat(self.d.clone()), int_rat(self.c.clone())]);
        let mut g = UniPoly::zero();
        for (i, coeff) in q.coeffs().iter().enumerate() {
            let term = &num.pow(4 - i as u32) * &den.pow(i as u32);
            g = &g + &term.scale(coeff);
        }
        let s2 = &self.scale * &self.scale;
        let g = g.scale(&s2.recip());
        BinaryQuartic::new(std::array::from_fn(|i| g.coeff(4 - i))).expect("unimodular image of a nonzero quartic")
    }

    /// Image on the original quartic of a point on the transformed one.
    pub fn to_original(&self, p: &QuarticPoint) -> QuarticPoint {
        let (x, z, y) = homogeneous(p);
        let (a, b, c, d) = (int_rat(self.a.clone()), int_rat(self.b.clone()), int_rat(self.c.clone()), int_rat(self.d.clone()));
        dehomogenize(&a * &x + &b * &z, &c * &x + &d * &z, &self.scale * y)
    }

    /// Image on the transformed quartic of a point on the original one.
    pub fn from_original(&self, p: &QuarticPoint) -> QuarticPoint {
        let (x, z, y) = homogeneous(p);
        let (a, b, c, d) = (int_rat(self.a.clone()), int_rat(self.b.clone()), int_rat(self.c.clone()), int_rat(self.d.clone()));
        // adjugate; a sign flip of (X : Z) leaves the weight-2 coordinate alone
        dehomogenize(&d * &x - &b * &z, -(&c * &x) + &a * &z, y / &self.scale)
    }
}

fn homogeneous(p: &QuarticPoint) -> (BigRat, BigRat, BigRat) {
    match p {
        QuarticPoint::Finite { x, y } => (x.clone(), BigRat::one(), y.clone()),
        QuarticPoint::AtInfinity { y } => (BigRat::one(), BigRat::zero(), y.clone()),
    }
}

fn dehomogenize(x: BigRat, z: BigRat, y: BigRat) -> QuarticPoint {
    if z.is_zero() {
        QuarticPoint::AtInfinity { y: y / (&x * &x) }
    } else {
        QuarticPoint::Finite { x: &x / &z, y: y / (&z * &z) }
    }
}

fn height(q: &BinaryQuartic) -> (BigInt, BigInt) {
    let (ints, _) = q.integral_model();
    let max = ints.iter().map(|c| c.abs()).max().unwrap();
    let sum = ints.iter().map(|c| c.abs()).sum();
    (max, sum)
}

/// Largest `s` with `s^2 | n`; falls back to small primes if `n` is too hard to factor.
fn square_part(n: &BigInt) -> BigInt {
    let mut s = BigInt::one();
    match factorize(n) {
        Ok(f) => {
            for (p, e) in f.factors {
                s *= num_traits::pow(p, (e / 2) as usize);
            }
        }
        Err(_) => {
            let mut m = n.abs();
            for p in 2u32..10_000 {
                let pb = BigInt::from(p);
                let p2 = &pb * &pb;
                while (&m % &p2).is_zero() {
                    m /= &p2;
                    s *= &pb;
                }
            }
        }
    }
    s
}

/// Removes square content, then greedily applies shifts `X -> X ± 2^j`,
/// the centering shift and their counterparts at infinity while the
/// coefficient height strictly drops. Returns the reduced quartic and the
/// transform mapping its points back.
pub fn reduce_quartic(q: &BinaryQuartic) -> (BinaryQuartic, QuarticTransform) {
    let (ints, l) = q.integral_model();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let s = square_part(&content);
    let mut tr = QuarticTransform::new(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one(), BigRat::new(s, l));
    let mut cur = tr.apply(q);
    let mut h = height(&cur);
    for _ in 0..1000 {
        let mut best: Option<(QuarticTransform, BinaryQuartic, (BigInt, BigInt))> = None;
        for step in candidate_steps(&cur) {
            let next = step.apply(&cur);
            let hn = height(&next);
            if hn < best.as_ref().map_or(h.clone(), |b| b.2.clone()) {
                best = Some((step, next, hn));
            }
        }
        match best {
            Some((step, next, hn)) => {
                tr = tr.then(&step);
                cur = next;
                h = hn;
            }
            None => break,
        }
    }
    (cur, tr)
}

fn candidate_steps(q: &BinaryQuartic) -> Vec<QuarticTransform> {
    let mut out = vec![QuarticTransform::from_matrix([0, 1, 1, 0])];
    let (ints, _) = q.integral_model();
    let bits = ints.iter().map(|c| c.bits()).max().unwrap_or(0).min(256);
    for j in 0..bits.max(1) {
        let h = BigInt::one() << j;
        for h in [h.clone(), -h] {
            out.push(QuarticTransform::new(BigInt::one(), h.clone(), BigInt::zero(), BigInt::one(), BigRat::one()));
            out.push(QuarticTransform::new(BigInt::one(), BigInt::zero(), h, BigInt::one(), BigRat::one()));
        }
    }
    let [a, b, _, d, e] = ints;
    let centre = |num: &BigInt, den: &BigInt| -> Option<BigInt> {
        if den.is_zero() {
            return None;
        }
        let r = BigRat::new(num.clone(), den.clone() * 4);
        Some((r + BigRat::new(BigInt::one(), BigInt::from(2))).floor().to_integer())
    };
    if let Some(h) = centre(&-b, &a).filter(|h| !h.is_zero()) {
        out.push(QuarticTransform::new(BigInt::one(), h, BigInt::zero(), BigInt::one(), BigRat::one()));
    }
    if let Some(h) = centre(&-d, &e).filter(|h| !h.is_zero()) {
        out.push(QuarticTransform::new(BigInt::one(), BigInt::zero(), h, BigInt::one(), BigRat::one()));
    }
    out
}
