//! The curve `v^2 = u^3 - 3K u^2 + 576 t (t+1) (t-1)^3 u` attached to `t`,
//! its group law, the descent maps to and from quartics, and enumeration of
//! small combinations of generators.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{int_rat, parse_rational, rational_roots, rational_sqrt_exact, BigRat};
use crate::quartic::{k_of, pencil_invariants_closed, BinaryQuartic, QuarticPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEt {
    pub t: BigRat,
    pub k: BigRat,
    pub a2: BigRat,
    pub a4: BigRat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ECPoint {
    Infinity,
    Affine { u: BigRat, v: BigRat },
}

impl ECPoint {
    pub fn affine(u: BigRat, v: BigRat) -> Self {
        ECPoint::Affine { u, v }
    }

    pub fn u(&self) -> Option<&BigRat> {
        match self {
            ECPoint::Affine { u, .. } => Some(u),
            ECPoint::Infinity => None,
        }
    }

    pub fn is_two_torsion_origin(&self) -> bool {
        matches!(self, ECPoint::Affine { u, v } if u.is_zero() && v.is_zero())
    }
}

impl fmt::Display for ECPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ECPoint::Infinity => write!(f, "O"),
            ECPoint::Affine { u, v } => write!(f, "({u}, {v})"),
        }
    }
}

/// `(t^4 - 16t^3 + 50t^2 - 80t + 49)`, the factor of the discriminant that changes sign.
fn disc_quartic(t: &BigRat) -> BigRat {
    [1, -16, 50, -80, 49].iter().fold(BigRat::zero(), |acc, &c| acc * t + int_rat(c))
}

/// Closed-form discriminant `2^16 3^6 t^2 (t+1)^2 (t-1)^6 (t^2+1)^2 (t^4 - 16t^3 + 50t^2 - 80t + 49)`.
pub fn discriminant(t: &BigRat) -> BigRat {
    let one = BigRat::one();
    let tp = t + &one;
    let tm = t - &one;
    let w = t * t + &one;
    int_rat(65536) * int_rat(729) * t * t * &tp * &tp * num_traits::pow(tm, 6) * &w * &w * disc_quartic(t)
}

pub fn curve_from_t(t: &BigRat) -> Result<CurveEt> {
    if t.is_zero() || t.abs().is_one() {
        return Err(Error::DegenerateParameter(t.clone()));
    }
    let k = k_of(t);
    let one = BigRat::one();
    let a4 = int_rat(576) * t * (t + &one) * num_traits::pow(t - &one, 3);
    let a2 = int_rat(-3) * &k;
    Ok(CurveEt { t: t.clone(), k, a2, a4 })
}

impl CurveEt {
    pub fn rhs(&self, u: &BigRat) -> BigRat {
        u * u * u + &self.a2 * u * u + &self.a4 * u
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine { u, v } => v * v == self.rhs(u),
        }
    }

    /// `16 a4^2 (a2^2 - 4 a4)`, the usual discriminant of `y^2 = x^3 + a2 x^2 + a4 x`.
    pub fn weierstrass_discriminant(&self) -> BigRat {
        int_rat(16) * &self.a4 * &self.a4 * (&self.a2 * &self.a2 - int_rat(4) * &self.a4)
    }

    /// The point with the given `u` and nonnegative `v`.
    pub fn point_at(&self, u: &BigRat) -> Result<ECPoint> {
        let rhs = self.rhs(u);
        let v = rational_sqrt_exact(&rhs).ok_or(Error::NotASquare(rhs))?;
        Ok(ECPoint::affine(u.clone(), v))
    }

    pub fn torsion(&self) -> ECPoint {
        ECPoint::affine(BigRat::zero(), BigRat::zero())
    }

    /// `(48t, 144t(t^2+1))`.
    pub fn known_generator(&self) -> ECPoint {
        let t = &self.t;
        let p = ECPoint::affine(int_rat(48) * t, int_rat(144) * t * (t * t + int_rat(1)));
        assert!(self.contains(&p), "known generator off the curve");
        p
    }

    pub fn neg(&self, p: &ECPoint) -> ECPoint {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { u, v } => ECPoint::affine(u.clone(), -v),
        }
    }

    pub fn add(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        let (ECPoint::Affine { u: u1, v: v1 }, ECPoint::Affine { u: u2, v: v2 }) = (p, q) else {
            return if matches!(p, ECPoint::Infinity) { q.clone() } else { p.clone() };
        };
        let lambda = if u1 == u2 {
            if (v1 + v2).is_zero() {
                return ECPoint::Infinity;
            }
            (int_rat(3) * u1 * u1 + int_rat(2) * &self.a2 * u1 + &self.a4) / (int_rat(2) * v1)
        } else {
            (v2 - v1) / (u2 - u1)
        };
        let u3 = &lambda * &lambda - &self.a2 - u1 - u2;
        let v3 = &lambda * (u1 - &u3) - v1;
        ECPoint::affine(u3, v3)
    }

    pub fn double(&self, p: &ECPoint) -> ECPoint {
        self.add(p, p)
    }

    pub fn scalar_mul(&self, n: i64, p: &ECPoint) -> ECPoint {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.double(&base);
            k >>= 1;
        }
        acc
    }
}

/// `mu` with `(I_q, J_q) = (mu^2 I, mu^3 J)` for the pencil invariants `(I, J)` of `t`.
fn invariant_scale(q: &BinaryQuartic, t: &BigRat) -> Result<BigRat> {
    let (iq, jq) = q.invariants();
    let (ip, jp) = pencil_invariants_closed(t);
    let mu = if !ip.is_zero() && !jp.is_zero() {
        (&jq * &ip) / (&jp * &iq)
    } else if !ip.is_zero() {
        rational_sqrt_exact(&(&iq / &ip)).ok_or_else(|| Error::Internal("invariant ratio is not a square".into()))?
    } else {
        return Err(Error::Internal("pencil invariant I vanishes".into()));
    };
    if iq != &mu * &mu * &ip || jq != &mu * &mu * &mu * &jp {
        return Err(Error::Internal("quartic invariants are not a rescaling of the pencil invariants".into()));
    }
    Ok(mu)
}

/// `x = 3 g4(X) / (4 Y^2)`, rescaled to the pencil invariants and moved to
/// `u = x/9 + K`; `v` is the nonnegative square root.
pub fn quartic_to_curve(q: &BinaryQuartic, point: &QuarticPoint, t: &BigRat) -> Result<ECPoint> {
    let curve = curve_from_t(t)?;
    let g4 = q.covariant_g4();
    let x_q = match point {
        QuarticPoint::Finite { x, y } => {
            if y.is_zero() {
                return Err(Error::TwoTorsionImage);
            }
            int_rat(3) * g4.eval(x) / (int_rat(4) * y * y)
        }
        QuarticPoint::AtInfinity { y } => int_rat(3) * g4.coeff(4) / (int_rat(4) * y * y),
    };
    let mu = invariant_scale(q, t)?;
    let u = &x_q / &mu / int_rat(9) + &curve.k;
    curve
        .point_at(&u)
        .map_err(|_| Error::Internal(format!("descent image u = {u} is not on the curve")))
}

/// Rational `X` on `q` whose descent image has the same `u` as `p`: the
/// rational roots of `3 g4(X) - 4 x(P) g(X)`.
pub fn curve_to_quartic_xs(q: &BinaryQuartic, p: &ECPoint, t: &BigRat) -> Result<Vec<BigRat>> {
    let ECPoint::Affine { u, .. } = p else {
        return Err(Error::InvalidInput("point at infinity has no quartic preimage".into()));
    };
    if p.is_two_torsion_origin() {
        return Err(Error::InvalidInput("(0,0) has no quartic preimage".into()));
    }
    let mu = invariant_scale(q, t)?;
    let x = int_rat(9) * (u - k_of(t)) * mu;
    let f = &q.covariant_g4().scale(&int_rat(3)) - &q.poly().scale(&(int_rat(4) * x));
    if f.is_zero() {
        return Ok(Vec::new());
    }
    Ok(rational_roots(&f))
}

/// Parses `"u,v;u;..."`; bare `u` takes the nonnegative square root for `v`.
pub fn parse_generators(s: &str, curve: &CurveEt) -> Result<Vec<ECPoint>> {
    let mut out = Vec::new();
    for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
        let parts: Vec<&str> = item.split(',').map(str::trim).collect();
        let p = match parts.as_slice() {
            [u] => curve.point_at(&parse_rational(u)?)?,
            [u, v] => {
                let p = ECPoint::affine(parse_rational(u)?, parse_rational(v)?);
                if !curve.contains(&p) {
                    return Err(Error::NotOnCurve);
                }
                p
            }
            _ => return Err(Error::InvalidInput(format!("bad generator `{item}`"))),
        };
        out.push(p);
    }
    Ok(out)
}

/// One enumerated point with the coefficients that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination {
    pub coeffs: Vec<i64>,
    /// Whether `(0,0)` was added.
    pub torsion: bool,
    pub point: ECPoint,
}

/// Points `n_1 G_1 + ... + n_r G_r + T` with `|n_i| <= bound` and
/// `T ∈ {O, (0,0)}`, in lexicographic order of `(n_1, .., n_r, T)`, skipping
/// the identity and repeats.
pub fn enumerate_combinations(curve: &CurveEt, gens: &[ECPoint], bound: u32) -> Vec<Combination> {
    let l = bound as i64;
    let width = (2 * l + 1) as usize;
    let multiples: Vec<Vec<ECPoint>> = gens.iter().map(|g| (-l..=l).map(|n| curve.scalar_mul(n, g)).collect()).collect();
    let r = gens.len();
    let torsion = curve.torsion();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut idx = vec![0usize; r];
    // prefix[i] = sum of the first i chosen multiples
    let mut prefix = vec![ECPoint::Infinity; r + 1];
    for i in 0..r {
        prefix[i + 1] = curve.add(&prefix[i], &multiples[i][0]);
    }
    loop {
        let base = &prefix[r];
        for with_t in [false, true] {
            let point = if with_t { curve.add(base, &torsion) } else { base.clone() };
            if point != ECPoint::Infinity && seen.insert(point.clone()) {
                let coeffs = idx.iter().map(|&i| i as i64 - l).collect();
                out.push(Combination { coeffs, torsion: with_t, point });
            }
        }
        // odometer, last coordinate fastest
        let mut pos = r;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < width {
                break;
            }
            idx[pos] = 0;
        }
        for i in pos..r {
            prefix[i + 1] = curve.add(&prefix[i], &multiples[i][idx[i]]);
        }
    }
}

/// `(2L+1)^r * 2 - 1`, the number of combinations before deduplication.
pub fn combination_count(r: usize, bound: u32) -> u64 {
    (2 * bound as u64 + 1).pow(r as u32) * 2 - 1
}
