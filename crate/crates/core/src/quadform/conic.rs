use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::admissible;
use super::ternary::{local_obstruction, primitive, Diagonalization, Place, TernaryForm};
use crate::error::{Error, Result};
use crate::exactmath::{int_rat, integer_sqrt_exact, lcm_denominators, BigInt, BigRat};

/// `alpha p^2 + beta p q + gamma q^2 = delta w^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryQuadric {
    pub alpha: BigRat,
    pub beta: BigRat,
    pub gamma: BigRat,
    pub delta: BigRat,
}

/// Which of the two reduced quadrics is used as the conic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum QuadricOrder {
    /// Conic in `(p, q, r)`, quartic from the `s` quadric.
    #[default]
    Forward,
    /// Conic in `(p, q, s)`, quartic from the `r` quadric.
    Reversed,
}

/// Rational point `(p0 : q0 : w0)` on a conic, with `q0 != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicBasePoint {
    pub p0: BigInt,
    pub q0: BigInt,
    pub r0: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConicOutcome {
    Point(ConicBasePoint),
    /// No rational point; `obstruction` is a place where the conic has no local point.
    Insoluble { obstruction: Option<Place> },
}

impl ConicOutcome {
    pub fn point(&self) -> Option<&ConicBasePoint> {
        match self {
            ConicOutcome::Point(p) => Some(p),
            ConicOutcome::Insoluble { .. } => None,
        }
    }
}

const PROBE: i64 = 30;

impl BinaryQuadric {
    /// `(t^2-7) p^2 + 24 pq - 24 q^2 = (t^2+1) r^2`.
    pub fn r_quadric(t: &BigRat) -> Self {
        let t2 = t * t;
        BinaryQuadric {
            alpha: &t2 - int_rat(7),
            beta: int_rat(24),
            gamma: int_rat(-24),
            delta: &t2 + int_rat(1),
        }
    }

    /// `8t p^2 - 24t pq - 3(t^2-8t+1) q^2 = (t^2+1) s^2`.
    pub fn s_quadric(t: &BigRat) -> Self {
        let t2 = t * t;
        BinaryQuadric {
            alpha: t * int_rat(8),
            beta: t * int_rat(-24),
            gamma: (&t2 - t * int_rat(8) + int_rat(1)) * int_rat(-3),
            delta: &t2 + int_rat(1),
        }
    }

    /// `alpha p^2 + beta pq + gamma q^2`.
    pub fn binary_value(&self, p: &BigRat, q: &BigRat) -> BigRat {
        &self.alpha * p * p + &self.beta * p * q + &self.gamma * q * q
    }

    pub fn is_on(&self, p: &BigRat, q: &BigRat, w: &BigRat) -> bool {
        self.binary_value(p, q) == &self.delta * w * w
    }

    /// Ternary form `binary(p, q) - delta w^2` in `(p, q, w)`.
    pub fn ternary(&self) -> TernaryForm {
        let z = BigRat::zero;
        let half_beta = &self.beta / int_rat(2);
        TernaryForm::new([
            [self.alpha.clone(), half_beta.clone(), z()],
            [half_beta, self.gamma.clone(), z()],
            [z(), z(), -self.delta.clone()],
        ])
    }

    /// Integer coefficients `(a, b, c, d)` of a positive multiple of the quadric.
    fn integral(&self) -> [BigInt; 4] {
        let vals = [&self.alpha, &self.beta, &self.gamma, &self.delta];
        let l = lcm_denominators(vals);
        vals.map(|v| (v * &l).to_integer())
    }

    /// A rational point with `q0 != 0`, or the reason there is none.
    ///
    /// Points with `|p|, q <= 30` are probed first; otherwise the ternary form
    /// is solved and, if needed, a second point is taken along a secant.
    pub fn base_point(&self) -> Result<ConicOutcome> {
        if let Some(p) = self.probe_small() {
            return Ok(ConicOutcome::Point(p));
        }
        let form = self.ternary();
        let Some(v) = form.solve()? else {
            return Ok(ConicOutcome::Insoluble { obstruction: self.obstruction(&form)? });
        };
        let v = if v[1].is_zero() { self.move_off_q_zero(&form, &v)? } else { v };
        Ok(ConicOutcome::Point(normalize(v)))
    }

    fn probe_small(&self) -> Option<ConicBasePoint> {
        let [a, b, c, d] = self.integral();
        if d.is_zero() {
            return None;
        }
        for q in 1..=PROBE {
            for p in -PROBE..=PROBE {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let (pb, qb) = (BigInt::from(p), BigInt::from(q));
                let lhs = &a * &pb * &pb + &b * &pb * &qb + &c * &qb * &qb;
                let (w2, rem) = lhs.div_rem(&d);
                if !rem.is_zero() {
                    continue;
                }
                if let Some(w) = integer_sqrt_exact(&w2) {
                    return Some(ConicBasePoint { p0: pb, q0: qb, r0: w });
                }
            }
        }
        None
    }

    fn obstruction(&self, form: &TernaryForm) -> Result<Option<Place>> {
        match form.diagonalize() {
            Diagonalization::Isotropic(_) => Ok(None),
            Diagonalization::Diagonal { coeffs, .. } => {
                let l = lcm_denominators(&coeffs);
                let [x, y, z] = coeffs.map(|c| (c * &l).to_integer());
                local_obstruction(&x, &y, &z)
            }
        }
    }

    /// Second intersection of the conic with a line through `w`, chosen so the
    /// new point has `q != 0`.
    fn move_off_q_zero(&self, form: &TernaryForm, w: &[BigInt; 3]) -> Result<[BigInt; 3]> {
        let wr = w.clone().map(BigRat::from_integer);
        for dir in [[0, 1, 0], [1, 1, 0], [0, 1, 1], [1, 1, 1], [-1, 1, 0], [0, 1, -1], [2, 1, 0], [0, 1, 2]] {
            let v = dir.map(int_rat);
            let qv = form.eval(&v);
            let bwv = form.bilinear(&wr, &v);
            let cand: [BigRat; 3] = if qv.is_zero() {
                v.clone()
            } else {
                std::array::from_fn(|i| &qv * &wr[i] - int_rat(2) * &bwv * &v[i])
            };
            if !cand[1].is_zero() {
                return Ok(primitive(&cand));
            }
        }
        Err(Error::Internal("no secant direction leaves q = 0".into()))
    }

    /// Second intersection of the line of slope `k` through the base point:
    /// `(P, Q, W)` with `Q = q0 (delta k^2 - alpha)`.
    pub fn parameterize(&self, base: &ConicBasePoint, k: &BigRat) -> Result<(BigRat, BigRat, BigRat)> {
        let (p0, q0, r0) = (int_rat(base.p0.clone()), int_rat(base.q0.clone()), int_rat(base.r0.clone()));
        let lead = &self.delta * k * k - &self.alpha;
        if lead.is_zero() {
            return Err(Error::ParameterAtInfinity);
        }
        let p = &self.delta * k * k * &p0 - int_rat(2) * &self.delta * k * &r0 + &self.alpha * &p0 + &self.beta * &q0;
        let q = &q0 * &lead;
        // w/q = w0/q0 + k (p/q - p0/q0)
        let w = &r0 * &lead + k * (&p - &p0 * &lead);
        Ok((p, q, w))
    }

    /// Slope of the line from the base point to `(p : q : w)`; `None` for the
    /// vertical line. The base point itself gets the tangent slope.
    pub fn slope_to(&self, base: &ConicBasePoint, p: &BigRat, q: &BigRat, w: &BigRat) -> Option<BigRat> {
        let (p0, q0, r0) = (int_rat(base.p0.clone()), int_rat(base.q0.clone()), int_rat(base.r0.clone()));
        if q.is_zero() {
            return None;
        }
        let (x0, y0) = (&p0 / &q0, &r0 / &q0);
        let (x, y) = (p / q, w / q);
        if x != x0 {
            return Some((y - y0) / (x - x0));
        }
        if y == y0 && !y0.is_zero() {
            return Some((&self.alpha * int_rat(2) * &x0 + &self.beta) / (int_rat(2) * &self.delta * y0));
        }
        None
    }
}

fn normalize(v: [BigInt; 3]) -> ConicBasePoint {
    let [mut p0, mut q0, mut r0] = v;
    if q0.is_negative() {
        p0 = -p0;
        q0 = -q0;
        r0 = -r0;
    }
    ConicBasePoint { p0, q0, r0: r0.abs() }
}

/// The two reduced quadrics for a given `t`, ordered by which is the conic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricPair {
    pub t: BigRat,
    pub order: QuadricOrder,
    /// Parameterised conic.
    pub conic: BinaryQuadric,
    /// Quadric whose square class gives the quartic.
    pub other: BinaryQuadric,
}

impl QuadricPair {
    pub fn new(t: &BigRat, order: QuadricOrder) -> Result<Self> {
        admissible(t)?;
        let (r, s) = (BinaryQuadric::r_quadric(t), BinaryQuadric::s_quadric(t));
        let (conic, other) = match order {
            QuadricOrder::Forward => (r, s),
            QuadricOrder::Reversed => (s, r),
        };
        Ok(QuadricPair { t: t.clone(), order, conic, other })
    }

    /// `(p, q, r, s)` from `p`, `q` and the conic and quartic-side variables.
    pub fn to_pqrs(&self, p: BigRat, q: BigRat, w_conic: BigRat, w_other: BigRat) -> [BigRat; 4] {
        match self.order {
            QuadricOrder::Forward => [p, q, w_conic, w_other],
            QuadricOrder::Reversed => [p, q, w_other, w_conic],
        }
    }

    /// `(w_conic, w_other)` read off a `(p, q, r, s)` vector.
    pub fn split_pqrs<'a>(&self, v: &'a [BigRat; 4]) -> (&'a BigRat, &'a BigRat) {
        match self.order {
            QuadricOrder::Forward => (&v[2], &v[3]),
            QuadricOrder::Reversed => (&v[3], &v[2]),
        }
    }
}

/// Base point on `(t^2-7)p^2 + 24pq - 24q^2 = (t^2+1) r^2`.
pub fn conic_base_point(t: &BigRat) -> Result<ConicOutcome> {
    admissible(t)?;
    BinaryQuadric::r_quadric(t).base_point()
}

/// `(p, q)` on the `r` conic for slope `k` through `base`.
pub fn parameterize_conic(base: &ConicBasePoint, t: &BigRat, k: &BigRat) -> Result<(BigRat, BigRat)> {
    admissible(t)?;
    let (p, q, _) = BinaryQuadric::r_quadric(t).parameterize(base, k)?;
    Ok((p, q))
}
