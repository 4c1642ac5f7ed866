use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use super::solution::{permutations, t_of, t_orbit, verify_solution, Verdict};
use crate::ecurve::{curve_from_t, curve_to_quartic_xs, quartic_to_curve, ECPoint};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, int_rat, BigInt, BigRat};
use crate::quadform::{
    build_m1, build_m2, evaluate_form, pqrs_from_solution, BinaryQuadric, Chart, ConicBasePoint, ConicOutcome,
};
use crate::quartic::{build_section3_quartic, QuarticPoint};

/// One permutation pushed through every stage; `error` names the stage that stopped it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripStep {
    pub permutation: [String; 4],
    pub t: Option<String>,
    pub pqrs: Option<[String; 4]>,
    pub on_quadrics: Option<bool>,
    pub on_pencil: Option<bool>,
    pub base_point: Option<[String; 3]>,
    /// `None` with a quartic point present means the vertical line (`k = ∞`).
    pub k: Option<String>,
    pub quartic_point: Option<String>,
    pub on_quartic: Option<bool>,
    pub curve_point: Option<String>,
    pub on_curve: Option<bool>,
    pub recovered_xs: Option<Vec<String>>,
    pub k_recovered: Option<bool>,
    pub error: Option<String>,
}

impl RoundTripStep {
    pub fn verified(&self) -> bool {
        self.error.is_none()
            && [self.on_quadrics, self.on_pencil, self.on_quartic, self.on_curve, self.k_recovered] == [Some(true); 5]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub solution: [String; 4],
    pub orbit: Vec<String>,
    pub steps: Vec<RoundTripStep>,
}

impl RoundTripReport {
    /// Orbit values with at least one fully verified permutation.
    pub fn verified_ts(&self) -> BTreeSet<String> {
        self.steps.iter().filter(|s| s.verified()).filter_map(|s| s.t.clone()).collect()
    }

    pub fn all_orbit_values_verified(&self) -> bool {
        self.verified_ts().len() == self.orbit.len()
    }
}

/// Forward map permutation → `(p,q,r,s)` → conic slope `k` → quartic point →
/// curve point, then the pull-back of that curve point, for all 24 orderings.
pub fn roundtrip(quad: &[BigInt; 4]) -> Result<RoundTripReport> {
    let [a, b, c, d] = quad;
    if verify_solution(a, b, c, d) != Verdict::Valid {
        return Err(Error::NotASolution(format!("({a}, {b}, {c}, {d})")));
    }
    let orbit = t_orbit(quad)?;
    let mut bases: BTreeMap<BigRat, ConicBasePoint> = BTreeMap::new();
    for t in &orbit {
        match BinaryQuadric::r_quadric(t).base_point()? {
            ConicOutcome::Point(b) => {
                bases.insert(t.clone(), b);
            }
            ConicOutcome::Insoluble { .. } => return Err(Error::Internal(format!("conic at t = {t} has no point"))),
        }
    }
    let steps = permutations(quad).iter().map(|p| step(p, &bases)).collect();
    Ok(RoundTripReport {
        solution: quad.clone().map(|x| x.to_string()),
        orbit: orbit.iter().map(format_rational).collect(),
        steps,
    })
}

fn step(perm: &[BigInt; 4], bases: &BTreeMap<BigRat, ConicBasePoint>) -> RoundTripStep {
    let mut s = RoundTripStep {
        permutation: perm.clone().map(|x| x.to_string()),
        t: None,
        pqrs: None,
        on_quadrics: None,
        on_pencil: None,
        base_point: None,
        k: None,
        quartic_point: None,
        on_quartic: None,
        curve_point: None,
        on_curve: None,
        recovered_xs: None,
        k_recovered: None,
        error: None,
    };
    if let Err(e) = fill(&mut s, perm, bases) {
        s.error = Some(e.to_string());
    }
    s
}

fn fill(s: &mut RoundTripStep, perm: &[BigInt; 4], bases: &BTreeMap<BigRat, ConicBasePoint>) -> Result<()> {
    let [a, b, c, d] = perm;
    let t = t_of(a, b, c, d)?;
    s.t = Some(format_rational(&t));
    let v = pqrs_from_solution(perm, Chart::D)?;
    s.pqrs = Some(v.clone().map(|x| format_rational(&x)));
    let [p, q, r, w] = &v;
    let (rq, sq) = (BinaryQuadric::r_quadric(&t), BinaryQuadric::s_quadric(&t));
    s.on_quadrics = Some(rq.is_on(p, q, r) && sq.is_on(p, q, w));
    let abcd = perm.clone().map(BigRat::from_integer);
    s.on_pencil = Some(evaluate_form(&build_m1(&t)?, &abcd).is_zero() && evaluate_form(&build_m2(&t)?, &abcd).is_zero());
    let base = bases.get(&t).ok_or_else(|| Error::Internal("t outside the orbit".into()))?;
    s.base_point = Some([&base.p0, &base.q0, &base.r0].map(|x| x.to_string()));
    let q0 = int_rat(base.q0.clone());
    let k = rq.slope_to(base, p, q, r);
    s.k = k.as_ref().map(format_rational);
    // (P(k), Q(k)) is lambda (p, q)
    let point = match &k {
        Some(k) => {
            let lambda = &q0 * (&rq.delta * k * k - &rq.alpha) / q;
            QuarticPoint::Finite { x: k.clone(), y: &sq.delta * &lambda * w }
        }
        None => {
            let lambda = &rq.delta * &q0 / q;
            QuarticPoint::AtInfinity { y: &sq.delta * &lambda * w }
        }
    };
    s.quartic_point = Some(show_quartic_point(&point));
    let quartic = build_section3_quartic(&t, base)?;
    s.on_quartic = Some(quartic.contains(&point));
    let e = quartic_to_curve(&quartic, &point, &t)?;
    s.curve_point = Some(show_curve_point(&e));
    s.on_curve = Some(curve_from_t(&t)?.contains(&e));
    let (xs, recovered) = match &point {
        QuarticPoint::Finite { x, .. } => {
            let xs = curve_to_quartic_xs(&quartic, &e, &t)?;
            let hit = xs.contains(x);
            (xs, hit)
        }
        QuarticPoint::AtInfinity { .. } => {
            // X -> 1/X moves the point to X = 0 without changing the invariants
            let xs = curve_to_quartic_xs(&quartic.reversed(), &e, &t)?;
            let hit = xs.contains(&BigRat::zero());
            (xs, hit)
        }
    };
    s.recovered_xs = Some(xs.iter().map(format_rational).collect());
    s.k_recovered = Some(recovered);
    Ok(())
}

pub fn show_quartic_point(p: &QuarticPoint) -> String {
    match p {
        QuarticPoint::Finite { x, y } => format!("({}, {})", format_rational(x), format_rational(y)),
        QuarticPoint::AtInfinity { y } => format!("(inf, {})", format_rational(y)),
    }
}

pub fn show_curve_point(p: &ECPoint) -> String {
    match p {
        ECPoint::Infinity => "O".into(),
        ECPoint::Affine { u, v } => format!("({}, {})", format_rational(u), format_rational(v)),
    }
}
