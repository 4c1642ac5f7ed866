use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::sieve::{sieve_t, SieveConfig, SieveReport, Stage};
use super::solution::Solution;
use super::tvalue::TValue;
use crate::ecurve::{curve_from_t, curve_to_quartic_xs, enumerate_combinations, ECPoint};
use crate::error::{Error, Result};
use crate::exactmath::{rational_sqrt_exact, BigRat};
use crate::quadform::{change_d, ConicBasePoint, QuadricOrder, QuadricPair};
use crate::quartic::{build_quartic_from_pair, build_section3_quartic, reduce_quartic, search_points, QuarticPoint};

/// Lifts a point of the quartic built from `pair` and `base` to a solution.
///
/// `None` when the point gives a degenerate quadruple or sits where the
/// conic parameterisation has no finite image.
pub fn lift_point(pair: &QuadricPair, base: &ConicBasePoint, point: &QuarticPoint) -> Result<Option<Solution>> {
    let conic = &pair.conic;
    let (p, q, w, y) = match point {
        QuarticPoint::Finite { x, y } => match conic.parameterize(base, x) {
            Ok((p, q, w)) => (p, q, w, y),
            Err(Error::ParameterAtInfinity) => return Ok(None),
            Err(e) => return Err(e),
        },
        QuarticPoint::AtInfinity { y } => {
            let d = &conic.delta;
            (d * BigRat::from_integer(base.p0.clone()), d * BigRat::from_integer(base.q0.clone()), -(d * BigRat::from_integer(base.r0.clone())), y)
        }
    };
    let w_other = y / &pair.other.delta;
    debug_assert!(conic.is_on(&p, &q, &w) && pair.other.is_on(&p, &q, &w_other));
    let pqrs = pair.to_pqrs(p, q, w, w_other);
    let abcd = change_d().apply(&pqrs);
    if abcd.iter().filter(|x| !x.is_zero()).count() < 3 {
        return Ok(None);
    }
    Solution::from_rationals(&abcd).map(Some)
}

#[derive(Clone, Debug)]
pub struct QuarticSearch {
    pub sieve: SieveReport,
    /// Points found on the reduced quartic.
    pub points: usize,
    pub solutions: Vec<Solution>,
}

/// Searches the reduced quartic for `t` up to height `h` and lifts every point.
///
/// Returns no solutions when the quadric, conic or quartic-solubility stage
/// rejects `t`.
pub fn search_quartic_method(t: &TValue, h: u64, order: QuadricOrder) -> Result<QuarticSearch> {
    let config = SieveConfig { stages: vec![Stage::Quadric, Stage::Conic, Stage::Quartic], quadric_order: order };
    let sieve = sieve_t(t, &config)?;
    if !sieve.survives() {
        return Ok(QuarticSearch { sieve, points: 0, solutions: Vec::new() });
    }
    let pair = QuadricPair::new(&t.to_rational(), order)?;
    let base = pair.conic.base_point()?.point().cloned().ok_or_else(|| Error::Internal("conic lost its point".into()))?;
    let quartic = build_quartic_from_pair(&pair, &base)?;
    let (reduced, tr) = reduce_quartic(&quartic);
    let points = search_points(&reduced, h)?;
    let mut solutions = Vec::new();
    for pt in &points {
        if let Some(s) = lift_point(&pair, &base, &tr.to_original(pt))? {
            solutions.push(s);
        }
    }
    solutions.sort();
    solutions.dedup();
    Ok(QuarticSearch { sieve, points: points.len(), solutions })
}

/// A solution with the combination that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveHit {
    #[serde(serialize_with = "crate::pipeline::serialize_display")]
    pub solution: Solution,
    pub coeffs: Vec<i64>,
    pub torsion: bool,
    #[serde(serialize_with = "crate::pipeline::serialize_rational")]
    pub x: BigRat,
}

/// Every combination of `gens` with `|n_i| <= bound` is pulled back to the
/// quartic in the conic slope and lifted. Hits come in enumeration order,
/// one per combination and quartic `X`.
pub fn search_curve_method(t: &TValue, gens: &[ECPoint], bound: u32) -> Result<Vec<CurveHit>> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let tr = t.to_rational();
    let pair = QuadricPair::new(&tr, QuadricOrder::Forward)?;
    let Some(base) = pair.conic.base_point()?.point().cloned() else {
        return Ok(Vec::new());
    };
    let quartic = build_section3_quartic(&tr, &base)?;
    let curve = curve_from_t(&tr)?;
    let combos = enumerate_combinations(&curve, gens, bound);
    let hits: Vec<Vec<CurveHit>> = combos
        .par_iter()
        .map(|c| -> Result<Vec<CurveHit>> {
            if c.point.is_two_torsion_origin() {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for x in curve_to_quartic_xs(&quartic, &c.point, &tr)? {
                let Some(y) = rational_sqrt_exact(&quartic.eval(&x)) else { continue };
                if let Some(solution) = lift_point(&pair, &base, &QuarticPoint::Finite { x: x.clone(), y })? {
                    out.push(CurveHit { solution, coeffs: c.coeffs.clone(), torsion: c.torsion, x });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Distinct solutions among the hits, sorted.
pub fn distinct_solutions(hits: &[CurveHit]) -> Vec<Solution> {
    let mut v: Vec<Solution> = hits.iter().map(|h| h.solution.clone()).collect();
    v.sort();
    v.dedup();
    v
}
