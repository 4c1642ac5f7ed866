use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{content, BigInt, BigRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Valid,
    Trivial,
    Invalid,
}

/// The equation holds and at least three entries are nonzero: `Valid`.
/// Holds with at most one nonzero entry: `Trivial`.
pub fn verify_solution(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Verdict {
    let p4 = |x: &BigInt| {
        let x2 = x * x;
        &x2 * &x2
    };
    let holds = p4(a) + p4(b) + p4(c) + p4(d) == p4(&(a + b + c + d));
    let nonzero = [a, b, c, d].iter().filter(|x| !x.is_zero()).count();
    match (holds, nonzero) {
        (true, n) if n >= 3 => Verdict::Valid,
        (true, n) if n <= 1 => Verdict::Trivial,
        _ => Verdict::Invalid,
    }
}

/// A primitive solution in canonical form: the largest-magnitude entry is
/// positive and the entries are sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    entries: [BigInt; 4],
}

impl Solution {
    /// Checks validity and canonicalizes; any rational rescaling of a
    /// solution is accepted as long as the integers given are nonzero multiples.
    pub fn new(quad: [BigInt; 4]) -> Result<Self> {
        let [a, b, c, d] = &quad;
        match verify_solution(a, b, c, d) {
            Verdict::Valid => Ok(Solution { entries: canonicalize(&quad) }),
            v => Err(Error::NotASolution(format!("({a}, {b}, {c}, {d}) is {v:?}").to_lowercase())),
        }
    }

    /// Scales a rational quadruple to integers first.
    pub fn from_rationals(v: &[BigRat; 4]) -> Result<Self> {
        let l = crate::exactmath::lcm_denominators(v);
        Self::new(v.clone().map(|x| (x * &l).to_integer()))
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.entries
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "{a},{b},{c},{d}")
    }
}

/// Primitive, largest-magnitude entry positive, sorted ascending. When the
/// largest magnitude occurs with both signs the smaller sorted tuple wins.
pub fn canonicalize(quad: &[BigInt; 4]) -> [BigInt; 4] {
    let g = content(quad.iter());
    let prim: [BigInt; 4] = if g.is_zero() { quad.clone() } else { quad.clone().map(|x| x / &g) };
    let sorted = |mut v: [BigInt; 4]| {
        v.sort();
        v
    };
    let plus = sorted(prim.clone());
    let minus = sorted(prim.map(|x| -x));
    let max = plus.iter().map(|x| x.abs()).max().unwrap();
    let ok = |v: &[BigInt; 4]| v.contains(&max);
    match (ok(&plus), ok(&minus)) {
        (true, true) => plus.min(minus),
        (true, false) => plus,
        _ => minus,
    }
}

/// `(F, G, H) = (a^2+ab+b^2, c^2+cd+d^2, (a+b)^2+(a+b)(c+d)+(c+d)^2)`.
pub fn compute_fgh(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> (BigInt, BigInt, BigInt) {
    let q = |x: &BigInt, y: &BigInt| x * x + x * y + y * y;
    (q(a, b), q(c, d), q(&(a + b), &(c + d)))
}

/// `t = (c^2+cd+d^2) / ((a+c+d)(b+c+d))`.
pub fn t_of(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<BigRat> {
    let den = (a + c + d) * (b + c + d);
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!("(a+c+d)(b+c+d) = 0 for ({a}, {b}, {c}, {d})")));
    }
    Ok(BigRat::new(c * c + c * d + d * d, den))
}

/// `t -> (t+1)/(t-1)`, which pairs the orbit values.
pub fn involution(t: &BigRat) -> Result<BigRat> {
    let den = t - BigRat::one();
    if den.is_zero() {
        return Err(Error::ZeroDenominator("t = 1".into()));
    }
    Ok((t + BigRat::one()) / den)
}

/// The 24 orderings of a quadruple, in lexicographic order of index tuples.
pub fn permutations(quad: &[BigInt; 4]) -> Vec<[BigInt; 4]> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if i == j || j == k || i == k {
                    continue;
                }
                let l = 6 - i - j - k;
                out.push([quad[i].clone(), quad[j].clone(), quad[k].clone(), quad[l].clone()]);
            }
        }
    }
    out
}

/// The distinct `t` values over all 24 orderings; exactly six for a solution.
pub fn t_orbit(quad: &[BigInt; 4]) -> Result<BTreeSet<BigRat>> {
    let mut out = BTreeSet::new();
    for p in permutations(quad) {
        let [a, b, c, d] = &p;
        out.insert(t_of(a, b, c, d)?);
    }
    if out.len() != 6 {
        return Err(Error::Internal(format!("t-orbit has {} values, expected 6", out.len())));
    }
    Ok(out)
}

/// `gcd` of a quadruple is one.
pub fn is_primitive(quad: &[BigInt; 4]) -> bool {
    quad.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_rat, rat};
    use proptest::prelude::*;

    pub(crate) fn brudno() -> [BigInt; 4] {
        [5400, 1770, -2634, 955].map(BigInt::from)
    }

    fn b(v: [i64; 4]) -> [BigInt; 4] {
        v.map(BigInt::from)
    }

    #[test]
    fn verdicts() {
        let [a, bb, c, d] = brudno();
        assert_eq!(verify_solution(&a, &bb, &c, &d), Verdict::Valid);
        let [a, bb, c, d] = b([7, 0, 0, 0]);
        assert_eq!(verify_solution(&a, &bb, &c, &d), Verdict::Trivial);
        let [a, bb, c, d] = b([1, 2, 3, 4]);
        assert_eq!(verify_solution(&a, &bb, &c, &d), Verdict::Invalid);
        let [a, bb, c, d] = b([0, 0, 0, 0]);
        assert_eq!(verify_solution(&a, &bb, &c, &d), Verdict::Trivial);
    }

    #[test]
    fn fgh_values() {
        let [a, bb, c, d] = brudno();
        let (f, g, h) = compute_fgh(&a, &bb, &c, &d);
        assert_eq!((f.clone(), g.clone(), h.clone()), (41850900.into(), 5334511.into(), 42189511.into()));
        assert_eq!(&h - &f, BigInt::from(338611));
        assert_eq!(BigRat::new(g.clone(), &h - &f), rat(961, 61));
        assert_eq!(&g * &g, (&h + &f) * (&h - &f));
        assert_eq!(compute_fgh(&1.into(), &1.into(), &1.into(), &1.into()), (3.into(), 3.into(), 12.into()));
    }

    #[test]
    fn t_values() {
        let [a, bb, c, d] = brudno();
        assert_eq!(t_of(&a, &bb, &c, &d).unwrap(), rat(961, 61));
        assert_eq!(t_of(&bb, &a, &c, &d).unwrap(), rat(961, 61));
        let [a, bb, c, d] = b([-2634, 955, 5400, 1770]);
        assert_eq!(t_of(&a, &bb, &c, &d).unwrap(), rat(511, 450));
        let [a, bb, c, d] = b([1, 1, -1, 0]);
        assert!(matches!(t_of(&a, &bb, &c, &d), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn brudno_orbit() {
        let orbit = t_orbit(&brudno()).unwrap();
        let expected: BTreeSet<BigRat> =
            [(961, 61), (2521, 325), (1651, 126), (1777, 1525), (1423, 1098), (511, 450)].iter().map(|&(m, n)| rat(m, n)).collect();
        assert_eq!(orbit, expected);
        assert_eq!(involution(&rat(961, 61)).unwrap(), rat(511, 450));
        for t in &orbit {
            assert!(orbit.contains(&involution(t).unwrap()));
        }
    }

    #[test]
    fn canonical_form() {
        let s = Solution::new(brudno()).unwrap();
        assert_eq!(s.entries(), &b([-2634, 955, 1770, 5400]));
        let neg = Solution::new(brudno().map(|x| -x * 3)).unwrap();
        assert_eq!(neg, s);
        assert_eq!(canonicalize(&b([5, -5, 1, 0])), b([-5, -1, 0, 5]));
        assert!(Solution::new(b([1, 2, 3, 4])).is_err());
        assert!(is_primitive(s.entries()));
    }

    proptest! {
        #[test]
        fn involution_is_an_involution(m in -10_000i64..10_000, n in 1i64..10_000) {
            let t = rat(m, n);
            prop_assume!(t != int_rat(1));
            prop_assert_eq!(involution(&involution(&t).unwrap()).unwrap(), t);
        }

        #[test]
        fn quartic_identity(x in (-1000i64..1000, 1i64..1000), y in (-1000i64..1000, 1i64..1000)) {
            let (x, y) = (rat(x.0, x.1), rat(y.0, y.1));
            let p4 = |v: &BigRat| v * v * v * v;
            let q = &x * &x + &x * &y + &y * &y;
            prop_assert_eq!(p4(&x) + p4(&y) + p4(&(&x + &y)), int_rat(2) * &q * &q);
        }

        #[test]
        fn form_is_positive(x in -100_000i64..100_000, y in -100_000i64..100_000) {
            prop_assume!(x != 0 || y != 0);
            let (x, y) = (BigInt::from(x), BigInt::from(y));
            prop_assert!((&x * &x + &x * &y + &y * &y).is_positive());
        }

        #[test]
        fn canonical_form_is_permutation_and_sign_invariant(perm in 0usize..24, neg in any::<bool>(), k in 1i64..50) {
            let base = Solution::new(brudno()).unwrap();
            let mut q = permutations(&brudno())[perm].clone().map(|x| x * k);
            if neg {
                q = q.map(|x| -x);
            }
            prop_assert_eq!(Solution::new(q).unwrap(), base);
        }
    }
}
