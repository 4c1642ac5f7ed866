use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{int_rat, BigInt, BigRat};

/// Symmetric 4×4 rational matrix, stored as its upper triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatrix4 {
    upper: [BigRat; 10],
}

const SLOT: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 4, 5, 6], [2, 5, 7, 8], [3, 6, 8, 9]];

fn slot(i: usize, j: usize) -> usize {
    SLOT[i][j]
}

impl SymMatrix4 {
    pub fn zero() -> Self {
        SymMatrix4 { upper: std::array::from_fn(|_| BigRat::zero()) }
    }

    pub fn diagonal(d: [BigRat; 4]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds from a full matrix, panicking if it is not symmetric.
    pub fn from_rows(rows: [[BigRat; 4]; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in i..4 {
                assert_eq!(rows[i][j], rows[j][i], "matrix not symmetric at ({i},{j})");
                m.set(i, j, rows[i][j].clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRat {
        &self.upper[slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRat) {
        self.upper[slot(i, j)] = v;
    }

    pub fn rows(&self) -> [[BigRat; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.get(i, j).clone()))
    }

    pub fn scale(&self, s: &BigRat) -> Self {
        SymMatrix4 { upper: std::array::from_fn(|k| &self.upper[k] * s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        SymMatrix4 { upper: std::array::from_fn(|k| &self.upper[k] + &other.upper[k]) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SymMatrix4 { upper: std::array::from_fn(|k| &self.upper[k] - &other.upper[k]) }
    }

    /// Determinant by cofactor expansion (exact).
    pub fn determinant(&self) -> BigRat {
        Matrix4 { rows: self.rows() }.determinant()
    }
}

impl fmt::Display for SymMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..4 {
            let row: Vec<String> = (0..4).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// General 4×4 rational matrix (used for the changes of variables).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix4 {
    pub rows: [[BigRat; 4]; 4],
}

impl Matrix4 {
    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        Matrix4 { rows: rows.map(|r| r.map(|v| int_rat(v))) }
    }

    pub fn identity() -> Self {
        Matrix4 { rows: std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigRat::one() } else { BigRat::zero() })) }
    }

    pub fn apply(&self, v: &[BigRat; 4]) -> [BigRat; 4] {
        std::array::from_fn(|i| (0..4).map(|j| &self.rows[i][j] * &v[j]).sum())
    }

    pub fn determinant(&self) -> BigRat {
        let m = &self.rows;
        let minor = |skip: usize| -> BigRat {
            let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
            let r = |i: usize, j: usize| &m[i][cols[j]];
            r(1, 0) * (r(2, 1) * r(3, 2) - r(2, 2) * r(3, 1)) - r(1, 1) * (r(2, 0) * r(3, 2) - r(2, 2) * r(3, 0))
                + r(1, 2) * (r(2, 0) * r(3, 1) - r(2, 1) * r(3, 0))
        };
        (0..4)
            .map(|c| {
                let term = &m[0][c] * minor(c);
                if c % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }
}

pub(crate) fn admissible(t: &BigRat) -> Result<()> {
    if t.is_zero() || t.is_one() || *t == -BigRat::one() {
        return Err(Error::DegenerateParameter(t.clone()));
    }
    Ok(())
}

/// Doubled coefficient matrix of `H + F - tG` in `(a, b, c, d)`.
pub fn build_m1(t: &BigRat) -> Result<SymMatrix4> {
    admissible(t)?;
    let one = BigRat::one();
    let two = int_rat(2);
    let i = |v: i64| int_rat(v);
    let diag = &two * (&one - t);
    let off = &two - t;
    Ok(SymMatrix4::from_rows([
        [i(4), i(3), i(1), i(1)],
        [i(3), i(4), i(1), i(1)],
        [i(1), i(1), diag.clone(), off.clone()],
        [i(1), i(1), off, diag],
    ]))
}

/// Doubled coefficient matrix of `t(H - F) - G` in `(a, b, c, d)`.
pub fn build_m2(t: &BigRat) -> Result<SymMatrix4> {
    admissible(t)?;
    let one = BigRat::one();
    let two = int_rat(2);
    let z = BigRat::zero();
    let diag = &two * (t - &one);
    let off = &two * t - &one;
    Ok(SymMatrix4::from_rows([
        [z.clone(), t.clone(), t.clone(), t.clone()],
        [t.clone(), z, t.clone(), t.clone()],
        [t.clone(), t.clone(), diag.clone(), off.clone()],
        [t.clone(), t.clone(), off, diag],
    ]))
}

/// `v^T M v`.
pub fn evaluate_form(m: &SymMatrix4, v: &[BigRat; 4]) -> BigRat {
    let mut acc = BigRat::zero();
    for i in 0..4 {
        if v[i].is_zero() {
            continue;
        }
        for j in 0..4 {
            acc += m.get(i, j) * &v[i] * &v[j];
        }
    }
    acc
}

/// `T^T M T`.
pub fn conjugate(m: &SymMatrix4, t: &Matrix4) -> SymMatrix4 {
    let mut out = SymMatrix4::zero();
    for i in 0..4 {
        for j in i..4 {
            let mut acc = BigRat::zero();
            for k in 0..4 {
                if t.rows[k][i].is_zero() {
                    continue;
                }
                for l in 0..4 {
                    acc += &t.rows[k][i] * m.get(k, l) * &t.rows[l][j];
                }
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// `(a,b,c,d) = C (p,q,r,s)`: the classical substitution that isolates
/// the diagonal quadric in `(q, r, s)`.
pub fn change_c() -> Matrix4 {
    Matrix4::from_ints([[0, 0, 2, 2], [0, 0, 2, -2], [-1, -1, -1, 0], [1, -1, -1, 0]])
}

/// `(a,b,c,d) = D (p,q,r,s)`: splits the pencil into two ternary quadrics.
pub fn change_d() -> Matrix4 {
    Matrix4::from_ints([[1, -2, 1, 0], [1, -2, -1, 0], [0, 1, 0, 1], [0, 1, 0, -1]])
}

/// Every matrix of the reduced pencils, recomputed by conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilReductions {
    pub m3: SymMatrix4,
    pub m4: SymMatrix4,
    /// `(M3 - t M4) / 8`
    pub m5: SymMatrix4,
    pub m31: SymMatrix4,
    pub m41: SymMatrix4,
    /// `(t M31 + M41) / 2`
    pub m51: SymMatrix4,
    /// `(t M41 - M31) / 2`
    pub m61: SymMatrix4,
}

pub fn pencil_reductions(t: &BigRat) -> Result<PencilReductions> {
    let m1 = build_m1(t)?;
    let m2 = build_m2(t)?;
    let (c, d) = (change_c(), change_d());
    let m3 = conjugate(&m1, &c);
    let m4 = conjugate(&m2, &c);
    let m5 = m3.sub(&m4.scale(t)).scale(&BigRat::new(1.into(), 8.into()));
    let m31 = conjugate(&m1, &d);
    let m41 = conjugate(&m2, &d);
    let half = BigRat::new(1.into(), 2.into());
    let m51 = m31.scale(t).add(&m41).scale(&half);
    let m61 = m41.scale(t).sub(&m31).scale(&half);
    Ok(PencilReductions { m3, m4, m5, m31, m41, m51, m61 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    C,
    D,
}

/// Inverts the chosen change of variables: returns `(p, q, r, s)`.
///
/// For `D` the chart requires `c + d != 0` (otherwise `q = 0`).
pub fn pqrs_from_solution(abcd: &[BigInt; 4], chart: Chart) -> Result<[BigRat; 4]> {
    let [a, b, c, d] = abcd.clone().map(BigRat::from_integer);
    let two = int_rat(2);
    let four = int_rat(4);
    match chart {
        Chart::C => {
            let r = (&a + &b) / &four;
            let s = (&a - &b) / &four;
            let p = (&d - &c) / &two;
            let q = -(&c + &d) / &two - &r;
            Ok([p, q, r, s])
        }
        Chart::D => {
            if (&c + &d).is_zero() {
                return Err(Error::ChartViolation("c + d = 0 gives q = 0".into()));
            }
            let q = (&c + &d) / &two;
            let p = (&a + &b) / &two + (&c + &d);
            let r = (&a - &b) / &two;
            let s = (&c - &d) / &two;
            Ok([p, q, r, s])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn ints(v: [i64; 4]) -> [BigInt; 4] {
        v.map(BigInt::from)
    }

    fn rats(v: [i64; 4]) -> [BigRat; 4] {
        v.map(|x| int_rat(x))
    }

    #[test]
    fn slot_layout() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..4 {
            for j in i..4 {
                assert!(slot(i, j) < 10);
                assert_eq!(slot(i, j), slot(j, i));
                seen.insert(slot(i, j));
            }
        }
        assert_eq!(seen.len(), 10);
    }

    #[test]
    fn m1_m2_at_two() {
        let t = int_rat(2);
        let m1 = build_m1(&t).unwrap();
        assert_eq!(m1.rows()[3], rats([1, 1, 0, -2]));
        assert_eq!(*build_m2(&t).unwrap().get(2, 2), int_rat(2));
    }

    #[test]
    fn degenerate_t_rejected() {
        for t in [0, 1, -1] {
            assert!(matches!(build_m1(&int_rat(t)), Err(Error::DegenerateParameter(_))));
            assert!(build_m2(&int_rat(t)).is_err());
        }
    }

    #[test]
    fn brudno_lies_on_both_quadrics() {
        let t = rat(961, 61);
        let m1 = build_m1(&t).unwrap();
        let m2 = build_m2(&t).unwrap();
        let v = rats([5400, 1770, -2634, 955]);
        assert!(evaluate_form(&m1, &v).is_zero());
        assert!(evaluate_form(&m2, &v).is_zero());
        assert!(evaluate_form(&m1, &rats([1770, 5400, -2634, 955])).is_zero());
        assert_eq!(evaluate_form(&m1, &rats([1, 0, 0, 0])), int_rat(4));
    }

    #[test]
    fn conjugation_by_identity() {
        let m = build_m1(&rat(5, 3)).unwrap();
        assert_eq!(conjugate(&m, &Matrix4::identity()), m);
    }

    #[test]
    fn m4_at_three_matches_printed() {
        let t = int_rat(3);
        let m4 = conjugate(&build_m2(&t).unwrap(), &change_c());
        let printed = SymMatrix4::from_rows([
            rats([-2, 0, 0, 0]),
            rats([0, 18, -6, 0]),
            rats([0, -6, -6, 0]),
            rats([0, 0, 0, -24]),
        ]);
        assert_eq!(m4, printed);
    }

    #[test]
    fn m3_differs_from_printed_only_at_last_diagonal() {
        let t = rat(7, 4);
        let m3 = conjugate(&build_m1(&t).unwrap(), &change_c());
        let z = BigRat::zero;
        let six_t = int_rat(6) * &t;
        let printed = SymMatrix4::from_rows([
            [int_rat(-2) * &t, z(), z(), z()],
            [z(), int_rat(8) - &six_t, -six_t.clone(), z()],
            [z(), -six_t.clone(), int_rat(48) - &six_t, z()],
            [z(), z(), z(), int_rat(8) * &t],
        ]);
        let diff = m3.sub(&printed);
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) != (3, 3) {
                    assert!(diff.get(i, j).is_zero(), "({i},{j})");
                }
            }
        }
        assert_eq!(*m3.get(3, 3), int_rat(8));
    }

    #[test]
    fn reductions_spot_values() {
        let r = pencil_reductions(&int_rat(3)).unwrap();
        assert_eq!(r.m5, SymMatrix4::diagonal(rats([0, -8, 6, 10])));
        let r = pencil_reductions(&int_rat(2)).unwrap();
        assert_eq!(*r.m51.get(0, 0), int_rat(16));
        assert_eq!(*r.m61.get(0, 0), int_rat(-3));
    }

    #[test]
    fn d_inverse_of_brudno() {
        let v = pqrs_from_solution(&ints([5400, 1770, -2634, 955]), Chart::D).unwrap();
        assert_eq!(v, [int_rat(1906), rat(-1679, 2), int_rat(1815), rat(-3589, 2)]);
        assert_eq!(change_d().apply(&v), rats([5400, 1770, -2634, 955]));
        assert!(matches!(
            pqrs_from_solution(&ints([1, 1, 1, -1]), Chart::D),
            Err(Error::ChartViolation(_))
        ));
    }

    #[test]
    fn determinant_of_changes() {
        assert_eq!(change_c().determinant(), int_rat(-16));
        assert_eq!(change_d().determinant(), int_rat(-4));
    }

    proptest::proptest! {
        #[test]
        fn change_c_round_trips(v in proptest::array::uniform4(-1000i64..1000)) {
            let w = rats(v);
            let abcd = change_c().apply(&w);
            let ints: [BigInt; 4] = abcd.map(|x| x.to_integer());
            proptest::prop_assert_eq!(pqrs_from_solution(&ints, Chart::C).unwrap(), w);
        }

        #[test]
        fn change_d_round_trips(v in proptest::array::uniform4(-1000i64..1000)) {
            proptest::prop_assume!(v[2] + v[3] != 0);
            let abcd = ints(v);
            let w = pqrs_from_solution(&abcd, Chart::D).unwrap();
            proptest::prop_assert_eq!(change_d().apply(&w), rats(v));
        }
    }
}
