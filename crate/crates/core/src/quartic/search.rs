use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{BinaryQuartic, QuarticPoint};
use crate::error::{Error, Result};
use crate::exactmath::{integer_sqrt_exact, rational_sqrt_exact, BigInt, BigRat};

const MODULI: [u64; 18] = [64, 9, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

/// All points `X = p/q'` with `|p|, q' <= h`, `gcd(p, q') = 1`, `Y >= 0`, plus
/// both points at infinity when `A` is a nonzero square. Sorted.
///
/// Numerators are sieved with square tables modulo small moduli before the
/// exact square test. Denominators are processed in parallel; the output does
/// not depend on the thread count.
pub fn search_points(q: &BinaryQuartic, h: u64) -> Result<Vec<QuarticPoint>> {
    if q.is_degenerate() {
        return Err(Error::DegenerateQuartic);
    }
    let h = i64::try_from(h).map_err(|_| Error::InvalidInput("height bound too large".into()))?;
    let (g, l) = q.integral_model();
    let squares: Vec<Vec<bool>> = MODULI
        .iter()
        .map(|&m| {
            let mut s = vec![false; m as usize];
            for y in 0..m {
                s[(y * y % m) as usize] = true;
            }
            s
        })
        .collect();
    let g_mod: Vec<[u64; 5]> = MODULI
        .iter()
        .map(|&m| g.clone().map(|c| c.mod_floor(&BigInt::from(m)).to_u64().unwrap()))
        .collect();

    let mut points: Vec<QuarticPoint> = (1..=h)
        .into_par_iter()
        .flat_map_iter(|den| {
            let tables: Vec<Vec<bool>> = MODULI
                .iter()
                .enumerate()
                .map(|(i, &m)| {
                    let z = den as u64 % m;
                    (0..m).map(|x| squares[i][hom_mod(&g_mod[i], x, z, m) as usize]).collect()
                })
                .collect();
            let mut found = Vec::new();
            for num in -h..=h {
                if !tables.iter().zip(MODULI.iter()).all(|(t, &m)| t[num.rem_euclid(m as i64) as usize]) {
                    continue;
                }
                if num.gcd(&den) != 1 {
                    continue;
                }
                let (nb, db) = (BigInt::from(num), BigInt::from(den));
                let v = hom(&g, &nb, &db);
                if let Some(r) = integer_sqrt_exact(&v) {
                    let x = BigRat::new(nb, db.clone());
                    let y = BigRat::new(r, &l * &db * &db);
                    found.push(QuarticPoint::Finite { x, y });
                }
            }
            found
        })
        .collect();
    if q.a().is_positive() {
        if let Some(r) = rational_sqrt_exact(q.a()) {
            points.push(QuarticPoint::AtInfinity { y: -r.clone() });
            points.push(QuarticPoint::AtInfinity { y: r });
        }
    }
    points.sort();
    debug_assert!(points.iter().all(|p| q.contains(p)));
    Ok(points)
}

fn hom(g: &[BigInt; 5], x: &BigInt, z: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut zp = BigInt::from(1);
    let xp: Vec<BigInt> = (0..5).map(|i| num_traits::pow(x.clone(), i)).collect();
    for i in 0..5 {
        acc += &g[i] * &xp[4 - i] * &zp;
        zp *= z;
    }
    acc
}

fn hom_mod(g: &[u64; 5], x: u64, z: u64, m: u64) -> u64 {
    let mut acc = 0u64;
    let mut zp = 1u64;
    let xp = [1, x, x * x % m, x * x % m * x % m, x * x % m * (x * x % m) % m];
    for i in 0..5 {
        acc = (acc + g[i] * xp[4 - i] % m * zp) % m;
        zp = zp * z % m;
    }
    acc
}
