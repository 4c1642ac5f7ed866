use rayon::prelude::*;

/// Every quadruple with entries in `[-bound, bound]` satisfying the equation,
/// one per class under permutation and global negation: entries ascending,
/// and no larger than the ascending form of its negation.
///
/// Plain machine-integer arithmetic only.
pub fn brute_force(bound: i64) -> Vec<[i64; 4]> {
    assert!(bound >= 1, "bound must be positive");
    let p4 = |x: i64| {
        let x = x as i128;
        x * x * x * x
    };
    let mut out: Vec<[i64; 4]> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut found = Vec::new();
            for b in a..=bound {
                for c in b..=bound {
                    for d in c..=bound {
                        if p4(a) + p4(b) + p4(c) + p4(d) == p4(a + b + c + d) {
                            let q = [a, b, c, d];
                            if q <= [-d, -c, -b, -a] {
                                found.push(q);
                            }
                        }
                    }
                }
            }
            found
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All 4-tuples, reduced to the class representative afterwards.
    fn naive(bound: i64) -> Vec<[i64; 4]> {
        let mut v = Vec::new();
        let r = -bound..=bound;
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    for d in r.clone() {
                        let lhs = [a, b, c, d].iter().map(|&x| (x as i128).pow(4)).sum::<i128>();
                        if lhs == ((a + b + c + d) as i128).pow(4) {
                            let mut s = [a, b, c, d];
                            s.sort();
                            let mut n = [-a, -b, -c, -d];
                            n.sort();
                            v.push(s.min(n));
                        }
                    }
                }
            }
        }
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn only_trivial_and_matches_naive() {
        let found = brute_force(12);
        assert_eq!(found, naive(12));
        assert!(found.iter().all(|q| q.iter().filter(|&&x| x != 0).count() <= 1));
        assert_eq!(found.len(), 13);
    }
}
