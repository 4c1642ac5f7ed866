//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fail.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use jm_core::ecurve::{curve_from_t, discriminant, parse_generators};
use jm_core::exactmath::{int_rat, rat, rational_sqrt_exact, BigInt, BigRat};
use jm_core::pipeline::{
    brute_force, conjecture_filter, enumerate_t, involution, normalize_t, permutations, roundtrip, t_of,
    search_curve_method, search_quartic_method, shipped_corpus, sieve_t, t_orbit, SieveConfig, Solution, Stage, TValue,
};
use jm_core::quadform::{
    build_m1, build_m2, pencil_reductions, pqrs_from_solution, Chart, QuadricOrder, QuadricPair, SymMatrix4,
};
use jm_core::quartic::{build_pencil_quartic, build_quartic_from_pair, k_of, reduce_quartic, QuarticPoint};
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ints(v: [&str; 4]) -> [BigInt; 4] {
    v.map(|s| s.parse().unwrap())
}

fn brudno() -> [BigInt; 4] {
    ints(["5400", "1770", "-2634", "955"])
}

/// Random `t = m/n > 1`.
fn random_t(rng: &mut StdRng) -> BigRat {
    let n: i64 = rng.gen_range(1..400);
    let m: i64 = rng.gen_range(n + 1..n + 600);
    rat(m, n)
}

fn poly(t: &BigRat, coeffs: &[i64]) -> BigRat {
    coeffs.iter().fold(BigRat::zero(), |acc, &c| acc * t + int_rat(c))
}

fn p4(x: &BigInt) -> BigInt {
    num_traits::pow(x.clone(), 4)
}

/// The six t-values as `G/(H-F)` over the 24 orderings, written independently of the library.
fn orbit_oracle(q: &[BigInt; 4]) -> BTreeSet<BigRat> {
    let mut out = BTreeSet::new();
    let idx = [0usize, 1, 2, 3];
    for &i in &idx {
        for &j in &idx {
            for &k in &idx {
                if i == j || j == k || i == k {
                    continue;
                }
                let l = 6 - i - j - k;
                let (a, b, c, d) = (&q[i], &q[j], &q[k], &q[l]);
                let f = a * a + a * b + b * b;
                let g = c * c + c * d + d * d;
                let s = a + b;
                let u = c + d;
                let h = &s * &s + &s * &u + &u * &u;
                let den = &h - &f;
                assert!(!den.is_zero());
                out.insert(BigRat::new(g, den));
            }
        }
    }
    out
}

fn c1_corpus() -> Outcome {
    let start = Instant::now();
    let recs = shipped_corpus().map_err(|e| e.to_string())?;
    let mut sources = BTreeSet::new();
    for r in &recs {
        let [a, b, c, d] = &r.quad;
        ensure(p4(a) + p4(b) + p4(c) + p4(d) == p4(&(a + b + c + d)), format!("equation fails for {:?}", r.quad))?;
        let orbit = orbit_oracle(&r.quad);
        ensure(orbit.len() == 6, format!("orbit size {} for {:?}", orbit.len(), r.quad))?;
        ensure(orbit.contains(&r.t.to_rational()), format!("t = {} not in orbit", r.t))?;
        ensure(t_orbit(&r.quad).map_err(|e| e.to_string())? == orbit, "library orbit differs from oracle")?;
        sources.insert(r.source.clone());
    }
    let expected: BTreeSet<String> = ["table-2.1", "table-2.2", "table-3.1", "table-3.2", "table-4.3", "large-solutions"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    ensure(sources == expected, format!("sources {sources:?}"))?;
    ensure(recs.len() == 33, format!("{} records", recs.len()))?;
    let el = start.elapsed();
    ensure(el < Duration::from_secs(5), format!("took {el:?}"))?;
    Ok(format!("{} records from {} sources verified in {el:.2?}", recs.len(), sources.len()))
}

fn c2_brudno_orbit() -> Outcome {
    let orbit = t_orbit(&brudno()).map_err(|e| e.to_string())?;
    let expected: BTreeSet<BigRat> =
        [(961, 61), (2521, 325), (1651, 126), (1777, 1525), (1423, 1098), (511, 450)].iter().map(|&(m, n)| rat(m, n)).collect();
    ensure(orbit == expected, format!("{orbit:?}"))?;
    for t in &orbit {
        let u = involution(t).map_err(|e| e.to_string())?;
        ensure(orbit.contains(&u), format!("{t} pairs outside the orbit"))?;
        ensure(&u != t, "fixed point")?;
    }
    ensure(involution(&rat(961, 61)).unwrap() == rat(511, 450), "961/61 does not pair with 511/450")?;
    Ok("six values, three pairs under t -> (t+1)/(t-1)".into())
}

fn printed_detq4(t: &BigRat, x: &BigRat) -> BigRat {
    let c = [
        int_rat(3) * t * (int_rat(7) * t - int_rat(8)),
        int_rat(-6) * poly(t, &[3, 0, -7, 4]),
        int_rat(-3) * poly(t, &[1, -8, 12, 0, -7]),
        int_rat(-6) * t * poly(t, &[1, -4, 3]),
        int_rat(-3) * t * t,
    ];
    c.iter().fold(BigRat::zero(), |acc, v| acc * x + v)
}

fn pencil_det(t: &BigRat, x: &BigRat) -> BigRat {
    build_m1(t).unwrap().scale(x).add(&build_m2(t).unwrap()).determinant()
}

fn c3_determinant() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..20 {
        let t = random_t(&mut rng);
        let x = rat(rng.gen_range(-500..500), rng.gen_range(1..200));
        ensure(pencil_det(&t, &x) == printed_detq4(&t, &x), format!("mismatch at t={t}, X={x}"))?;
        let q = build_pencil_quartic(&t).unwrap();
        ensure(q.eval(&x) == printed_detq4(&t, &x), "polynomial determinant differs")?;
    }
    let spot = pencil_det(&int_rat(2), &int_rat(1));
    ensure(spot == int_rat(-27), format!("t=2, X=1 gives {spot}"))?;
    Ok("20 random (t, X) agree; t=2, X=1 gives -27".into())
}

fn c4_invariants() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let closed = |t: &BigRat| {
        let k = poly(t, &[1, -8, -6, 24, -7]);
        let i = int_rat(9) * poly(t, &[1, -16, 52, -48, 22, -176, 276, -144, 49]);
        let j = int_rat(54) * &k * poly(t, &[1, -16, 52, -144, 214, -176, 84, -48, 49]);
        (i, j, k)
    };
    let mut ts: Vec<BigRat> = (0..20).map(|_| random_t(&mut rng)).collect();
    ts.push(int_rat(2));
    for t in &ts {
        let (i, j) = build_pencil_quartic(t).unwrap().invariants();
        let (ic, jc, k) = closed(t);
        ensure(i == ic && j == jc, format!("invariants differ at t={t}"))?;
        ensure(k == k_of(t), "K differs")?;
        let x = int_rat(-9) * &k;
        ensure((&x * &x * &x - int_rat(27) * &i * &x - int_rat(27) * &j).is_zero(), format!("x=-9K is not a root at t={t}"))?;
    }
    let (i2, j2) = build_pencil_quartic(&int_rat(2)).unwrap().invariants();
    ensure(i2 == int_rat(-1719) && j2 == int_rat(1283958), format!("t=2 gives I={i2}, J={j2}"))?;
    Ok("closed forms hold at 20 random t; t=2 gives I=-1719, J=1283958; x=-9K is a root".into())
}

fn sym(rows: [[BigRat; 4]; 4]) -> SymMatrix4 {
    SymMatrix4::from_rows(rows)
}

fn c5_matrices() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let z = BigRat::zero;
    let i = int_rat;
    for _ in 0..50 {
        let t = random_t(&mut rng);
        let t2 = &t * &t;
        let r = pencil_reductions(&t).unwrap();
        let m5 = sym([
            [z(), z(), z(), z()],
            [z(), i(1) - &t2, z(), z()],
            [z(), z(), i(6), z()],
            [z(), z(), z(), &t2 + i(1)],
        ]);
        let m51 = sym([
            [i(8) * &t, i(-12) * &t, z(), z()],
            [i(-12) * &t, i(-3) * poly(&t, &[1, -8, 1]), z(), z()],
            [z(), z(), z(), z()],
            [z(), z(), z(), -(&t2 + i(1))],
        ]);
        let m61 = sym([
            [&t2 - i(7), i(12), z(), z()],
            [i(12), i(-24), z(), z()],
            [z(), z(), -(&t2 + i(1)), z()],
            [z(), z(), z(), z()],
        ]);
        ensure(r.m5 == m5, format!("M5 differs at t={t}"))?;
        ensure(r.m51 == m51, format!("M51 differs at t={t}"))?;
        ensure(r.m61 == m61, format!("M61 differs at t={t}"))?;
        let printed_m3 = sym([
            [i(-2) * &t, z(), z(), z()],
            [z(), i(8) - i(6) * &t, i(-6) * &t, z()],
            [z(), i(-6) * &t, i(48) - i(6) * &t, z()],
            [z(), z(), z(), i(8) * &t],
        ]);
        let diff = r.m3.sub(&printed_m3);
        for a in 0..4 {
            for b in 0..4 {
                let expected = if (a, b) == (3, 3) { i(8) - i(8) * &t } else { z() };
                ensure(diff.get(a, b) == &expected, format!("M3 differs at ({a},{b}) for t={t}"))?;
            }
        }
        ensure(r.m3.get(3, 3) == &i(8), "recomputed M3 (4,4) is not 8")?;
    }
    Ok("M5, M51, M61 match at 50 random t; M3 (4,4) recomputes to 8, printed 8t (erratum)".into())
}

fn c6_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut r = || rat(rng.gen_range(-10_000..10_000), rng.gen_range(1..10_000));
    for _ in 0..1000 {
        let (x, y) = (r(), r());
        let q = &x * &x + &x * &y + &y * &y;
        let s = &x + &y;
        let lhs = num_traits::pow(x.clone(), 4) + num_traits::pow(y.clone(), 4) + num_traits::pow(s, 4);
        ensure(lhs == int_rat(2) * &q * &q, format!("identity fails at ({x}, {y})"))?;
    }
    for _ in 0..1000 {
        let (x, y) = (r(), r());
        if x.is_zero() && y.is_zero() {
            continue;
        }
        ensure((&x * &x + &x * &y + &y * &y).is_positive(), "form not positive")?;
    }
    Ok("identity at 1000 rational pairs; x^2+xy+y^2 > 0 at 1000 pairs".into())
}

fn c7_curve_points() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let t = random_t(&mut rng);
        let e = curve_from_t(&t).unwrap();
        let g1 = e.known_generator();
        ensure(g1.u() == Some(&(int_rat(48) * &t)), "G1 has the wrong u")?;
        ensure(e.contains(&g1), format!("G1 not on E_t at t={t}"))?;
        let v = int_rat(144) * &t * (&t * &t + int_rat(1));
        ensure(e.rhs(&(int_rat(48) * &t)) == &v * &v, "v^2 mismatch")?;
        let d = e.double(&g1);
        let w = poly(&t, &[1, -2, -1]);
        ensure(d.u() == Some(&(int_rat(4) * &w * &w)), format!("u(2G1) wrong at t={t}"))?;
        ensure(e.contains(&d), "2G1 not on the curve")?;
    }
    let e2 = curve_from_t(&int_rat(2)).unwrap();
    ensure(e2.rhs(&int_rat(96)) == int_rat(2_073_600), "t=2: rhs(96) != 2073600")?;
    ensure(1440i64 * 1440 == 2_073_600, "arithmetic")?;
    Ok("G1 on E_t and u(2G1)=4(t^2-2t-1)^2 at 50 random t; t=2 gives 1440^2".into())
}

fn c8_discriminant_signs() -> Outcome {
    let mut lines = Vec::new();
    for (t, neg) in [(int_rat(2), true), (int_rat(5), true), (int_rat(12), true), (rat(9, 8), false), (int_rat(13), false), (int_rat(14), false)] {
        let d = discriminant(&t);
        let w = curve_from_t(&t).unwrap().weierstrass_discriminant();
        ensure(d == w, format!("closed form and Weierstrass discriminant differ at t={t}"))?;
        ensure(d.is_negative() == neg && !d.is_zero(), format!("wrong sign at t={t}"))?;
        lines.push(format!("{t}:{}", if neg { "-" } else { "+" }));
    }
    Ok(lines.join(" "))
}

fn survivors(order: QuadricOrder, stages: Vec<Stage>) -> Result<Vec<String>, String> {
    let cfg = SieveConfig { stages, quadric_order: order };
    let mut out = Vec::new();
    for t in enumerate_t(110) {
        let r = sieve_t(&t, &cfg).map_err(|e| e.to_string())?;
        ensure(r.undecided.is_none(), format!("{t} undecided"))?;
        if r.survives() {
            out.push(t.to_string());
        }
    }
    Ok(out)
}

fn c9_sieve() -> Outcome {
    let start = Instant::now();
    let want = ["31/6", "49/24", "67/42"];
    let mut parts = Vec::new();
    for order in [QuadricOrder::Forward, QuadricOrder::Reversed] {
        for stages in [Stage::ALL.to_vec(), vec![Stage::Quadric, Stage::Conic, Stage::Quartic]] {
            let label = format!("{order:?}{}", if stages.len() == 4 { "" } else { "/no-conjecture" });
            let s = survivors(order, stages)?;
            ensure(s.len() >= 3 && s[..3] == want, format!("{label} survivors {s:?}"))?;
            parts.push(format!("{label}: {}", s.join(",")));
        }
    }
    Ok(format!("{} ({:.2?})", parts.join("; "), start.elapsed()))
}

fn c10_conjecture() -> Outcome {
    let recs = shipped_corpus().map_err(|e| e.to_string())?;
    for r in &recs {
        let t = normalize_t(r.t.m(), r.t.n()).map_err(|e| e.to_string())?;
        ensure(conjecture_filter(&t), format!("conjecture fails for {t} ({})", r.source))?;
    }
    Ok(format!("{} corpus t-values pass", recs.len()))
}

fn c11_roundtrip() -> Outcome {
    let mut parts = Vec::new();
    for (q, t) in [(brudno(), "961/61"), (ints(["53902630", "2542025", "35847220", "-34122866"]), "31/6")] {
        let r = roundtrip(&q).map_err(|e| e.to_string())?;
        ensure(r.all_orbit_values_verified(), format!("unverified orbit values for {q:?}: {:?}", r.verified_ts()))?;
        ensure(r.verified_ts().contains(t), format!("{t} not verified"))?;
        let n = r.steps.iter().filter(|s| s.verified()).count();
        parts.push(format!("{t}: {n}/24 orderings verified, all 6 t-values"));
    }
    Ok(parts.join("; "))
}

/// Smallest height, on the reduced forward quartic, of the slope of any ordering of `q` at `t`.
fn derived_height(q: &[BigInt; 4], t: &TValue) -> BigInt {
    let tr = t.to_rational();
    let pair = QuadricPair::new(&tr, QuadricOrder::Forward).unwrap();
    let base = pair.conic.base_point().unwrap().point().cloned().unwrap();
    let quartic = build_quartic_from_pair(&pair, &base).unwrap();
    let (_, transform) = reduce_quartic(&quartic);
    let mut best: Option<BigInt> = None;
    for p in permutations(q) {
        if t_of(&p[0], &p[1], &p[2], &p[3]).ok() != Some(tr.clone()) {
            continue;
        }
        let Ok(v) = pqrs_from_solution(&p, Chart::D) else { continue };
        let (w, _) = pair.split_pqrs(&v);
        let Some(k) = pair.conic.slope_to(&base, &v[0], &v[1], w) else { continue };
        let y = rational_sqrt_exact(&quartic.eval(&k)).unwrap();
        if let QuarticPoint::Finite { x, .. } = transform.from_original(&QuarticPoint::Finite { x: k, y }) {
            let h = x.numer().abs().max(x.denom().clone());
            best = Some(best.map_or(h.clone(), |b: BigInt| b.min(h)));
        }
    }
    best.unwrap()
}

fn c12_search() -> Outcome {
    let t: TValue = "511/450".parse().unwrap();
    let h = derived_height(&brudno(), &t);
    ensure(h <= BigInt::from(10_000_000), format!("derived height {h} exceeds 10^7"))?;
    let hu: u64 = (&h).try_into().unwrap();
    let start = Instant::now();
    let r = search_quartic_method(&t, hu, QuadricOrder::Forward).map_err(|e| e.to_string())?;
    let el = start.elapsed();
    let target = Solution::new(brudno()).unwrap();
    ensure(r.solutions.contains(&target), format!("not rediscovered; found {:?}", r.solutions))?;
    ensure(el < Duration::from_secs(600), format!("took {el:?}"))?;
    Ok(format!("H={h}: {} quartic point(s), Brudno class found in {el:.2?}", r.points))
}

const TABLE_GENS: &str = "2984/25;165858034880079528468553/154606810823279404439062500;\
29529243840780598196578176/60686911309473227566225;\
184247616563459246903349991070216/16933216732179015462369769140625";

fn c13_curve_method() -> Outcome {
    let t: TValue = "373/150".parse().unwrap();
    let curve = curve_from_t(&t.to_rational()).unwrap();
    let gens = parse_generators(TABLE_GENS, &curve).map_err(|e| e.to_string())?;
    ensure(gens.len() == 4, "four generators")?;
    let target = Solution::new(ints(["50627178820", "1357751663", "55867457830", "-41572821650"])).unwrap();
    for l in 1..=3 {
        let hits = search_curve_method(&t, &gens, l).map_err(|e| e.to_string())?;
        let producing: Vec<_> = hits.iter().filter(|h| h.solution == target).collect();
        if !producing.is_empty() {
            ensure(producing.iter().all(|h| h.coeffs[2] != 0), "a producing combination has n3 = 0")?;
            let combos: BTreeSet<String> =
                producing.iter().map(|h| format!("{:?}{}", h.coeffs, if h.torsion { "+T" } else { "" })).collect();
            return Ok(format!("smallest L={l}; via {}", combos.into_iter().collect::<Vec<_>>().join(" ")));
        }
    }
    Err("class not found with L <= 3".into())
}

fn c14_brute() -> Outcome {
    let start = Instant::now();
    let found = brute_force(50);
    ensure(found.iter().all(|q| q.iter().filter(|&&x| x != 0).count() <= 1), "nontrivial quadruple found")?;
    // independent loop over all ordered 4-tuples, then reduced to one representative per class
    let mut naive = BTreeSet::new();
    let b = 50i64;
    for a in -b..=b {
        for bb in -b..=b {
            for c in -b..=b {
                let partial = (a as i128).pow(4) + (bb as i128).pow(4) + (c as i128).pow(4);
                for d in -b..=b {
                    if partial + (d as i128).pow(4) == ((a + bb + c + d) as i128).pow(4) {
                        let mut s = [a, bb, c, d];
                        s.sort();
                        let mut n = [-a, -bb, -c, -d];
                        n.sort();
                        naive.insert(s.min(n));
                    }
                }
            }
        }
    }
    let found_set: BTreeSet<[i64; 4]> = found.iter().cloned().collect();
    ensure(found_set == naive, "brute force and naive loop disagree")?;
    ensure(found.len() == 51, format!("{} quadruples", found.len()))?;
    let el = start.elapsed();
    ensure(el < Duration::from_secs(300), format!("took {el:?}"))?;
    Ok(format!("{} trivial quadruples, naive loop agrees ({el:.2?})", found.len()))
}

fn c15_out_of_scope() -> Outcome {
    // discovery of these needs generators from descent; here they are verified only
    let recs = shipped_corpus().map_err(|e| e.to_string())?;
    let large: Vec<_> = recs.iter().filter(|r| r.source == "large-solutions").collect();
    ensure(large.len() == 2, "two large solutions")?;
    let digits = large.iter().map(|r| r.quad.iter().map(|x| x.abs().to_string().len()).max().unwrap()).max().unwrap();
    ensure(digits >= 52, format!("largest entry has {digits} digits"))?;
    for r in &large {
        Solution::new(r.quad.clone()).map_err(|e| e.to_string())?;
    }
    Ok(format!("not reproduced by search; verification only ({digits}-digit entries check exactly)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("corpus verification", c1_corpus),
        ("Brudno orbit", c2_brudno_orbit),
        ("determinant identity", c3_determinant),
        ("invariant closed forms", c4_invariants),
        ("matrix recomputation", c5_matrices),
        ("quartic identity and positivity", c6_identity),
        ("curve points", c7_curve_points),
        ("discriminant signs", c8_discriminant_signs),
        ("sieve reproduction", c9_sieve),
        ("conjecture consistency", c10_conjecture),
        ("round trip", c11_roundtrip),
        ("search rediscovery", c12_search),
        ("curve-method rediscovery", c13_curve_method),
        ("brute-force oracle", c14_brute),
        ("desk-scale limits", c15_out_of_scope),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
