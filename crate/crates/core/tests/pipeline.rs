use jm_core::ecurve::{curve_from_t, ECPoint};
use jm_core::exactmath::BigInt;
use jm_core::pipeline::{
    corpus_load, corpus_save, enumerate_t, search_curve_method, search_quartic_method, shipped_corpus, sieve_t,
    verify_solution, SieveConfig, TValue, Verdict,
};
use jm_core::quadform::QuadricOrder;

fn sieve_all(max_sum: u64) -> Vec<String> {
    let cfg = SieveConfig::default();
    enumerate_t(max_sum).map(|t| serde_json::to_string(&sieve_t(&t, &cfg).unwrap()).unwrap()).collect()
}

#[test]
fn corpus_records_are_distinct_valid_solutions() {
    let recs = shipped_corpus().unwrap();
    for r in &recs {
        let [a, b, c, d] = &r.quad;
        assert_eq!(verify_solution(a, b, c, d), Verdict::Valid, "{:?}", r.quad);
    }
    let mut keys: Vec<_> = recs.iter().map(|r| (r.t.to_string(), r.quad.clone())).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), recs.len());
}

#[test]
fn corpus_file_round_trip() {
    let recs = shipped_corpus().unwrap();
    let path = std::env::temp_dir().join(format!("jm-pipeline-{}.jsonl", std::process::id()));
    corpus_save(&path, &recs).unwrap();
    let back = corpus_load(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(back, recs);
}

#[test]
fn sieve_is_thread_count_invariant() {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| sieve_all(60));
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| sieve_all(60));
    assert_eq!(one, four);
    let cli = |threads: &str| {
        let mut out = Vec::new();
        let code = jm_core::cli::run(["jm", "--threads", threads, "sieve", "--max-sum", "60"], &mut out, &mut Vec::new());
        assert_eq!(code, 0);
        out
    };
    assert_eq!(cli("1"), cli("4"));
}

#[test]
fn curve_search_without_extra_generators_finds_nothing() {
    let t: TValue = "31/6".parse().unwrap();
    let curve = curve_from_t(&t.to_rational()).unwrap();
    assert!(search_curve_method(&t, &[], 3).unwrap().is_empty());
    let g1: Vec<ECPoint> = vec![curve.known_generator()];
    assert!(search_curve_method(&t, &g1, 3).unwrap().is_empty());
}

#[test]
fn quartic_search_only_returns_valid_solutions() {
    for (t, h) in [("31/6", 200), ("49/24", 200), ("511/450", 500)] {
        let t: TValue = t.parse().unwrap();
        for order in [QuadricOrder::Forward, QuadricOrder::Reversed] {
            let r = search_quartic_method(&t, h, order).unwrap();
            for s in &r.solutions {
                let [a, b, c, d]: [BigInt; 4] = s.entries().clone();
                assert_eq!(verify_solution(&a, &b, &c, &d), Verdict::Valid);
            }
        }
    }
}

#[test]
fn reversed_search_rediscovers_brudno() {
    let t: TValue = "511/450".parse().unwrap();
    let r = search_quartic_method(&t, 427, QuadricOrder::Reversed).unwrap();
    assert!(r.solutions.iter().any(|s| s.to_string().contains("5400")), "{:?}", r.solutions);
}
