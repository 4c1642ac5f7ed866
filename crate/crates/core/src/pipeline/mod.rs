//! End-to-end orchestration: `t` enumeration and sieving, the two search
//! methods, verification, orbits, the brute-force check and the corpus.

mod brute;
mod corpus;
mod roundtrip;
mod search;
mod sieve;
mod solution;
mod tvalue;

pub use brute::brute_force;
pub use corpus::{corpus_load, corpus_save, corpus_to_string, parse_corpus, shipped_corpus, CorpusRecord, SHIPPED};
pub use roundtrip::{roundtrip, show_curve_point, show_quartic_point, RoundTripReport, RoundTripStep};
pub use search::{distinct_solutions, lift_point, search_curve_method, search_quartic_method, CurveHit, QuarticSearch};
pub use sieve::{sieve_t, SieveConfig, SieveReport, Stage};
pub use solution::{
    canonicalize, compute_fgh, involution, is_primitive, permutations, t_of, t_orbit, verify_solution, Solution, Verdict,
};
pub use tvalue::{conjecture_filter, enumerate_t, normalize_t, TValue};

use crate::exactmath::{format_rational, BigRat};

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn serialize_rational<S: serde::Serializer>(v: &BigRat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}
