use std::path::Path;

use serde::{Deserialize, Serialize};

use super::solution::{t_orbit, verify_solution, Verdict};
use super::tvalue::TValue;
use crate::error::{Error, Result};
use crate::exactmath::{parse_int, BigInt};

/// Solutions collected from published tables, one JSON object per line.
pub const SHIPPED: &str = include_str!("../../../../corpus/known_solutions.jsonl");

/// A quadruple exactly as listed, with the `t` it was listed under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusRecord {
    pub t: TValue,
    pub quad: [BigInt; 4],
    pub source: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    t: String,
    a: String,
    b: String,
    c: String,
    d: String,
    source: String,
}

impl CorpusRecord {
    /// One compact JSON object, no trailing newline.
    pub fn to_line(&self) -> String {
        let [a, b, c, d] = self.quad.clone().map(|x| x.to_string());
        let raw = RawRecord { t: self.t.to_string(), a, b, c, d, source: self.source.clone() };
        serde_json::to_string(&raw).expect("strings serialize")
    }

    /// The equation holds with three or more nonzero entries and `t` is in the orbit.
    pub fn check(&self) -> std::result::Result<(), String> {
        let [a, b, c, d] = &self.quad;
        match verify_solution(a, b, c, d) {
            Verdict::Valid => {}
            v => return Err(format!("quadruple is {v:?}").to_lowercase()),
        }
        let orbit = t_orbit(&self.quad).map_err(|e| e.to_string())?;
        if !orbit.contains(&self.t.to_rational()) {
            return Err(format!("t = {} is not in the t-orbit", self.t));
        }
        Ok(())
    }
}

/// Parses JSON lines and verifies each record. Blank lines are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: lineno, message };
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| parse_err(e.to_string()))?;
        let t: TValue = raw.t.parse().map_err(|e: Error| parse_err(e.to_string()))?;
        let mut quad = Vec::with_capacity(4);
        for s in [&raw.a, &raw.b, &raw.c, &raw.d] {
            quad.push(parse_int(s).map_err(|e| parse_err(e.to_string()))?);
        }
        let rec = CorpusRecord { t, quad: quad.try_into().expect("four entries"), source: raw.source };
        if let Err(reason) = rec.check() {
            return Err(Error::CorpusVerification { index: lineno, source_tag: rec.source, reason });
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn corpus_load(path: &Path) -> Result<Vec<CorpusRecord>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

/// One compact JSON object per line, fields in `t, a, b, c, d, source` order.
pub fn corpus_to_string(records: &[CorpusRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&r.to_line());
        s.push('\n');
    }
    s
}

pub fn corpus_save(path: &Path, records: &[CorpusRecord]) -> Result<()> {
    std::fs::write(path, corpus_to_string(records))?;
    Ok(())
}

/// The shipped corpus, verified.
pub fn shipped_corpus() -> Result<Vec<CorpusRecord>> {
    parse_corpus(SHIPPED)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_round_trips() {
        let recs = shipped_corpus().unwrap();
        assert_eq!(corpus_to_string(&recs), SHIPPED);
        assert!(recs.iter().any(|r| r.quad.iter().any(|x| x.to_string().len() >= 52)));
    }

    #[test]
    fn empty_and_altered() {
        assert!(parse_corpus("").unwrap().is_empty());
        let line = r#"{"t":"511/450","a":"-2634","b":"955","c":"5400","d":"1770","source":"table-2.1"}"#;
        assert_eq!(parse_corpus(line).unwrap().len(), 1);
        let bad = line.replace("5400", "5401");
        assert!(matches!(parse_corpus(&bad), Err(Error::CorpusVerification { index: 1, .. })));
        let wrong_t = line.replace("511/450", "31/6");
        assert!(matches!(parse_corpus(&wrong_t), Err(Error::CorpusVerification { .. })));
        let malformed = format!("{line}\n{{\"t\":");
        assert!(matches!(parse_corpus(&malformed), Err(Error::Parse { line: 2, .. })));
    }
}
