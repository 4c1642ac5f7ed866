use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use super::tvalue::{conjecture_filter, TValue};
use crate::error::{Error, Result};
use crate::exactmath::BigInt;
use crate::quadform::{local_obstruction, ConicBasePoint, ConicOutcome, QuadricOrder, QuadricPair};
use crate::quartic::{build_quartic_from_pair, is_locally_soluble_with_hints};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Conjecture,
    Quadric,
    Conic,
    Quartic,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Conjecture, Stage::Quadric, Stage::Conic, Stage::Quartic];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Conjecture => "conjecture",
            Stage::Quadric => "quadric",
            Stage::Conic => "conic",
            Stage::Quartic => "quartic",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s.trim())
            .ok_or_else(|| Error::InvalidInput(format!("unknown sieve stage `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    pub stages: Vec<Stage>,
    pub quadric_order: QuadricOrder,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { stages: Stage::ALL.to_vec(), quadric_order: QuadricOrder::Forward }
    }
}

impl SieveConfig {
    /// Comma-separated stage names; repeats are rejected.
    pub fn parse_stages(s: &str) -> Result<Vec<Stage>> {
        let stages = s.split(',').map(str::parse).collect::<Result<Vec<Stage>>>()?;
        for (i, st) in stages.iter().enumerate() {
            if stages[..i].contains(st) {
                return Err(Error::InvalidInput(format!("stage `{st}` listed twice")));
            }
        }
        Ok(stages)
    }
}

/// Outcome of each stage that ran; `None` means not evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveReport {
    #[serde(serialize_with = "crate::pipeline::serialize_display")]
    pub t: TValue,
    pub conjecture_pass: Option<bool>,
    pub quadric_soluble: Option<bool>,
    pub conic_soluble: Option<bool>,
    pub quartic_els: Option<bool>,
    pub failed_stage: Option<Stage>,
    /// Set when a factorization limit stopped a stage.
    pub undecided: Option<String>,
}

impl SieveReport {
    /// Every configured stage ran and passed.
    pub fn survives(&self) -> bool {
        self.failed_stage.is_none() && self.undecided.is_none()
    }

    fn flag(&mut self, stage: Stage) -> &mut Option<bool> {
        match stage {
            Stage::Conjecture => &mut self.conjecture_pass,
            Stage::Quadric => &mut self.quadric_soluble,
            Stage::Conic => &mut self.conic_soluble,
            Stage::Quartic => &mut self.quartic_els,
        }
    }
}

/// Runs the configured stages in order, stopping at the first failure.
pub fn sieve_t(t: &TValue, config: &SieveConfig) -> Result<SieveReport> {
    let mut report = SieveReport {
        t: t.clone(),
        conjecture_pass: None,
        quadric_soluble: None,
        conic_soluble: None,
        quartic_els: None,
        failed_stage: None,
        undecided: None,
    };
    let pair = QuadricPair::new(&t.to_rational(), config.quadric_order)?;
    let mut base: Option<Option<ConicBasePoint>> = None;
    for &stage in &config.stages {
        let outcome = match stage {
            Stage::Conjecture => Ok(conjecture_filter(t)),
            Stage::Quadric => quadric_soluble(t),
            Stage::Conic => conic_point(&pair, &mut base).map(|b| b.is_some()),
            Stage::Quartic => conic_point(&pair, &mut base).and_then(|b| match b {
                Some(b) => quartic_els(t, &pair, &b),
                None => Ok(false),
            }),
        };
        match outcome {
            Ok(pass) => {
                *report.flag(stage) = Some(pass);
                if !pass {
                    report.failed_stage = Some(stage);
                    break;
                }
            }
            Err(e @ Error::FactorizationTooHard { .. }) => {
                report.undecided = Some(format!("{stage}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// `(n^2 - m^2) q^2 + 6 n^2 r^2 + (m^2 + n^2) s^2 = 0` has a nontrivial rational point.
fn quadric_soluble(t: &TValue) -> Result<bool> {
    let (m, n) = (t.m(), t.n());
    let (m2, n2) = (m * m, n * n);
    Ok(local_obstruction(&(&n2 - &m2), &(&n2 * 6), &(&m2 + &n2))?.is_none())
}

fn conic_point(pair: &QuadricPair, cache: &mut Option<Option<ConicBasePoint>>) -> Result<Option<ConicBasePoint>> {
    if cache.is_none() {
        *cache = Some(match pair.conic.base_point()? {
            ConicOutcome::Point(b) => Some(b),
            ConicOutcome::Insoluble { .. } => None,
        });
    }
    Ok(cache.clone().flatten())
}

fn quartic_els(t: &TValue, pair: &QuadricPair, base: &ConicBasePoint) -> Result<bool> {
    let q = build_quartic_from_pair(pair, base)?;
    is_locally_soluble_with_hints(&q, &quartic_hints(t, base))
}

/// Integers whose primes tend to divide the discriminant of quartics built at `t`.
pub(crate) fn quartic_hints(t: &TValue, base: &ConicBasePoint) -> Vec<BigInt> {
    let (m, n) = (t.m(), t.n());
    let hom = |c: &[i64]| {
        let d = c.len() - 1;
        c.iter().enumerate().fold(BigInt::zero(), |acc, (i, &x)| {
            acc + BigInt::from(x) * num_traits::pow(m.clone(), d - i) * num_traits::pow(n.clone(), i)
        })
    };
    vec![
        m.clone(),
        n.clone(),
        m + n,
        m - n,
        m * m + n * n,
        m * m - n * n * 7,
        hom(&[1, -8, 1]),
        hom(&[1, -8, -6, 24, -7]),
        hom(&[1, -16, 50, -80, 49]),
        base.p0.clone(),
        base.q0.clone(),
        base.r0.clone(),
    ]
    .into_iter()
    .filter(|h| !h.is_zero())
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(m: i64, n: i64) -> TValue {
        TValue::from_ints(m, n).unwrap()
    }

    #[test]
    fn survivor_31_over_6() {
        let r = sieve_t(&tv(31, 6), &SieveConfig::default()).unwrap();
        assert!(r.survives(), "{r:?}");
        assert_eq!(r.quartic_els, Some(true));
    }

    #[test]
    fn three_halves_rejected() {
        let r = sieve_t(&tv(3, 2), &SieveConfig::default()).unwrap();
        assert!(!r.survives());
        assert_eq!(r.failed_stage, Some(Stage::Conjecture));
        let no_conj = SieveConfig { stages: vec![Stage::Quadric, Stage::Conic, Stage::Quartic], ..Default::default() };
        let r = sieve_t(&tv(3, 2), &no_conj).unwrap();
        assert!(r.failed_stage.is_some());
        assert_eq!(r.conjecture_pass, None);
    }

    #[test]
    fn conjecture_flag() {
        let r = sieve_t(&tv(193, 18), &SieveConfig::default()).unwrap();
        assert_eq!(r.conjecture_pass, Some(true));
    }

    #[test]
    fn stage_parsing() {
        assert_eq!(SieveConfig::parse_stages("conic,quadric").unwrap(), vec![Stage::Conic, Stage::Quadric]);
        assert!(SieveConfig::parse_stages("conic,conic").is_err());
        assert!(SieveConfig::parse_stages("nope").is_err());
    }
}
