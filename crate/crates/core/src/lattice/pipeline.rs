//! End to end search for a nontrivial definable valuation: try `q`-th powers
//! (or the Artin-Schreier group) for a few primes and keep the first `q` whose
//! induced ring is nontrivial.

use serde::Serialize;

use super::classify::{classify, CaseReport};
use super::compat::{Answer, Relation};
use super::definability::{definability_verdict, Definable, DefinabilityVerdict};
use super::henselian::{q_henselian, HenselReport};
use super::ValuationRingRef;
use crate::error::Error;
use crate::fields::Field;
use crate::subgroups::ordering::{is_ordering, OrderingVerdict};
use crate::subgroups::{has_root_of_unity, SubgroupDescriptor};

/// Primes tried after `char K`.
pub const SMALL_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// The hypothesis that failed for one `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedHypothesis {
    /// `q != char K` and `K` has no primitive `q`-th root of unity.
    RootOfUnity,
    /// No element outside `G` was found: `K` may be `q`-closed.
    GProper,
    /// No nontrivial chain ring is weakly compatible with `G`.
    OgNontrivial,
    /// The engine could not finish for this `q`.
    Engine,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Attempt {
    Success {
        q: u64,
        subgroup: String,
        report: Box<CaseReport>,
        henselian: Vec<HenselReportOrViolation>,
        definability: DefinabilityVerdict,
    },
    Failure {
        q: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        subgroup: Option<String>,
        hypothesis: FailedHypothesis,
        detail: String,
    },
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum HenselReportOrViolation {
    Report(HenselReport),
    Violation { ring: String, q: u64, hypothesis_violation: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub field: String,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub og_ring: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definable: Option<Definable>,
    pub attempts: Vec<Attempt>,
    pub seed: u64,
    pub trials: usize,
    pub warnings: Vec<String>,
}

/// `char K` first when positive, then the small primes.
pub fn candidate_primes(field: &Field) -> Vec<u64> {
    let p = field.characteristic();
    let mut out = if p > 0 { vec![p] } else { vec![] };
    out.extend(SMALL_PRIMES.iter().copied().filter(|&q| q != p));
    out
}

pub fn definable_valuation_report(field: &Field, trials: usize, seed: u64) -> PipelineReport {
    let mut attempts = Vec::new();
    let mut warnings = Vec::new();
    let mut found = None;
    for q in candidate_primes(field) {
        let attempt = attempt_q(field, q, trials, seed, &mut warnings);
        let ok = matches!(attempt, Attempt::Success { .. });
        attempts.push(attempt);
        if ok {
            found = attempts.last();
            break;
        }
    }
    let (q, og_ring, definable) = match found {
        Some(Attempt::Success { q, report, definability, .. }) => {
            (Some(*q), Some(report.og_ring.clone()), Some(definability.definable))
        }
        _ => (None, None, None),
    };
    PipelineReport {
        field: field.to_string(),
        success: q.is_some(),
        q,
        og_ring,
        definable,
        attempts,
        seed,
        trials,
        warnings,
    }
}

fn attempt_q(field: &Field, q: u64, trials: usize, seed: u64, warnings: &mut Vec<String>) -> Attempt {
    let failure = |subgroup: Option<String>, hypothesis, detail: String| Attempt::Failure { q, subgroup, hypothesis, detail };
    let char_k = field.characteristic();
    if q != char_k && !has_root_of_unity(field, q) {
        return failure(None, FailedHypothesis::RootOfUnity, format!("{field} has no primitive root of unity of order {q}"));
    }
    let g = if q == char_k { SubgroupDescriptor::ArtinSchreier { p: q } } else { SubgroupDescriptor::PowerGroup { q } };
    let name = Some(g.to_string());
    if q == 2 && char_k != 2 {
        let trivial = ValuationRingRef::trivial(field);
        if let OrderingVerdict::Unknown { trials } = is_ordering(&g, &trivial, trials, seed) {
            warnings.push(format!(
                "q = 2: squares with 0 not refuted as an ordering after {trials} trials; K may be euclidean"
            ));
        }
    }
    let report = match classify(field, &g, trials, seed) {
        Ok(r) => r,
        Err(Error::ImproperSubgroup(n)) => {
            return failure(name, FailedHypothesis::GProper, format!("no element outside G among {n} candidates"))
        }
        Err(e) => return failure(name, FailedHypothesis::Engine, e.to_string()),
    };
    let weakly_nontrivial = report
        .evidence
        .iter()
        .any(|e| e.relation == Relation::WeaklyCompatible && e.answer == Answer::Yes && e.chain_index > 0);
    if report.og.is_trivial() || !weakly_nontrivial {
        return failure(name, FailedHypothesis::OgNontrivial, "no nontrivial weakly compatible chain member".into());
    }
    let mut rings = report.og.strict_coarsenings();
    rings.retain(|o| !o.is_trivial());
    rings.push(report.og.clone());
    let mut henselian = Vec::new();
    for o in rings {
        match q_henselian(&o, q, trials, seed) {
            Ok(r) => henselian.push(HenselReportOrViolation::Report(r)),
            Err(Error::HypothesisViolation(msg)) => henselian.push(HenselReportOrViolation::Violation {
                ring: o.name(),
                q,
                hypothesis_violation: msg,
            }),
            Err(e) => return failure(name, FailedHypothesis::Engine, e.to_string()),
        }
    }
    let definability = match definability_verdict(&report, &g, trials, seed) {
        Ok(d) => d,
        Err(e) => return failure(name, FailedHypothesis::Engine, e.to_string()),
    };
    Attempt::Success { q, subgroup: g.to_string(), report: Box::new(report), henselian, definability }
}
