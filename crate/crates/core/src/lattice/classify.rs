//! The case distinction and the ring `O_G` induced by a subgroup.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::compat::{
    candidates, coarsely_from, compatible, element_with_val, units_in_group, weakly_from, Answer, Evidence,
};
use super::ideal::SampledCheck;
use super::{FractionalIdealCut, ValuationRingRef};
use crate::algebra::Gamma;
use crate::error::{Error, Result};
use crate::fields::sample::{random_element, Mode};
use crate::fields::{Element, Field};
use crate::subgroups::{subgroup_member, Case, Certificate, MembershipVerdict, SubgroupDescriptor};

/// Candidates examined before a subgroup is declared not proper.
pub const PROPERNESS_BUDGET: usize = 256;

/// An element outside `G`, certifying `G != K` (resp. `K^x`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProperWitness {
    pub element: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub candidates_tried: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub field: String,
    pub subgroup: String,
    pub case: Case,
    pub og_chain_index: usize,
    pub og_ring: String,
    pub proper: ProperWitness,
    pub evidence: Vec<Evidence>,
    pub checks: Vec<SampledCheck>,
    pub seed: u64,
    pub trials: usize,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub og: ValuationRingRef,
    /// The ideal witnessing weak compatibility of `O_G`, when there is one.
    #[serde(skip)]
    pub og_ideal: Option<FractionalIdealCut>,
}

impl CaseReport {
    pub fn find(&self, chain_index: usize, relation: super::compat::Relation) -> Option<&Evidence> {
        self.evidence.iter().find(|e| e.chain_index == chain_index && e.relation == relation)
    }
}

/// Exhibits an element outside `G` within [`PROPERNESS_BUDGET`] candidates.
pub fn certify_proper(field: &Field, g: &SubgroupDescriptor, seed: u64) -> Result<ProperWitness> {
    g.validate(field)?;
    let mut pool = Vec::new();
    if let SubgroupDescriptor::IdealGroup { cut } = g {
        if let Some(below) = cut.bound.coords().map(|_| cut.bound) {
            let shifted = match below.as_pair() {
                Some((a, b)) => Gamma::pair(a, b.saturating_sub(1)),
                None => Gamma::int(below.as_int().unwrap() - 1),
            };
            if !cut.ring.is_trivial() {
                pool.push(element_with_val(field, cut.ring.stage(), &shifted)?);
            }
        }
        if cut.is_zero_ideal() {
            pool.push(Element::one(field));
        }
    }
    pool.extend(candidates(field));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while pool.len() < PROPERNESS_BUDGET {
        pool.push(random_element(field, &mut rng, -3..=3, Mode::Exact));
    }
    pool.truncate(PROPERNESS_BUDGET);
    for (i, x) in pool.iter().enumerate() {
        if g.is_multiplicative() && x.is_zero() {
            continue;
        }
        match subgroup_member(x, g) {
            Ok(MembershipVerdict::NonMember { certificate }) => {
                return Ok(ProperWitness {
                    element: x.to_string(),
                    certificate: Some(certificate),
                    candidates_tried: i + 1,
                })
            }
            Ok(_) | Err(Error::PrecisionExhausted(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::ImproperSubgroup(PROPERNESS_BUDGET))
}

/// Scans the chain: group case if some ring has its units in `G`, weak case
/// if some ring is weakly compatible without being compatible, residue case
/// otherwise.
pub fn classify(field: &Field, g: &SubgroupDescriptor, trials: usize, seed: u64) -> Result<CaseReport> {
    let proper = certify_proper(field, g, seed)?;
    let chain = ValuationRingRef::chain(field);
    let mut evidence = Vec::new();
    let mut warnings = Vec::new();
    let mut units = Vec::new();
    let mut compat = Vec::new();
    let mut weak = Vec::new();
    for (i, o) in chain.iter().enumerate() {
        let s = seed.wrapping_add(i as u64);
        let u = units_in_group(o, g, trials, s)?;
        let c = compatible(o, g, trials, s)?;
        let w = weakly_from(o, g, &c, trials, s)?;
        units.push(u);
        compat.push(c);
        weak.push(w);
    }
    for (i, o) in chain.iter().enumerate() {
        let coarser: Vec<Evidence> = o
            .strict_coarsenings()
            .iter()
            .map(|c| units[c.chain_index()].clone())
            .collect();
        let cc = coarsely_from(o, &weak[i], &coarser);
        evidence.extend([units[i].clone(), compat[i].clone(), weak[i].clone(), cc]);
    }
    if units.iter().chain(&compat).chain(&weak).any(|e| e.answer == Answer::Unknown) {
        warnings.push("some relations are undecided; the case is read off the decided ones".into());
    }

    let yes = |e: &Evidence| e.answer == Answer::Yes;
    let (case, og) = if let Some(i) = units.iter().position(yes) {
        // The union of rings with units in G is the coarsest such ring.
        (Case::GroupCase, chain[i].clone())
    } else {
        let weak_not_compat: Vec<usize> =
            (0..chain.len()).filter(|&i| yes(&weak[i]) && compat[i].answer == Answer::No).collect();
        if weak_not_compat.len() > 1 {
            warnings.push(format!("{} rings are weakly but not compatible", weak_not_compat.len()));
        }
        match weak_not_compat.last() {
            Some(&i) => (Case::WeakCase, chain[i].clone()),
            None => {
                let finest = (0..chain.len()).rev().find(|&i| yes(&compat[i])).unwrap_or(0);
                (Case::ResidueCase, chain[finest].clone())
            }
        }
    };
    let og_ideal = weak[og.chain_index()].cut.clone();
    let mut checks = Vec::new();
    if case == Case::WeakCase {
        if let Some(a) = &og_ideal {
            for o1 in og.strict_coarsenings() {
                checks.push(coarser_maximal_inside(&o1, a, trials, seed)?);
            }
        }
    }
    Ok(CaseReport {
        field: field.to_string(),
        subgroup: g.to_string(),
        case,
        og_chain_index: og.chain_index(),
        og_ring: og.name(),
        proper,
        evidence,
        checks,
        seed,
        trials,
        warnings,
        og,
        og_ideal,
    })
}

/// For a coarser ring `O_1`: its maximal ideal lies inside the witness ideal.
pub fn coarser_maximal_inside(
    o1: &ValuationRingRef,
    a: &FractionalIdealCut,
    trials: usize,
    seed: u64,
) -> Result<SampledCheck> {
    let m1 = FractionalIdealCut::maximal(o1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let x = m1.sample(&mut rng, Mode::Exact);
        if !a.member(&x)? {
            failures.push(x.to_string());
        }
    }
    Ok(SampledCheck { name: format!("maximal_ideal_of_{}_inside_{}", o1.name(), a), trials, seed, failures })
}

/// Why `O_G` is or is not trivial.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum OgNontriviality {
    Nontrivial { report: Box<CaseReport> },
    Trivial { reason: String, report: Option<Box<CaseReport>> },
}

/// `O_G` is nontrivial iff `G` is proper and some nontrivial chain ring is
/// weakly compatible.
pub fn og_nontrivial(field: &Field, g: &SubgroupDescriptor, trials: usize, seed: u64) -> Result<OgNontriviality> {
    let report = match classify(field, g, trials, seed) {
        Ok(r) => r,
        Err(Error::ImproperSubgroup(n)) => {
            return Ok(OgNontriviality::Trivial {
                reason: format!("G is not proper: no element outside G among {n} candidates"),
                report: None,
            })
        }
        Err(e) => return Err(e),
    };
    let weakly = report.evidence.iter().any(|e| {
        e.relation == super::compat::Relation::WeaklyCompatible && e.answer == Answer::Yes && e.chain_index > 0
    });
    Ok(if weakly && !report.og.is_trivial() {
        OgNontriviality::Nontrivial { report: Box::new(report) }
    } else {
        OgNontriviality::Trivial {
            reason: "no nontrivial weakly compatible chain member".into(),
            report: Some(Box::new(report)),
        }
    })
}
