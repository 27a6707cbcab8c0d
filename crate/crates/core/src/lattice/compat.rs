//! Compatibility of chain rings with subgroups: `M ⊆ G`, some `A` with
//! `sqrt(A) = M` inside `G`, and the coarse variant, plus `O^x ⊆ G`.
//!
//! Multiplicative groups are tested on `1 + M`, `1 + A` and `O^x`; additive
//! ones on `M`, `A` and `O`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ideal::{SampledCheck, NEG_INF};
use super::{FractionalIdealCut, ValuationRingRef};
use crate::algebra::rational::{pow_rat, rat};
use crate::algebra::Gamma;
use crate::error::{Error, Result};
use crate::fields::sample::Mode;
use crate::fields::{Element, Field, FieldKind, Stage};
use crate::subgroups::{subgroup_member, witness_verifies, Certificate, MembershipVerdict, SubgroupDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `O^x ⊆ G`, or `O ⊆ G` for additive `G`.
    UnitsInGroup,
    Compatible,
    WeaklyCompatible,
    CoarselyCompatible,
}

/// One decided relation between a chain ring and a subgroup.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub chain_index: usize,
    pub ring: String,
    pub relation: Relation,
    pub answer: Answer,
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<FractionalIdealCut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<SampledCheck>,
}

impl Evidence {
    fn new(o: &ValuationRingRef, relation: Relation, answer: Answer, rule: impl Into<String>) -> Self {
        Self {
            chain_index: o.chain_index(),
            ring: o.name(),
            relation,
            answer,
            rule: rule.into(),
            witness: None,
            certificate: None,
            cut: None,
            check: None,
        }
    }

    fn with_witness(mut self, x: &Element, c: Option<Certificate>) -> Self {
        self.witness = Some(x.to_string());
        self.certificate = c;
        self
    }

    fn with_cut(mut self, cut: FractionalIdealCut) -> Self {
        self.cut = Some(cut);
        self
    }

    /// Attaches a sampled check; a failed check turns `Yes` into `No`.
    fn with_check(mut self, check: SampledCheck) -> Self {
        if !check.passed() && self.answer == Answer::Yes {
            self.answer = Answer::No;
            self.witness = check.failures.first().cloned();
        }
        self.check = Some(check);
        self
    }
}

/// Elements of value `g` at a stage, built from uniformizers.
pub(crate) fn element_with_val(field: &Field, stage: Stage, g: &Gamma) -> Result<Element> {
    let rational = |p: u64, e: i64| Element::from_rational(field, &pow_rat(p, e));
    match stage {
        Stage::Trivial => Ok(Element::one(field)),
        Stage::Localization(p) => rational(p, g.as_int().ok_or(Error::RankMismatch(1, 2))?),
        Stage::PAdicIntegers => rational(field.qadic_prime().unwrap(), g.as_int().ok_or(Error::RankMismatch(1, 2))?),
        Stage::PowerSeries | Stage::TAdic => Element::t(field)?.pow(g.as_int().ok_or(Error::RankMismatch(1, 2))?),
        Stage::Composite => {
            let (a, b) = g.as_pair().ok_or(Error::RankMismatch(2, 1))?;
            let (a, b) = if super::ideal::is_unbounded(b) { (a - 1, 0) } else { (a, b) };
            Element::uniformizer_power(field, &Gamma::pair(a, b))
        }
    }
}

/// Deterministic pool of small elements used to search for non-members.
pub(crate) fn candidates(field: &Field) -> Vec<Element> {
    let mut out = Vec::new();
    let r = |n: i64, d: i64| Element::from_rational(field, &rat(n, d)).ok().filter(|x| !x.is_zero());
    for n in 2..=24 {
        out.extend(r(n, 1));
        out.extend(r(-n, 1));
    }
    out.extend(r(-1, 1));
    for (n, d) in [(1, 2), (1, 3), (2, 3), (3, 2), (1, 5), (5, 7), (-1, 2), (-1, 3)] {
        out.extend(r(n, d));
    }
    if let Ok(t) = Element::t(field) {
        let one = Element::one(field);
        for k in 1..=8 {
            out.push(t.pow(-k).unwrap());
            out.push(t.pow(k).unwrap());
            out.push(one.add(&t.pow(k).unwrap()).unwrap());
        }
        if let (FieldKind::Laurent { .. }, Some(ff)) = (field.kind(), field.finite_field()) {
            for c in ff.elements().take(64) {
                if c.is_zero() {
                    continue;
                }
                let c = Element::from_fq(field, c).unwrap();
                out.push(c.clone());
                out.push(c.add(&t).unwrap());
                out.push(c.mul(&t.inv().unwrap()).unwrap());
            }
        }
        for n in [2i64, 3, 5] {
            if let Some(c) = r(n, 1) {
                out.push(c.mul(&t).unwrap());
                out.push(c.add(&t).unwrap());
            }
        }
    }
    out
}

pub(crate) fn mode_for(field: &Field) -> Mode {
    match field.kind() {
        FieldKind::RationalsAt { .. } => Mode::Exact,
        _ => Mode::Approx,
    }
}

fn shifted(x: &Element, multiplicative: bool) -> Result<Element> {
    if multiplicative {
        Element::one(x.field()).add(x)
    } else {
        Ok(x.clone())
    }
}

/// First candidate outside `G`, with its certificate.
pub(crate) fn first_non_member<I: IntoIterator<Item = Element>>(
    it: I,
    g: &SubgroupDescriptor,
) -> Result<Option<(Element, Option<Certificate>)>> {
    for x in it {
        if g.is_multiplicative() && x.is_zero() {
            continue;
        }
        match subgroup_member(&x, g) {
            Ok(MembershipVerdict::NonMember { certificate }) => return Ok(Some((x, Some(certificate)))),
            Ok(_) | Err(Error::PrecisionExhausted(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Samples `x` from the cut (shifted by 1 when multiplicative) and requires a
/// verified membership witness for each.
pub fn sampled_membership(
    name: &str,
    cut: &FractionalIdealCut,
    g: &SubgroupDescriptor,
    trials: usize,
    seed: u64,
) -> Result<SampledCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mode = mode_for(cut.ring.field());
    let mut failures = Vec::new();
    for _ in 0..trials {
        let a = cut.sample(&mut rng, mode);
        let x = shifted(&a, g.is_multiplicative())?;
        if x.is_zero() {
            continue;
        }
        match subgroup_member(&x, g) {
            Ok(MembershipVerdict::Member { witness }) if witness_verifies(&x, &witness) => {}
            Ok(v) => failures.push(format!("{x}: {v:?}")),
            Err(e) => failures.push(format!("{x}: {e}")),
        }
    }
    Ok(SampledCheck { name: name.into(), trials, seed, failures })
}

/// Is `X ⊆ C` for cuts on possibly different chain rings?
pub fn ideal_subset(x: &FractionalIdealCut, c: &FractionalIdealCut) -> Result<bool> {
    let everything = |a: &FractionalIdealCut| a.ring.is_trivial() && !a.is_zero_ideal();
    if x.is_zero_ideal() || everything(c) {
        return Ok(true);
    }
    if c.is_zero_ideal() || everything(x) {
        return Ok(false);
    }
    if x.ring == c.ring {
        return x.is_subset(c);
    }
    if x.ring.field() != c.ring.field() {
        return Err(Error::RingMismatch);
    }
    if matches!(x.ring.stage(), Stage::Localization(_)) {
        // Z_(p) and Z_(l) are incomparable: p^m / l^k escapes every l-cut.
        return Ok(false);
    }
    let lift = |a: &FractionalIdealCut| match a.bound.as_int() {
        Some(b) => Gamma::pair(b, NEG_INF),
        None => a.bound,
    };
    Ok(lift(x).ge(&lift(c)))
}

/// Ideals `A` of `o` with `sqrt(A) = M`, smallest first up to `depth`.
fn radical_m_ideals(o: &ValuationRingRef, depth: i64) -> Vec<FractionalIdealCut> {
    if o.is_trivial() {
        return vec![FractionalIdealCut::zero_ideal(o)];
    }
    (1..=depth)
        .map(|n| {
            let g = if o.coord_rank() == 2 { Gamma::pair(0, n) } else { Gamma::int(n) };
            FractionalIdealCut::at_least(o, g).unwrap()
        })
        .collect()
}

fn cut_depth(c: &FractionalIdealCut) -> i64 {
    c.bound
        .coords()
        .map(|cs| cs.iter().filter(|v| !super::ideal::is_unbounded(**v)).map(|v| v.abs()).max().unwrap_or(0))
        .unwrap_or(0)
        + 2
}

fn power_q(g: &SubgroupDescriptor) -> Option<u64> {
    match g {
        SubgroupDescriptor::PowerGroup { q } => Some(*q),
        _ => None,
    }
}

/// `O^x ⊆ G` (multiplicative) or `O ⊆ G` (additive).
pub fn units_in_group(o: &ValuationRingRef, g: &SubgroupDescriptor, trials: usize, seed: u64) -> Result<Evidence> {
    let rel = Relation::UnitsInGroup;
    let field = o.field();
    if let SubgroupDescriptor::IdealGroup { cut } = g {
        let inside = ideal_subset(&FractionalIdealCut::whole_ring(o), cut)?;
        let answer = if inside { Answer::Yes } else { Answer::No };
        return Ok(Evidence::new(o, rel, answer, "cut comparison").with_cut(cut.clone()));
    }
    // Every unit is a q-th power when the residue field is finite with
    // q prime to its characteristic and to the order of its unit group.
    if let (Some(q), Some(k)) = (power_q(g), field.residue_field(o.stage())) {
        let closed = !o.is_trivial()
            && !matches!(o.stage(), Stage::Localization(_))
            && o.residue_characteristic() != q
            && (k.order() - 1) % q as u128 != 0;
        if closed {
            let unit_cut = FractionalIdealCut::whole_ring(o);
            let check = unit_sample_check(&unit_cut, g, trials, seed)?;
            return Ok(Evidence::new(o, rel, Answer::Yes, "residue field is q-closed, Hensel lifts roots")
                .with_check(check));
        }
    }
    let stage = o.stage();
    let in_o = |x: &Element| -> bool {
        match x.val_at(stage) {
            Ok(v) if g.is_multiplicative() => v.is_zero(),
            Ok(v) => !v.is_negative(),
            Err(_) => false,
        }
    };
    let mut pool: Vec<Element> = candidates(field).into_iter().filter(|x| o.is_trivial() || in_o(x)).collect();
    if let Stage::Localization(p) = stage {
        pool.extend([2u64, 3, 5, 7, 11].into_iter().filter(|l| *l != p).map(|l| Element::from_int(field, l as i64)));
    }
    Ok(match first_non_member(pool, g)? {
        Some((x, c)) => Evidence::new(o, rel, Answer::No, "element of the ring outside G").with_witness(&x, c),
        None => Evidence::new(o, rel, Answer::Unknown, "no element outside G in the candidate pool"),
    })
}

/// Samples units (or ring elements) and requires verified membership.
fn unit_sample_check(ring_cut: &FractionalIdealCut, g: &SubgroupDescriptor, trials: usize, seed: u64) -> Result<SampledCheck> {
    let o = &ring_cut.ring;
    let field = o.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mode = mode_for(field);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let x = crate::fields::sample::random_unit_at(field, o.stage(), &mut rng, mode);
        match subgroup_member(&x, g) {
            Ok(MembershipVerdict::Member { witness }) if witness_verifies(&x, &witness) => {}
            Ok(v) => failures.push(format!("{x}: {v:?}")),
            Err(e) => failures.push(format!("{x}: {e}")),
        }
    }
    Ok(SampledCheck { name: "units_in_group".into(), trials, seed, failures })
}

/// `1 + p^n k` for `k = 1, 2, ...`: elements of `1 + p^n Z_(p)`.
pub(crate) fn one_plus_multiples(field: &Field, p: u64, n: i64) -> impl Iterator<Item = Element> + '_ {
    (1..=64i64).map(move |k| Element::from_rational(field, &(rat(1, 1) + pow_rat(p, n) * rat(k, 1))).unwrap())
}

/// `M ⊆ G` (additive) or `1 + M ⊆ G` (multiplicative).
pub fn compatible(o: &ValuationRingRef, g: &SubgroupDescriptor, trials: usize, seed: u64) -> Result<Evidence> {
    let rel = Relation::Compatible;
    let field = o.field();
    let m = FractionalIdealCut::maximal(o);
    if o.is_trivial() {
        return Ok(Evidence::new(o, rel, Answer::Yes, "trivial ring: M = {0}").with_cut(m));
    }
    match g {
        SubgroupDescriptor::IdealGroup { cut } => {
            let answer = if ideal_subset(&m, cut)? { Answer::Yes } else { Answer::No };
            Ok(Evidence::new(o, rel, answer, "cut comparison").with_cut(m))
        }
        SubgroupDescriptor::ArtinSchreier { .. } => {
            let check = sampled_membership("maximal_ideal_in_artin_schreier", &m, g, trials, seed)?;
            Ok(Evidence::new(o, rel, Answer::Yes, "M inside K^(p) by Artin-Schreier recursion")
                .with_cut(m)
                .with_check(check))
        }
        SubgroupDescriptor::PowerGroup { q } => {
            if let Stage::Localization(p) = o.stage() {
                return Ok(match first_non_member(one_plus_multiples(field, p, 1), g)? {
                    Some((x, c)) => Evidence::new(o, rel, Answer::No, "element of 1 + M outside G").with_witness(&x, c),
                    None => Evidence::new(o, rel, Answer::Unknown, "no element of 1 + M outside G found"),
                });
            }
            if o.residue_characteristic() != *q {
                let check = sampled_membership("one_plus_maximal_in_powers", &m, g, trials, seed)?;
                return Ok(Evidence::new(o, rel, Answer::Yes, "Hensel: residue characteristic differs from q")
                    .with_cut(m)
                    .with_check(check));
            }
            let one = Element::one(field);
            let mut pool = vec![one.add(&Element::from_int(field, *q as i64))?];
            if let Ok(t) = Element::t(field) {
                pool.push(one.add(&t)?);
            }
            let pool: Vec<Element> = pool.into_iter().filter(|x| m.member(&x.sub(&one).unwrap()).unwrap_or(false)).collect();
            Ok(match first_non_member(pool, g)? {
                Some((x, c)) => Evidence::new(o, rel, Answer::No, "1 + q or 1 + t is not a q-th power").with_witness(&x, c),
                None => Evidence::new(o, rel, Answer::Unknown, "no element of 1 + M outside G found"),
            })
        }
        SubgroupDescriptor::Oracle(_) => {
            let check = sampled_membership("oracle_on_maximal_ideal", &m, g, trials, seed)?;
            let ev = Evidence::new(o, rel, Answer::Unknown, "oracle sampled on M").with_cut(m);
            Ok(if check.passed() {
                Evidence { check: Some(check), ..ev }
            } else {
                Evidence { answer: Answer::No, witness: check.failures.first().cloned(), check: Some(check), ..ev }
            })
        }
    }
}

/// Some `A` with `sqrt(A) = M` and `A ⊆ G` (resp. `1 + A ⊆ G`).
pub fn weakly_compatible(o: &ValuationRingRef, g: &SubgroupDescriptor, trials: usize, seed: u64) -> Result<Evidence> {
    let c = compatible(o, g, trials, seed)?;
    weakly_from(o, g, &c, trials, seed)
}

pub(crate) fn weakly_from(
    o: &ValuationRingRef,
    g: &SubgroupDescriptor,
    compat: &Evidence,
    trials: usize,
    seed: u64,
) -> Result<Evidence> {
    let rel = Relation::WeaklyCompatible;
    let field = o.field();
    if compat.answer == Answer::Yes {
        let mut ev = Evidence::new(o, rel, Answer::Yes, "compatible, A = M");
        ev.cut = Some(FractionalIdealCut::maximal(o));
        return Ok(ev);
    }
    match g {
        SubgroupDescriptor::IdealGroup { cut } => {
            for a in radical_m_ideals(o, cut_depth(cut)) {
                if ideal_subset(&a, cut)? {
                    return Ok(Evidence::new(o, rel, Answer::Yes, "cut comparison").with_cut(a));
                }
            }
            Ok(Evidence::new(o, rel, Answer::No, "no ideal with radical M lies inside the cut"))
        }
        SubgroupDescriptor::PowerGroup { q } => {
            let q = *q;
            if let Stage::Localization(p) = o.stage() {
                // A = {v >= n} for some n; refute each n up to a bound.
                const DEPTH: i64 = 12;
                let mut first = None;
                for n in 1..=DEPTH {
                    match first_non_member(one_plus_multiples(field, p, n), g)? {
                        Some(w) => first = first.or(Some(w)),
                        None => {
                            return Ok(Evidence::new(o, rel, Answer::Unknown, format!("1 + {p}^{n} Z_({p}) not refuted")))
                        }
                    }
                }
                let (x, c) = first.unwrap();
                return Ok(Evidence::new(
                    o,
                    rel,
                    Answer::No,
                    format!("for every n <= {DEPTH} some 1 + {p}^n k is not a {q}-th power in Q"),
                )
                .with_witness(&x, c));
            }
            if o.residue_characteristic() == q && field.characteristic() == q {
                // 1 + t^n with q not dividing n is never a q-th power.
                let t = Element::t(field)?;
                let one = Element::one(field);
                let pool: Vec<Element> = (1..=16).filter(|n| n % q as i64 != 0).map(|n| one.add(&t.pow(n).unwrap()).unwrap()).collect();
                return Ok(match first_non_member(pool, g)? {
                    Some((x, c)) => Evidence::new(o, rel, Answer::No, "1 + t^n with q not dividing n is never a q-th power")
                        .with_witness(&x, c),
                    None => Evidence::new(o, rel, Answer::Unknown, "inseparable obstruction not certified"),
                });
            }
            if o.residue_characteristic() == q {
                // Mixed characteristic: 1 + q^2 M ⊆ (K^x)^q.
                let g2 = if o.coord_rank() == 2 { Gamma::pair(0, 3) } else { Gamma::int(3) };
                let a = FractionalIdealCut::at_least(o, g2)?;
                let check = sampled_membership("one_plus_q2_maximal_in_powers", &a, g, trials, seed)?;
                return Ok(Evidence::new(o, rel, Answer::Yes, "unit criterion: 1 + q^2 M inside (K^x)^q")
                    .with_cut(a)
                    .with_check(check));
            }
            Ok(Evidence::new(o, rel, compat.answer, "weakly compatible iff compatible"))
        }
        SubgroupDescriptor::ArtinSchreier { .. } => {
            Ok(Evidence::new(o, rel, compat.answer, "weakly compatible iff compatible"))
        }
        SubgroupDescriptor::Oracle(_) => Ok(Evidence::new(o, rel, Answer::Unknown, "oracle groups are only sampled")),
    }
}

/// Weakly compatible, and no strictly coarser ring has its units in `G`.
///
/// The trivial ring is reported as not coarsely compatible.
pub fn coarsely_compatible(o: &ValuationRingRef, g: &SubgroupDescriptor, trials: usize, seed: u64) -> Result<Evidence> {
    let w = weakly_compatible(o, g, trials, seed)?;
    let coarser = o
        .strict_coarsenings()
        .iter()
        .map(|c| units_in_group(c, g, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(coarsely_from(o, &w, &coarser))
}

pub(crate) fn coarsely_from(o: &ValuationRingRef, weakly: &Evidence, coarser_units: &[Evidence]) -> Evidence {
    let rel = Relation::CoarselyCompatible;
    if o.is_trivial() {
        return Evidence::new(o, rel, Answer::No, "trivial ring");
    }
    if weakly.answer != Answer::Yes {
        return Evidence::new(o, rel, weakly.answer, "not weakly compatible");
    }
    if let Some(e) = coarser_units.iter().find(|e| e.answer == Answer::Yes) {
        return Evidence::new(o, rel, Answer::No, format!("coarsening {} has its units in G", e.ring));
    }
    if coarser_units.iter().any(|e| e.answer == Answer::Unknown) {
        return Evidence::new(o, rel, Answer::Unknown, "a coarsening could not be decided");
    }
    let mut ev = Evidence::new(o, rel, Answer::Yes, "weakly compatible, every proper coarsening has a unit outside G");
    ev.witness = coarser_units.iter().filter_map(|e| e.witness.clone()).next();
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDescriptor;

    fn ring(d: FieldDescriptor, i: usize) -> ValuationRingRef {
        ValuationRingRef::new(&Field::new(d).unwrap(), i).unwrap()
    }

    const SQ: SubgroupDescriptor = SubgroupDescriptor::PowerGroup { q: 2 };

    #[test]
    fn two_adic_squares() {
        let z2 = ring(FieldDescriptor::qadic(2, 32), 1);
        let c = compatible(&z2, &SQ, 50, 1).unwrap();
        assert_eq!(c.answer, Answer::No);
        assert_eq!(c.certificate, Some(Certificate::Mod8 { residue: 3 }));
        let w = weakly_compatible(&z2, &SQ, 200, 1).unwrap();
        assert_eq!(w.answer, Answer::Yes);
        assert_eq!(w.cut.as_ref().unwrap().to_string(), "{v >= 3}");
        assert!(w.check.as_ref().unwrap().passed());
        assert_eq!(coarsely_compatible(&z2, &SQ, 50, 1).unwrap().answer, Answer::Yes);
        let triv = ring(FieldDescriptor::qadic(2, 32), 0);
        assert_eq!(coarsely_compatible(&triv, &SQ, 10, 1).unwrap().answer, Answer::No);
    }

    #[test]
    fn hensel_and_artin_schreier() {
        let z5 = ring(FieldDescriptor::qadic(5, 32), 1);
        assert_eq!(compatible(&z5, &SQ, 100, 2).unwrap().answer, Answer::Yes);
        let f3 = ring(FieldDescriptor::laurent(3, 1, 24), 1);
        let asg = SubgroupDescriptor::ArtinSchreier { p: 3 };
        let c = compatible(&f3, &asg, 200, 3).unwrap();
        assert_eq!(c.answer, Answer::Yes);
        let u = units_in_group(&f3, &asg, 10, 3).unwrap();
        assert_eq!(u.answer, Answer::No);
        let tadic = ring(FieldDescriptor::composite(2, 12), 1);
        assert_eq!(compatible(&tadic, &SQ, 30, 4).unwrap().answer, Answer::Yes);
        let comp = ring(FieldDescriptor::composite(2, 12), 2);
        assert_eq!(coarsely_compatible(&comp, &SQ, 30, 4).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn q_closed_residue_fields() {
        // 3 does not divide 5 - 1, so Z_5^x consists of cubes.
        let z5 = ring(FieldDescriptor::qadic(5, 32), 1);
        let u = units_in_group(&z5, &SubgroupDescriptor::PowerGroup { q: 3 }, 100, 5).unwrap();
        assert_eq!(u.answer, Answer::Yes);
        let z7 = ring(FieldDescriptor::qadic(7, 32), 1);
        let u = units_in_group(&z7, &SubgroupDescriptor::PowerGroup { q: 3 }, 10, 5).unwrap();
        assert_eq!(u.answer, Answer::No);
    }

    #[test]
    fn rationals_are_not_weakly_compatible() {
        let z2 = ring(FieldDescriptor::rationals(&[2]), 1);
        let w = weakly_compatible(&z2, &SQ, 10, 0).unwrap();
        assert_eq!(w.answer, Answer::No);
    }

    #[test]
    fn ideal_groups() {
        let f3 = ring(FieldDescriptor::laurent(3, 1, 16), 1);
        let g0 = SubgroupDescriptor::IdealGroup { cut: FractionalIdealCut::whole_ring(&f3) };
        assert_eq!(units_in_group(&f3, &g0, 0, 0).unwrap().answer, Answer::Yes);
        let g5 = SubgroupDescriptor::IdealGroup { cut: FractionalIdealCut::at_least(&f3, Gamma::int(5)).unwrap() };
        assert_eq!(compatible(&f3, &g5, 0, 0).unwrap().answer, Answer::No);
        assert_eq!(weakly_compatible(&f3, &g5, 0, 0).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn cross_ring_inclusions() {
        let k = Field::new(FieldDescriptor::composite(3, 8)).unwrap();
        let tadic = ValuationRingRef::new(&k, 1).unwrap();
        let comp = ValuationRingRef::new(&k, 2).unwrap();
        let m_t = FractionalIdealCut::maximal(&tadic);
        let m_c = FractionalIdealCut::maximal(&comp);
        assert!(ideal_subset(&m_t, &m_c).unwrap());
        assert!(!ideal_subset(&m_c, &m_t).unwrap());
        let a = FractionalIdealCut::at_least(&comp, Gamma::pair(0, 3)).unwrap();
        assert!(ideal_subset(&m_t, &a).unwrap());
        let q = Field::new(FieldDescriptor::rationals(&[2, 3])).unwrap();
        let (z2, z3) = (ValuationRingRef::new(&q, 1).unwrap(), ValuationRingRef::new(&q, 2).unwrap());
        assert!(!ideal_subset(&FractionalIdealCut::maximal(&z2), &FractionalIdealCut::whole_ring(&z3)).unwrap());
    }
}
