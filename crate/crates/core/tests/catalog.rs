use valring::fields::{Field, FieldDescriptor};
use valring::lattice::classify::classify;
use valring::lattice::compat::Answer;
use valring::lattice::definability::{definability_verdict, Definable, DefinabilityRule};
use valring::lattice::henselian::{q_henselian, HenselCriterion};
use valring::lattice::pipeline::definable_valuation_report;
use valring::lattice::ValuationRingRef;
use valring::subgroups::{Case, SubgroupDescriptor};
use valring::Error;

const TRIALS: usize = 100;

fn k(d: FieldDescriptor) -> Field {
    Field::new(d).unwrap()
}

fn pow(q: u64) -> SubgroupDescriptor {
    SubgroupDescriptor::PowerGroup { q }
}

#[test]
fn case_distinction() {
    let table = [
        (FieldDescriptor::qadic(2, 32), pow(2), Case::WeakCase, "Z_q"),
        (FieldDescriptor::qadic(5, 32), pow(3), Case::GroupCase, "Z_q"),
        (FieldDescriptor::qadic(5, 32), pow(2), Case::ResidueCase, "Z_q"),
        (FieldDescriptor::laurent(3, 1, 32), SubgroupDescriptor::ArtinSchreier { p: 3 }, Case::ResidueCase, "F[[t]]"),
        (FieldDescriptor::laurent(2, 2, 32), pow(3), Case::ResidueCase, "F[[t]]"),
        (FieldDescriptor::composite(2, 24), pow(2), Case::WeakCase, "O_comp"),
    ];
    for (d, g, case, ring) in table {
        let field = k(d);
        let r = classify(&field, &g, TRIALS, 1).unwrap();
        assert_eq!((r.case, r.og_ring.as_str()), (case, ring), "{field} {g}");
        assert!(r.checks.iter().all(|c| c.passed()), "{:?}", r.checks);
    }
}

#[test]
fn henselian_dispatch() {
    let ring = |d: FieldDescriptor, i: usize| ValuationRingRef::new(&k(d), i).unwrap();
    let z5 = ring(FieldDescriptor::qadic(5, 32), 1);
    let r = q_henselian(&z5, 2, TRIALS, 0).unwrap();
    assert_eq!((r.answer, r.criterion), (Answer::Yes, HenselCriterion::UnitGroup));
    let f3 = ring(FieldDescriptor::laurent(3, 1, 32), 1);
    let r = q_henselian(&f3, 3, TRIALS, 0).unwrap();
    assert_eq!((r.answer, r.criterion), (Answer::Yes, HenselCriterion::ArtinSchreier));
    let z2 = ring(FieldDescriptor::qadic(2, 32), 1);
    let r = q_henselian(&z2, 2, TRIALS, 0).unwrap();
    assert_eq!((r.answer, r.criterion), (Answer::Yes, HenselCriterion::MixedCharacteristic));
    assert!(matches!(q_henselian(&z2, 3, TRIALS, 0), Err(Error::HypothesisViolation(_))));
    let z3 = ring(FieldDescriptor::rationals(&[3]), 1);
    assert_eq!(q_henselian(&z3, 2, TRIALS, 0).unwrap().answer, Answer::No);
}

#[test]
fn definability_rules() {
    let cases = [
        (FieldDescriptor::qadic(5, 32), pow(3), DefinabilityRule::GroupMultiplicative),
        (FieldDescriptor::qadic(2, 32), pow(2), DefinabilityRule::WeakMultiplicative),
        (FieldDescriptor::qadic(5, 32), pow(2), DefinabilityRule::ResidueMultiplicative),
        (FieldDescriptor::laurent(3, 1, 32), SubgroupDescriptor::ArtinSchreier { p: 3 }, DefinabilityRule::ResidueAdditive),
    ];
    for (d, g, rule) in cases {
        let field = k(d);
        let report = classify(&field, &g, TRIALS, 2).unwrap();
        let v = definability_verdict(&report, &g, TRIALS, 2).unwrap();
        assert_eq!((v.rule, v.definable), (rule, Definable::Yes), "{field} {g}");
    }
}

#[test]
fn pipeline_finds_the_catalog_rings() {
    let r = definable_valuation_report(&k(FieldDescriptor::composite(2, 24)), 50, 0);
    assert_eq!((r.success, r.q, r.og_ring.as_deref()), (true, Some(2), Some("O_comp")));
    let r = definable_valuation_report(&k(FieldDescriptor::laurent(2, 1, 24)), 50, 0);
    assert_eq!((r.success, r.q), (true, Some(2)));
}
