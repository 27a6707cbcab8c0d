use valring::fields::{Field, FieldDescriptor};
use valring::subgroups::SubgroupDescriptor;
use valring::topology::{basis_equivalence_check, vtop_report, EquivalenceStatus, FailureKind};

fn k(d: FieldDescriptor) -> Field {
    Field::new(d).unwrap()
}

#[test]
fn balls_satisfy_the_axioms_for_every_field_kind() {
    for d in [
        FieldDescriptor::rationals(&[3]),
        FieldDescriptor::qadic(5, 32),
        FieldDescriptor::laurent(2, 2, 32),
        FieldDescriptor::composite(3, 24),
    ] {
        let r = vtop_report(&k(d), None, 40, 3).unwrap();
        assert!(r.passed(), "{r:#?}");
    }
}

#[test]
fn subgroup_basis_passes_iff_og_is_nontrivial() {
    let r = vtop_report(&k(FieldDescriptor::qadic(3, 32)), Some(&SubgroupDescriptor::PowerGroup { q: 2 }), 30, 5).unwrap();
    assert_eq!(r.og_nontrivial, Some(true));
    assert!(r.passed(), "{r:#?}");

    let r = vtop_report(&k(FieldDescriptor::laurent(2, 1, 32)), Some(&SubgroupDescriptor::ArtinSchreier { p: 2 }), 30, 5)
        .unwrap();
    assert!(r.passed(), "{r:#?}");

    let r = vtop_report(&k(FieldDescriptor::rationals(&[3])), Some(&SubgroupDescriptor::PowerGroup { q: 2 }), 20, 5).unwrap();
    assert_eq!(r.og_nontrivial, Some(false));
    assert!(!r.expected_to_pass);
    assert!(r.count(FailureKind::NoWitnessFound) > 0);
    assert_eq!(r.count(FailureKind::Refuted), 0);
}

#[test]
fn reports_are_reproducible() {
    let field = k(FieldDescriptor::qadic(2, 32));
    let g = SubgroupDescriptor::PowerGroup { q: 2 };
    let a = vtop_report(&field, Some(&g), 15, 9).unwrap();
    let b = vtop_report(&field, Some(&g), 15, 9).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn ball_and_subgroup_topologies_refine_each_other() {
    let r = basis_equivalence_check(&k(FieldDescriptor::qadic(3, 32)), &SubgroupDescriptor::PowerGroup { q: 2 }, 10, 1)
        .unwrap();
    assert_eq!(r.status, EquivalenceStatus::Witness, "{r:#?}");
}
