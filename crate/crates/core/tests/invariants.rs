//! Structural invariants of twisted conjugacy over the small-group catalog.

use std::sync::OnceLock;

use proptest::prelude::*;
use twisted_core::automorphisms::{enumerate_bruteforce, inner, is_central_automorphism, Automorphism, DEFAULT_BUDGET};
use twisted_core::constructions::{build, invariant_catalog, GroupSpec};
use twisted_core::group::{center, is_subgroup, Group};
use twisted_core::twisted::{displacement_set, fixed_subgroup, is_congruence, twisted_partition};
use twisted_core::verify::{check_invariants, conjugacy_class_count, VerifyOptions};

struct Sample {
    spec: GroupSpec,
    group: Group,
    auts: Vec<Automorphism>,
}

/// Every catalog group of order at most 512 except `G(2, 3)`, whose 34992
/// automorphisms are covered by the sweep below.
fn catalog() -> &'static [Sample] {
    static CELL: OnceLock<Vec<Sample>> = OnceLock::new();
    CELL.get_or_init(|| {
        invariant_catalog()
            .into_iter()
            .filter(|s| !matches!(s, GroupSpec::TheoremA { .. }))
            .map(|spec| {
                let group = build(&spec).unwrap().group;
                let auts = enumerate_bruteforce(&group, DEFAULT_BUDGET).unwrap();
                Sample { spec, group, auts }
            })
            .collect()
    })
}

fn pick(i: usize, j: usize) -> (&'static Sample, &'static Automorphism) {
    let cat = catalog();
    let s = &cat[i % cat.len()];
    (s, &s.auts[j % s.auts.len()])
}

#[test]
fn every_catalog_group_passes_the_sweep() {
    let r = check_invariants(&invariant_catalog(), &VerifyOptions::default()).unwrap();
    assert!(r.passed(), "{:#?}", r.failed_assertions().collect::<Vec<_>>());
    assert!(r.counts["automorphisms_scanned"] > 34992);
}

#[test]
fn identity_classes_are_conjugacy_classes() {
    for s in catalog() {
        let g = &s.group;
        let p = twisted_partition(g, &Automorphism::identity(g)).unwrap();
        assert_eq!(p.reidemeister_number(), conjugacy_class_count(g), "{}", s.spec);
    }
}

#[test]
fn known_class_counts() {
    for (spec, k) in [
        ("sym:3", 3),
        ("sym:4", 5),
        ("sym:5", 7),
        ("q8", 5),
        ("dihedral:16", 7),
        ("heisenberg:3", 11),
    ] {
        let g = build(&spec.parse().unwrap()).unwrap().group;
        assert_eq!(conjugacy_class_count(&g), k, "{spec}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn class_of_identity_times_fixed_points_is_the_order(i in any::<usize>(), j in any::<usize>()) {
        let (s, phi) = pick(i, j);
        let g = &s.group;
        let d = displacement_set(g, phi).unwrap();
        let c = fixed_subgroup(g, phi).unwrap();
        prop_assert_eq!(d.len() * c.len(), g.order());
        let p = twisted_partition(g, phi).unwrap();
        prop_assert_eq!(p.class_of(0), d.members());
        let total: usize = p.classes.iter().map(|c| c.len()).sum();
        prop_assert_eq!(total, g.order());
    }

    #[test]
    fn central_automorphisms_have_subgroup_displacements(i in any::<usize>(), j in any::<usize>()) {
        let (s, phi) = pick(i, j);
        let g = &s.group;
        let d = displacement_set(g, phi).unwrap();
        let z = center(g);
        let central = d.members().iter().all(|&u| z.contains(u));
        prop_assert_eq!(central, is_central_automorphism(g, phi).unwrap());
        if central {
            prop_assert!(d.is_subgroup());
        }
    }

    #[test]
    fn abelian_groups_have_congruence_classes(i in any::<usize>(), j in any::<usize>()) {
        let (s, phi) = pick(i, j);
        if s.group.is_abelian() {
            prop_assert!(is_congruence(&s.group, phi).unwrap().holds);
        }
    }

    #[test]
    fn automorphisms_preserve_orders(i in any::<usize>(), j in any::<usize>(), x in any::<u32>()) {
        let (s, phi) = pick(i, j);
        let g = &s.group;
        let x = x % g.order() as u32;
        prop_assert_eq!(g.element_order(phi.apply(x)), g.element_order(x));
    }

    #[test]
    fn inner_displacement_sets_lie_in_the_derived_subgroup(i in any::<usize>(), x in any::<u32>()) {
        let (s, _) = pick(i, 0);
        let g = &s.group;
        let h = x % g.order() as u32;
        let d = displacement_set(g, &inner(g, h)).unwrap();
        // g^-1 h^-1 g h is a commutator
        for &u in d.members() {
            prop_assert!(g.elements().any(|y| g.commutator(y, h) == u));
        }
        let test = is_subgroup(g, d.members()).unwrap();
        prop_assert_eq!(test.is_subgroup(), d.is_subgroup());
    }
}
