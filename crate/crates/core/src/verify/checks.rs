use std::ops::ControlFlow;

use super::{CheckId, VerificationReport, VerifyOptions};
use crate::automorphisms::{inner, visit_bruteforce, Automorphism, Provenance, StructuredEnumerator};
use crate::constructions::{build, congruence_catalog, theorem_a_group, two_group_family, GroupSpec};
use crate::error::{Error, Result};
use crate::group::{direct_product, is_regular_p_group, nilpotency_class, Elem, Group, Nilpotency};
use crate::twisted::{displacement_set, is_congruence, TwistedScratch};
use crate::util::prime_power;

fn show(g: &Group, set: &[Elem]) -> String {
    format!("{{{}}}", g.labels(set).join(", "))
}

/// Conjugation by `(123)` in `S3`.
pub fn check_s3_example() -> Result<VerificationReport> {
    let mut report = VerificationReport::new(CheckId::S3Example.as_str(), CheckId::S3Example.claim());
    let spec = GroupSpec::Symmetric { k: 3 };
    report.param("group", &spec).param("automorphism", "inner:(123)");
    let g = build(&spec)?.group;
    let phi = inner(&g, g.parse_element("(123)")?);
    let d = displacement_set(&g, &phi)?;
    let labels = g.labels(d.members());
    report.observe("displacement", show(&g, d.members()));
    report.check("displacement set is {1, (132)}", labels == ["1", "(132)"], || {
        format!("computed {}", show(&g, d.members()))
    });
    report.check("displacement set is not a subgroup", !d.is_subgroup(), || {
        "the displacement set is closed under multiplication".into()
    });
    if let Some((l, r)) = d.witness() {
        report.observe(
            "escaping product",
            format!("{} * {} = {}", g.label(l), g.label(r), g.label(g.mul(l, r))),
        );
    }
    Ok(report)
}

/// For each group: some inner automorphism gives congruence classes iff the
/// group is abelian.
pub fn check_inner_congruence(group: Option<&GroupSpec>) -> Result<VerificationReport> {
    let id = CheckId::InnerCongruence;
    let mut report = VerificationReport::new(id.as_str(), id.claim());
    let specs = match group {
        Some(spec) => {
            report.param("group", spec);
            vec![spec.clone()]
        }
        None => congruence_catalog(),
    };
    let mut inner_count = 0u64;
    for spec in &specs {
        let g = build(spec)?.group;
        let abelian = g.is_abelian();
        let mut found = None;
        for h in g.elements() {
            inner_count += 1;
            if is_congruence(&g, &inner(&g, h))?.holds {
                found = Some(h);
                break;
            }
        }
        report.observe(
            format!("{spec}"),
            match found {
                Some(h) => format!("abelian={abelian}; congruence for conjugation by {}", g.label(h)),
                None => format!("abelian={abelian}; no inner automorphism gives congruence"),
            },
        );
        report.check(
            format!("{spec}: inner congruence exists iff abelian"),
            found.is_some() == abelian,
            || match found {
                Some(h) => format!("nonabelian, yet conjugation by {} gives congruence", g.label(h)),
                None => "abelian, yet no inner automorphism gives congruence".into(),
            },
        );
    }
    report
        .count("groups_scanned", specs.len() as u64)
        .count("inner_automorphisms", inner_count);
    Ok(report)
}

/// `(xc)^(2^t) = x^(2^t) c'` with `c' ∈ <c^(2^(t+1))>` for every `c ∈ A`
/// and `2^t <= |x|`, and `|xc| = 2^(n-1)` whenever `|c| = 2^n`.
pub fn check_power_formula(n: u32) -> Result<VerificationReport> {
    let id = CheckId::PowerFormula;
    let mut report = VerificationReport::new(id.as_str(), id.claim());
    report.param("n", n);
    let entry = two_group_family(n)?;
    report.param("group", entry.descriptor());
    let g = &entry.group;
    let sd = g
        .as_semidirect()
        .ok_or_else(|| Error::Precondition("two-group family is not in normal form".into()))?;
    let x = entry.named("x").unwrap();
    let m = g.element_order(x) as i64;
    let top = 1u32 << n;
    let mut pairs = 0u64;
    let mut outside_a = None;
    let mut outside_cyclic = None;
    let mut bad_order = None;
    let mut top_elements = 0u64;
    for c in g.elements().filter(|&c| sd.in_a(c)) {
        let xc = g.mul(x, c);
        let mut t = 1u32;
        while (1i64 << t) <= m {
            pairs += 1;
            let e = 1i64 << t;
            let rest = g.mul(g.pow(x, -e), g.pow(xc, e));
            if !sd.in_a(rest) {
                outside_a.get_or_insert((c, t, rest));
            } else {
                let gen = g.pow(c, 2 * e);
                let in_cyclic = (0..g.element_order(gen) as i64).any(|k| g.pow(gen, k) == rest);
                if !in_cyclic {
                    outside_cyclic.get_or_insert((c, t, rest));
                }
            }
            t += 1;
        }
        if g.element_order(c) == top {
            top_elements += 1;
            if g.element_order(xc) != top / 2 {
                bad_order.get_or_insert(c);
            }
        }
    }
    let describe = |(c, t, rest): (Elem, u32, Elem)| {
        format!("c = {}, t = {t}: x^(-2^t) (xc)^(2^t) = {}", g.label(c), g.label(rest))
    };
    report.check("x^(-2^t) (xc)^(2^t) lies in A", outside_a.is_none(), || {
        describe(outside_a.unwrap())
    });
    report.check(
        "x^(-2^t) (xc)^(2^t) lies in <c^(2^(t+1))>",
        outside_cyclic.is_none(),
        || describe(outside_cyclic.unwrap()),
    );
    report.check("|xc| = 2^(n-1) when |c| = 2^n", bad_order.is_none(), || {
        let c = bad_order.unwrap();
        format!("c = {}, |xc| = {}", g.label(c), g.element_order(g.mul(x, c)))
    });
    report
        .count("pairs_checked", pairs)
        .count("elements_of_order_2^n", top_elements);
    Ok(report)
}

/// Regularity of `G(2, 3)` (or of the given `G(n, p)`), plus recorded
/// outcomes for reference groups.
pub fn check_regularity(group: Option<&GroupSpec>) -> Result<VerificationReport> {
    let id = CheckId::Regularity;
    let mut report = VerificationReport::new(id.as_str(), id.claim());
    let asserted = match group {
        Some(spec) => {
            report.param("group", spec);
            spec.clone()
        }
        None => GroupSpec::TheoremA { n: 2, p: 3 },
    };
    let entry = build(&asserted)?;
    let g = &entry.group;
    let p = prime_power(g.order() as u64)
        .map(|(p, _)| p)
        .ok_or_else(|| Error::Precondition(format!("{asserted} is not a p-group")))?;
    let r = is_regular_p_group(g, p)?;
    report.count("pairs_checked", r.pairs_checked);
    match asserted {
        GroupSpec::TheoremA { .. } => {
            report.check(format!("{asserted} is regular"), r.regular, || {
                let (a, b) = r.witness.unwrap();
                format!("pair ({}, {}) violates regularity", g.label(a), g.label(b))
            });
        }
        _ => {
            report.observe(format!("{asserted}"), regularity_note(g, &r));
        }
    }
    if group.is_none() {
        for s in ["heisenberg:3", "modular:3", "dihedral:8", "q8", "abelian:9,9"] {
            let spec: GroupSpec = s.parse()?;
            let h = build(&spec)?.group;
            let p = prime_power(h.order() as u64).unwrap().0;
            report.observe(s, regularity_note(&h, &is_regular_p_group(&h, p)?));
        }
    }
    Ok(report)
}

fn regularity_note(g: &Group, r: &crate::group::Regularity) -> String {
    match r.witness {
        None => "regular".into(),
        Some((a, b)) => format!("not regular, witness ({}, {})", g.label(a), g.label(b)),
    }
}

/// Displacement sets of `G(2, 3) x G(2, 5)` for componentwise automorphism
/// pairs. The first pair is the identity; the others are seeded samples.
pub fn check_direct_product(pairs: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let id = CheckId::DirectProduct;
    let mut report = VerificationReport::new(id.as_str(), id.claim());
    let seed = opts.require_seed("the direct-product check")?;
    let (e1, e2) = (theorem_a_group(2, 3)?, theorem_a_group(2, 5)?);
    let (g1, g2) = (&e1.group, &e2.group);
    let prod = direct_product(g1, g2)?;
    report
        .param("group", format!("{} x {}", e1.descriptor(), e2.descriptor()))
        .param("pairs", pairs);
    report.seed = Some(seed);
    report.sample_size = Some(pairs);

    let draw = |g: &Group, seed: u64| -> Result<Vec<Vec<Elem>>> {
        let mut out = vec![g.elements().collect::<Vec<_>>()];
        if pairs > 1 {
            let en = StructuredEnumerator::new(g)?;
            en.sample(pairs - 1, seed, 100 * pairs, |phi| out.push(phi.perm().to_vec()))?;
        }
        out.truncate(pairs as usize);
        Ok(out)
    };
    let perms1 = draw(g1, seed)?;
    let perms2 = draw(g2, seed.wrapping_add(1))?;

    let kn = g2.order() as Elem;
    let mut s1 = TwistedScratch::new(g1.order());
    let mut s2 = TwistedScratch::new(g2.order());
    let mut sp = TwistedScratch::new(prod.order());
    let mut perm = vec![0; prod.order()];
    let mut failures: [(u64, Option<String>); 4] = Default::default();
    let mut fail = |slot: usize, i: usize, what: String| {
        failures[slot].0 += 1;
        failures[slot].1.get_or_insert_with(|| format!("pair {i}: {what}"));
    };
    for (i, (p1, p2)) in perms1.iter().zip(&perms2).enumerate() {
        let d1 = s1.displacement(g1, p1, true);
        let m1 = s1.members().to_vec();
        let d2 = s2.displacement(g2, p2, true);
        let m2 = s2.members().to_vec();
        for h in 0..g1.order() {
            let base = p1[h] * kn;
            for k in 0..g2.order() {
                perm[h * kn as usize + k] = base + p2[k];
            }
        }
        let phi = Automorphism::from_parts(
            perm.clone(),
            prod.generators().iter().map(|&x| perm[x as usize]).collect(),
            Provenance::Composite,
        );
        let dp = sp.displacement(&prod, phi.perm(), false);
        let product_matches = dp.len == m1.len() * m2.len()
            && sp
                .members()
                .iter()
                .all(|&e| s1.in_displacement(e / kn) && s2.in_displacement(e % kn));
        if !product_matches {
            fail(
                0,
                i,
                format!("|[G,phi]| = {}, |D1| * |D2| = {}", dp.len, m1.len() * m2.len()),
            );
        }
        if !(d1.test.is_subgroup() && d1.normal == Some(true)) {
            fail(
                1,
                i,
                format!("first factor displacement of size {} is not a normal subgroup", d1.len),
            );
        }
        if !(d2.test.is_subgroup() && d2.normal == Some(true)) {
            fail(
                2,
                i,
                format!("second factor displacement of size {} is not a normal subgroup", d2.len),
            );
        }
        if !dp.test.is_subgroup() {
            fail(3, i, "product displacement set is not a subgroup".into());
        }
    }
    let n = perms1.len() as u64;
    let names = [
        "product displacement equals D1 x D2",
        "first factor displacement is a normal subgroup",
        "second factor displacement is a normal subgroup",
        "product displacement is a subgroup",
    ];
    for (name, (count, first)) in names.iter().zip(failures) {
        report.check_detail(*name, count == 0, format!("{} of {n}", n - count), || {
            first.unwrap_or_default()
        });
    }
    report.count("pairs_checked", n);
    Ok(report)
}

/// Groups explored by [`check_search`].
fn search_catalog(max_n: u32) -> Vec<GroupSpec> {
    let mut specs: Vec<GroupSpec> = ["dihedral:8", "dihedral:16", "dihedral:32", "q8", "abelian:4,4"]
        .iter()
        .map(|s| s.parse().expect("catalog specs parse"))
        .collect();
    specs.extend((2..=max_n).map(|n| GroupSpec::TwoGroup { n }));
    specs.extend(
        ["extraspecial:p=2,m=2,kind=d8", "extraspecial:p=2,m=2,kind=q8"]
            .iter()
            .map(|s| s.parse::<GroupSpec>().expect("catalog specs parse")),
    );
    specs
}

/// Scans 2-groups for an automorphism whose displacement set is not a
/// subgroup, stopping at the first one per group. Outcomes are recorded as
/// observations; nothing is asserted.
pub fn check_search(max_n: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    let id = CheckId::Search;
    let mut report = VerificationReport::new(id.as_str(), id.claim());
    report.param("max_n", max_n).param("budget", opts.budget);
    let specs = search_catalog(max_n);
    let mut all_subgroups = 0u64;
    for spec in &specs {
        let g = build(spec)?.group;
        let class = match nilpotency_class(&g)? {
            Nilpotency::Class(c) => c.to_string(),
            Nilpotency::NotNilpotent => "not nilpotent".into(),
        };
        let mut scratch = TwistedScratch::new(g.order());
        let mut found: Option<(Vec<Elem>, Vec<Elem>)> = None;
        let outcome = visit_bruteforce(&g, opts.budget, |images, perm| {
            if scratch.displacement(&g, perm, false).test.is_subgroup() {
                ControlFlow::Continue(())
            } else {
                found = Some((images.to_vec(), scratch.members().to_vec()));
                ControlFlow::Break(())
            }
        });
        let note = match (outcome, found) {
            (Ok(stats), Some((images, d))) => format!(
                "class {class}; non-subgroup displacement at automorphism {} with generator images ({}): {}",
                stats.automorphisms,
                g.labels(&images).join(", "),
                show(&g, &d)
            ),
            (Ok(stats), None) => {
                all_subgroups += 1;
                format!(
                    "class {class}; all {} automorphisms have subgroup displacement sets",
                    stats.automorphisms
                )
            }
            (Err(Error::Budget { budget, .. }), _) => {
                format!("class {class}; search budget of {budget} exhausted without a non-subgroup displacement")
            }
            (Err(e), _) => return Err(e),
        };
        report.observe(spec.to_string(), note);
    }
    report
        .count("groups_explored", specs.len() as u64)
        .count("groups_with_only_subgroups", all_subgroups);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_example_passes() {
        let r = check_s3_example().unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn power_formula_n2_and_n3() {
        for n in [2, 3] {
            let r = check_power_formula(n).unwrap();
            assert!(r.passed(), "{r:#?}");
        }
    }

    #[test]
    fn inner_congruence_on_small_groups() {
        for s in ["cyclic:9", "sym:3", "q8"] {
            let r = check_inner_congruence(Some(&s.parse().unwrap())).unwrap();
            assert!(r.passed(), "{r:#?}");
        }
    }

    #[test]
    fn direct_product_needs_a_seed() {
        assert!(check_direct_product(2, &VerifyOptions::default()).is_err());
    }

    #[test]
    fn direct_product_small_run() {
        let opts = VerifyOptions {
            seed: Some(1),
            ..Default::default()
        };
        let r = check_direct_product(3, &opts).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.counts["pairs_checked"], 3);
    }
}
