use super::{CheckId, VerificationReport};
use crate::automorphisms::{fixes_center_pointwise, named_automorphism, Automorphism, NamedLabel};
use crate::constructions::{build, CatalogEntry, GroupSpec};
use crate::error::{Error, Result};
use crate::group::{Elem, Group, IDENTITY};
use crate::twisted::{displacement_set, DisplacementSet};

/// Groups of the counterexample suite, in report order.
pub fn counterexample_catalog() -> Vec<GroupSpec> {
    [
        "two_group:n=2",
        "two_group:n=3",
        "dihedral:16",
        "q8",
        "heisenberg:3",
        "modular:3",
        "extraspecial:p=3,m=2,kind=heis",
        "extraspecial:p=2,m=2,kind=d8",
    ]
    .iter()
    .map(|s| s.parse().expect("catalog specs parse"))
    .collect()
}

fn label_for(spec: &GroupSpec) -> Result<NamedLabel> {
    Ok(match spec {
        GroupSpec::TwoGroup { .. } => NamedLabel::TwoGroupPhi,
        GroupSpec::Dihedral { .. } => NamedLabel::DihedralPhi,
        GroupSpec::Quaternion8 => NamedLabel::Q8Phi,
        GroupSpec::Heisenberg { .. } => NamedLabel::HeisenbergPhi,
        GroupSpec::Modular { .. } => NamedLabel::ModularPhi,
        GroupSpec::Extraspecial { .. } => NamedLabel::ExtraspecialPhi,
        other => {
            return Err(Error::Precondition(format!(
                "no counterexample automorphism is defined for {other}"
            )))
        }
    })
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v.dedup();
    v
}

fn show(g: &Group, set: &[Elem]) -> String {
    format!("{{{}}}", g.labels(set).join(", "))
}

/// Asserts the non-subgroup outcome and the family's side conditions.
fn examine(entry: &CatalogEntry, report: &mut VerificationReport, prefix: &str) -> Result<()> {
    let g = &entry.group;
    let label = label_for(&entry.spec)?;
    let phi = named_automorphism(entry, label, None)?;
    let d = displacement_set(g, &phi)?;
    let name = |s: &str| format!("{prefix}{s}");
    report.observe(name("displacement"), show(g, d.members()));
    report.observe(name("automorphism"), label);
    report.check_detail(
        name("displacement set is not a subgroup"),
        !d.is_subgroup(),
        format!("|[G,phi]| = {}", d.len()),
        || format!("{} is a subgroup", show(g, d.members())),
    );
    if let Some((l, r)) = d.witness() {
        report.observe(
            name("escaping product"),
            format!("{} * {} = {}", g.label(l), g.label(r), g.label(g.mul(l, r))),
        );
    }
    match entry.spec {
        GroupSpec::TwoGroup { n } => two_group(entry, n, &d, report, prefix),
        GroupSpec::Dihedral { .. } => {
            let a = entry.named("a").unwrap();
            let expected = sorted(vec![IDENTITY, g.inv(a)]);
            exact(report, g, &name("displacement set is {1, a^-1}"), &d, &expected);
            report.check(name("|[G,phi]| <= 2"), d.len() <= 2, || {
                format!("|[G,phi]| = {}", d.len())
            });
        }
        GroupSpec::Quaternion8 => {
            let i = entry.named("i").unwrap();
            let minus_i = g.inv(i);
            exact(
                report,
                g,
                &name("displacement set is {1, -i}"),
                &d,
                &sorted(vec![IDENTITY, minus_i]),
            );
            center_fixed(report, g, &phi, &name("center is fixed pointwise"))?;
        }
        GroupSpec::Heisenberg { p } => {
            let (x, z) = (entry.named("x").unwrap(), entry.named("z").unwrap());
            let p = p as i64;
            let expected = sorted((0..p).map(|t| g.mul(g.pow(x, t), g.pow(z, t * (t - 1) / 2))).collect());
            exact(
                report,
                g,
                &name("displacement set is {x^t z^(t(t-1)/2)}"),
                &d,
                &expected,
            );
            center_fixed(report, g, &phi, &name("center is fixed pointwise"))?;
        }
        GroupSpec::Modular { .. } => {
            center_fixed(report, g, &phi, &name("center is fixed pointwise"))?;
            report.observe(name("closed form"), closed_form_modular(entry, &d));
        }
        GroupSpec::Extraspecial { .. } => {
            center_fixed(report, g, &phi, &name("center is fixed pointwise"))?;
            let (cp, factor) = entry
                .central
                .as_ref()
                .ok_or_else(|| Error::Precondition("extraspecial entry without central product data".into()))?;
            let factor_phi = named_automorphism(factor, NamedLabel::for_factor(extraspecial_kind(&entry.spec)), None)?;
            let dh = displacement_set(&factor.group, &factor_phi)?;
            let embedded = sorted(dh.members().iter().map(|&h| cp.embed_h(h)).collect());
            report.observe(name("factor"), factor.descriptor());
            report.check(
                name("lifted displacement equals the embedded factor displacement"),
                embedded == d.members(),
                || format!("G: {}, embedded factor: {}", show(g, d.members()), show(g, &embedded)),
            );
        }
        _ => {}
    }
    Ok(())
}

fn extraspecial_kind(spec: &GroupSpec) -> crate::constructions::ExtraspecialKind {
    match spec {
        GroupSpec::Extraspecial { kind, .. } => *kind,
        _ => unreachable!("only called for extraspecial entries"),
    }
}

fn exact(report: &mut VerificationReport, g: &Group, name: &str, d: &DisplacementSet, expected: &[Elem]) {
    report.check(name, d.members() == expected, || {
        format!("computed {}, expected {}", show(g, d.members()), show(g, expected))
    });
}

fn center_fixed(report: &mut VerificationReport, g: &Group, phi: &Automorphism, name: &str) -> Result<()> {
    let fixed = fixes_center_pointwise(g, phi)?;
    report.check(name, fixed, || "some central element moves".into());
    Ok(())
}

fn two_group(entry: &CatalogEntry, n: u32, d: &DisplacementSet, report: &mut VerificationReport, prefix: &str) {
    let g = &entry.group;
    let bound = 1usize << (n - 1);
    report.check_detail(
        format!("{prefix}|[G,phi]| <= 2^(n-1)"),
        d.len() <= bound,
        format!("{} <= {bound}", d.len()),
        || format!("|[G,phi]| = {}", d.len()),
    );
    let top = 1u32 << n;
    let has_top = d.members().iter().any(|&e| g.element_order(e) == top);
    report.check(format!("{prefix}contains an element of order 2^n"), has_top, || {
        format!("orders in {}: none equal {top}", show(g, d.members()))
    });
    if n == 3 {
        let a = entry.named("a").unwrap();
        let expected = sorted([0, 1, 4, 5].iter().map(|&e| g.pow(a, e)).collect());
        exact(
            report,
            g,
            &format!("{prefix}displacement set is {{1, a, a^4, a^5}}"),
            d,
            &expected,
        );
    }
}

/// The members as normal-form words `x^u y^v`, in order of `(u, v)`.
fn closed_form_modular(entry: &CatalogEntry, d: &DisplacementSet) -> String {
    let g = &entry.group;
    let sd = g.as_semidirect().expect("modular groups are normal-form");
    let mut words: Vec<(u32, u32)> = d
        .members()
        .iter()
        .map(|&e| {
            let [xe, _, ye] = sd.coords(e);
            (xe, ye)
        })
        .collect();
    words.sort_unstable();
    words
        .iter()
        .map(|(xe, ye)| format!("x^{xe} y^{ye}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// One group of the counterexample suite.
pub fn check_counterexample(spec: &GroupSpec) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(CheckId::Counterexamples.as_str(), CheckId::Counterexamples.claim());
    report.param("group", spec);
    let entry = build(spec)?;
    examine(&entry, &mut report, "")?;
    report.count("groups_scanned", 1);
    Ok(report)
}

/// The whole counterexample suite in one report; assertion names are
/// prefixed with the group descriptor.
pub fn check_counterexamples() -> Result<VerificationReport> {
    let mut report = VerificationReport::new(CheckId::Counterexamples.as_str(), CheckId::Counterexamples.claim());
    let catalog = counterexample_catalog();
    for spec in &catalog {
        let entry = build(spec)?;
        examine(&entry, &mut report, &format!("{spec}: "))?;
    }
    report.count("groups_scanned", catalog.len() as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let r = check_counterexamples().unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn groups_without_a_label_are_rejected() {
        assert!(check_counterexample(&"sym:3".parse().unwrap()).is_err());
    }
}
