//! The specific automorphisms used by the non-subgroup constructions.

use std::fmt;
use std::str::FromStr;

use super::{from_generator_images, lift_central_product, Automorphism, Provenance};
use crate::constructions::{CatalogEntry, ExtraspecialKind, GroupSpec};
use crate::error::{Error, Result};
use crate::group::{Elem, Group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedLabel {
    /// `two_group:n`: identity on `A`, `x ↦ x c` (default `c = a`).
    TwoGroupPhi,
    /// `dihedral`: `a ↦ a`, `x ↦ x a⁻¹`.
    DihedralPhi,
    /// `q8`: `i ↦ i`, `j ↦ k`.
    Q8Phi,
    /// `heisenberg`: `x ↦ x`, `y ↦ y x`.
    HeisenbergPhi,
    /// `modular`: `y ↦ y`, `x ↦ y x`.
    ModularPhi,
    /// `extraspecial`: the first factor's automorphism lifted through the
    /// central product.
    ExtraspecialPhi,
}

impl NamedLabel {
    pub const ALL: [NamedLabel; 6] = [
        NamedLabel::TwoGroupPhi,
        NamedLabel::DihedralPhi,
        NamedLabel::Q8Phi,
        NamedLabel::HeisenbergPhi,
        NamedLabel::ModularPhi,
        NamedLabel::ExtraspecialPhi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NamedLabel::TwoGroupPhi => "two_group_phi",
            NamedLabel::DihedralPhi => "dihedral_phi",
            NamedLabel::Q8Phi => "q8_phi",
            NamedLabel::HeisenbergPhi => "heisenberg_phi",
            NamedLabel::ModularPhi => "modular_phi",
            NamedLabel::ExtraspecialPhi => "extraspecial_phi",
        }
    }

    /// The label applying to the order-`p^3` factor of the given kind.
    pub fn for_factor(kind: ExtraspecialKind) -> Self {
        match kind {
            ExtraspecialKind::Heis => NamedLabel::HeisenbergPhi,
            ExtraspecialKind::Modular => NamedLabel::ModularPhi,
            ExtraspecialKind::D8 => NamedLabel::DihedralPhi,
            ExtraspecialKind::Q8 => NamedLabel::Q8Phi,
        }
    }
}

impl fmt::Display for NamedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NamedLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::parse(s, "unknown automorphism label"))
    }
}

fn images(group: &Group, label: NamedLabel, c: Option<Elem>) -> Vec<Elem> {
    let g = group.generators();
    match label {
        NamedLabel::TwoGroupPhi => {
            let c = c.unwrap_or(g[0]);
            vec![g[0], g[1], group.mul(g[2], c)]
        }
        NamedLabel::DihedralPhi => vec![g[0], group.mul(g[1], group.inv(g[0]))],
        NamedLabel::Q8Phi => vec![g[0], group.mul(g[0], g[1])],
        NamedLabel::HeisenbergPhi => vec![g[0], group.mul(g[1], g[0])],
        NamedLabel::ModularPhi => vec![group.mul(g[1], g[0]), g[1]],
        NamedLabel::ExtraspecialPhi => unreachable!("lifted, not given by images"),
    }
}

fn applies(label: NamedLabel, spec: &GroupSpec) -> Option<ExtraspecialKind> {
    use GroupSpec as S;
    let ok = match (label, spec) {
        (NamedLabel::TwoGroupPhi, S::TwoGroup { .. }) => true,
        (NamedLabel::DihedralPhi, S::Dihedral { .. }) => true,
        (NamedLabel::Q8Phi, S::Quaternion8) => true,
        (NamedLabel::HeisenbergPhi, S::Heisenberg { .. }) => true,
        (NamedLabel::ModularPhi, S::Modular { .. }) => true,
        (NamedLabel::ExtraspecialPhi, S::Extraspecial { kind, .. }) => return Some(*kind),
        _ => false,
    };
    // the kind is irrelevant outside the extraspecial case
    ok.then_some(ExtraspecialKind::Heis)
}

/// Builds and validates the labelled automorphism of `entry`. For
/// `two_group_phi`, `c` overrides the default `c = a`.
pub fn named_automorphism(entry: &CatalogEntry, label: NamedLabel, c: Option<Elem>) -> Result<Automorphism> {
    let kind = applies(label, &entry.spec)
        .ok_or_else(|| Error::Precondition(format!("{label} does not apply to {}", entry.descriptor())))?;
    let group = &entry.group;
    if let Some(c) = c {
        group.check(c)?;
        if label != NamedLabel::TwoGroupPhi {
            return Err(Error::param("only two_group_phi takes an element parameter"));
        }
        let sd = group.as_semidirect().expect("two_group entries are normal-form");
        if !sd.in_a(c) {
            return Err(Error::Precondition("c must lie in A".into()));
        }
    }
    let provenance = Provenance::Named(label.as_str().into());
    if label != NamedLabel::ExtraspecialPhi {
        return Ok(from_generator_images(group, &images(group, label, c), provenance)?);
    }
    let factor_label = NamedLabel::for_factor(kind);
    match &entry.central {
        // a single factor: the factor's own automorphism
        None => Ok(from_generator_images(
            group,
            &images(group, factor_label, None),
            provenance,
        )?),
        Some((cp, factor)) => {
            let phi = from_generator_images(
                &factor.group,
                &images(&factor.group, factor_label, None),
                Provenance::Named(factor_label.as_str().into()),
            )?;
            Ok(lift_central_product(cp, &phi)?.with_provenance(Provenance::Lifted(factor_label.as_str().into())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::{fixes_center_pointwise, is_homomorphism_exhaustive};
    use crate::constructions::build;

    fn entry(spec: &str) -> CatalogEntry {
        build(&spec.parse().unwrap()).unwrap()
    }

    #[test]
    fn every_label_validates_on_its_family() {
        for (spec, label) in [
            ("two_group:n=2", NamedLabel::TwoGroupPhi),
            ("two_group:n=3", NamedLabel::TwoGroupPhi),
            ("dihedral:16", NamedLabel::DihedralPhi),
            ("q8", NamedLabel::Q8Phi),
            ("heisenberg:3", NamedLabel::HeisenbergPhi),
            ("modular:3", NamedLabel::ModularPhi),
            ("extraspecial:p=3,m=2,kind=heis", NamedLabel::ExtraspecialPhi),
            ("extraspecial:p=2,m=2,kind=q8", NamedLabel::ExtraspecialPhi),
        ] {
            let e = entry(spec);
            let phi = named_automorphism(&e, label, None).unwrap();
            assert!(is_homomorphism_exhaustive(&e.group, &phi), "{spec}");
        }
    }

    #[test]
    fn q8_and_heisenberg_fix_the_center() {
        for (spec, label) in [("q8", NamedLabel::Q8Phi), ("heisenberg:3", NamedLabel::HeisenbergPhi)] {
            let e = entry(spec);
            let phi = named_automorphism(&e, label, None).unwrap();
            assert!(fixes_center_pointwise(&e.group, &phi).unwrap());
        }
        let h = entry("heisenberg:3");
        let phi = named_automorphism(&h, NamedLabel::HeisenbergPhi, None).unwrap();
        let z = h.named("z").unwrap();
        assert_eq!(phi.apply(z), z);
    }

    #[test]
    fn labels_are_family_specific() {
        let e = entry("q8");
        assert!(named_automorphism(&e, NamedLabel::DihedralPhi, None).is_err());
        assert_eq!("q8_phi".parse::<NamedLabel>().unwrap(), NamedLabel::Q8Phi);
        assert!("q9_phi".parse::<NamedLabel>().is_err());
    }
}
