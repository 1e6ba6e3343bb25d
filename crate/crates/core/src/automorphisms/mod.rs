//! Automorphisms stored as full permutations of element indices.
//!
//! Every automorphism in this crate comes out of [`Extender`], which extends
//! a generator map along a breadth-first spanning tree of the Cayley graph
//! and checks every remaining edge. A map passing all checks is a
//! homomorphism; injectivity plus reaching every element makes it bijective.

mod bruteforce;
pub mod cache;
mod lift;
mod named;
mod structured;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::group::{center, Elem, Group, IDENTITY};
use crate::util::Marks;

pub use bruteforce::{enumerate_bruteforce, visit_bruteforce, BruteForceStats, DEFAULT_BUDGET};
pub use lift::lift_central_product;
pub use named::{named_automorphism, NamedLabel};
pub use structured::{
    enumerate_structured, structured_gate, GateReport, StructuredCounts, StructuredEnumerator, StructuredScratch,
    ENUMERATOR_VERSION,
};

/// How an automorphism was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Provenance {
    Identity,
    BruteForce,
    Structured,
    Named(String),
    Inner(Elem),
    Lifted(String),
    Composite,
    Cached,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Identity => write!(f, "identity"),
            Provenance::BruteForce => write!(f, "brute_force"),
            Provenance::Structured => write!(f, "structured"),
            Provenance::Named(l) => write!(f, "named({l})"),
            Provenance::Inner(g) => write!(f, "inner(#{g})"),
            Provenance::Lifted(l) => write!(f, "lifted({l})"),
            Provenance::Composite => write!(f, "composite"),
            Provenance::Cached => write!(f, "cached"),
        }
    }
}

/// A bijective homomorphism `G -> G`, as the image of every element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    perm: Vec<Elem>,
    gen_images: Vec<Elem>,
    provenance: Provenance,
}

impl Automorphism {
    pub fn identity(group: &Group) -> Self {
        Automorphism {
            perm: group.elements().collect(),
            gen_images: group.generators().to_vec(),
            provenance: Provenance::Identity,
        }
    }

    /// Wraps an already validated permutation.
    pub(crate) fn from_parts(perm: Vec<Elem>, gen_images: Vec<Elem>, provenance: Provenance) -> Self {
        Automorphism {
            perm,
            gen_images,
            provenance,
        }
    }

    #[inline]
    pub fn apply(&self, g: Elem) -> Elem {
        self.perm[g as usize]
    }

    pub fn perm(&self) -> &[Elem] {
        &self.perm
    }

    /// Images of the group's designated generators.
    pub fn gen_images(&self) -> &[Elem] {
        &self.gen_images
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn group_order(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &g)| i as Elem == g)
    }

    /// Errors unless this automorphism acts on a group of `group`'s order.
    pub fn check_group(&self, group: &Group) -> Result<()> {
        if self.perm.len() != group.order() {
            return Err(Error::GroupMismatch {
                aut_order: self.perm.len(),
                group_order: group.order(),
            });
        }
        Ok(())
    }

    /// `self` followed by `other`: `g ↦ other(self(g))`.
    pub fn then(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: self.perm.iter().map(|&g| other.apply(g)).collect(),
            gen_images: self.gen_images.iter().map(|&g| other.apply(g)).collect(),
            provenance: Provenance::Composite,
        }
    }

    pub fn inverse(&self, group: &Group) -> Automorphism {
        let mut perm = vec![IDENTITY; self.perm.len()];
        for (g, &img) in self.perm.iter().enumerate() {
            perm[img as usize] = g as Elem;
        }
        let gen_images = group.generators().iter().map(|&g| perm[g as usize]).collect();
        Automorphism {
            perm,
            gen_images,
            provenance: Provenance::Composite,
        }
    }
}

/// Proposed images for a list of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorMap {
    pub generators: Vec<Elem>,
    pub images: Vec<Elem>,
}

impl GeneratorMap {
    /// A map on the group's designated generators.
    pub fn on_generators(group: &Group, images: Vec<Elem>) -> Self {
        GeneratorMap {
            generators: group.generators().to_vec(),
            images,
        }
    }
}

/// Why a generator map does not extend to an automorphism.
#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionFailure {
    #[error("malformed generator map: {reason}")]
    Malformed { reason: String },
    #[error("the generators reach only {reached} of {order} elements")]
    NotGenerating { reached: usize, order: usize },
    #[error("generator {generator} of order {expected} is sent to an element of order {found}")]
    OrderMismatch {
        generator: usize,
        expected: u32,
        found: u32,
    },
    #[error("relation conflict: two derivations of element #{element} disagree")]
    NotHomomorphism { element: Elem },
    #[error("defining relator #{relator} evaluates to element #{value} instead of the identity")]
    Relator { relator: usize, value: Elem },
    #[error("the image misses part of the group (element #{element} has a repeated image)")]
    NotSurjective { element: Elem },
}

impl ExtensionFailure {
    /// Coarse classification: `not_generating`, `not_homomorphism` or
    /// `not_surjective`.
    pub fn kind(&self) -> &'static str {
        match self {
            ExtensionFailure::Malformed { .. } => "malformed",
            ExtensionFailure::NotGenerating { .. } => "not_generating",
            ExtensionFailure::OrderMismatch { .. }
            | ExtensionFailure::NotHomomorphism { .. }
            | ExtensionFailure::Relator { .. } => "not_homomorphism",
            ExtensionFailure::NotSurjective { .. } => "not_surjective",
        }
    }
}

/// Edges of the Cayley graph added when generator `level` joins the
/// generating set.
#[derive(Clone, Debug, Default)]
struct Level {
    /// `(child, parent, generator)`: `child = parent * gens[generator]`.
    tree: Vec<(Elem, Elem, u8)>,
    /// `(u, generator, w)` with `w = u * gens[generator]` already reached.
    checks: Vec<(Elem, u8, Elem)>,
}

/// Breadth-first spanning data for a fixed generator list, split by prefix:
/// level `i` covers `<g_0, ..., g_i>` minus `<g_0, ..., g_{i-1}>`.
#[derive(Clone, Debug)]
pub struct Extender {
    order: usize,
    gens: Vec<Elem>,
    gen_orders: Vec<u32>,
    levels: Vec<Level>,
    /// `reach[i] = |<g_0, ..., g_i>|`.
    reach: Vec<usize>,
}

/// Per-thread buffers for [`Extender::extend_into`].
pub struct ExtendScratch {
    used: Marks,
}

impl ExtendScratch {
    pub fn new(order: usize) -> Self {
        ExtendScratch {
            used: Marks::new(order),
        }
    }
}

impl Extender {
    pub fn new(group: &Group, gens: &[Elem]) -> Result<Self> {
        for &g in gens {
            group.check(g)?;
        }
        if gens.len() > u8::MAX as usize {
            return Err(Error::param("too many generators"));
        }
        let n = group.order();
        let mut reached = Marks::new(n);
        reached.insert(IDENTITY);
        let mut members = vec![IDENTITY];
        let mut levels = Vec::with_capacity(gens.len());
        let mut reach = Vec::with_capacity(gens.len());
        for li in 0..gens.len() {
            let mut level = Level::default();
            let old_len = members.len();
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                // old members only need the new generator
                let first = if head < old_len { li } else { 0 };
                for (gi, &h) in gens.iter().enumerate().take(li + 1).skip(first) {
                    let w = group.mul(u, h);
                    if reached.insert(w) {
                        members.push(w);
                        level.tree.push((w, u, gi as u8));
                    } else {
                        level.checks.push((u, gi as u8, w));
                    }
                }
                head += 1;
            }
            levels.push(level);
            reach.push(members.len());
        }
        Ok(Extender {
            order: n,
            gens: gens.to_vec(),
            gen_orders: gens.iter().map(|&g| group.element_order(g)).collect(),
            levels,
            reach,
        })
    }

    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    /// Order of the subgroup generated by all generators.
    pub fn reach(&self) -> usize {
        self.reach.last().copied().unwrap_or(1)
    }

    /// Order of `<g_0, ..., g_level>`.
    pub fn prefix_reach(&self, level: usize) -> usize {
        self.reach[level]
    }

    pub fn generator_orders(&self) -> &[u32] {
        &self.gen_orders
    }

    /// Fills `perm` on the elements of level `level` from `images[..=level]`
    /// and checks the new edges and injectivity. Levels below must already
    /// be filled, with their image values recorded in `scratch`.
    pub(crate) fn extend_level(
        &self,
        group: &Group,
        level: usize,
        images: &[Elem],
        perm: &mut [Elem],
        scratch: &mut ExtendScratch,
    ) -> std::result::Result<(), ExtensionFailure> {
        let lv = &self.levels[level];
        for &(child, parent, gi) in &lv.tree {
            let img = group.mul(perm[parent as usize], images[gi as usize]);
            if !scratch.used.insert(img) {
                return Err(ExtensionFailure::NotSurjective { element: child });
            }
            perm[child as usize] = img;
        }
        for &(u, gi, w) in &lv.checks {
            if group.mul(perm[u as usize], images[gi as usize]) != perm[w as usize] {
                return Err(ExtensionFailure::NotHomomorphism { element: w });
            }
        }
        Ok(())
    }

    /// Starts an extension: resets `scratch` and fixes the identity.
    pub(crate) fn begin(&self, perm: &mut [Elem], scratch: &mut ExtendScratch) {
        scratch.used.clear();
        scratch.used.insert(IDENTITY);
        perm[IDENTITY as usize] = IDENTITY;
    }

    /// Removes the image values of level `level` from `scratch`, so the
    /// level can be refilled with other images.
    pub(crate) fn retract_level(&self, level: usize, perm: &[Elem], scratch: &mut ExtendScratch) {
        // Marks cannot delete single entries; rebuild from the lower levels.
        scratch.used.clear();
        scratch.used.insert(IDENTITY);
        for lv in &self.levels[..level] {
            for &(child, _, _) in &lv.tree {
                scratch.used.insert(perm[child as usize]);
            }
        }
    }

    /// Fills `perm` along the spanning tree only, without any checks. For
    /// rebuilding maps that were validated earlier.
    pub(crate) fn fill_unchecked(&self, group: &Group, images: &[Elem], perm: &mut Vec<Elem>) {
        perm.clear();
        perm.resize(self.order, IDENTITY);
        for lv in &self.levels {
            for &(child, parent, gi) in &lv.tree {
                perm[child as usize] = group.mul(perm[parent as usize], images[gi as usize]);
            }
        }
    }

    /// Like [`Extender::extend_into`], but decides the homomorphism property
    /// by evaluating the group's defining relators at `images` (a map on
    /// generators extends to a homomorphism exactly when every relator
    /// vanishes), then fills `perm` along the spanning tree and checks
    /// injectivity. Needs the designated generators of a normal-form group.
    pub fn extend_by_relators(
        &self,
        group: &Group,
        images: &[Elem],
        perm: &mut Vec<Elem>,
        scratch: &mut ExtendScratch,
    ) -> std::result::Result<(), ExtensionFailure> {
        let (Some(sd), true) = (group.as_semidirect(), self.gens == group.generators()) else {
            return Err(ExtensionFailure::Malformed {
                reason: "relator validation needs the designated generators of a normal-form group".into(),
            });
        };
        self.check_shape(images)?;
        for (ri, word) in sd.relators().iter().enumerate() {
            let value = word
                .iter()
                .fold(IDENTITY, |acc, &(g, e)| group.mul(acc, group.pow(images[g], e)));
            if value != IDENTITY {
                return Err(ExtensionFailure::Relator { relator: ri, value });
            }
        }
        let factors: Vec<_> = images.iter().map(|&y| sd.right_factor(y)).collect();
        perm.resize(self.order, IDENTITY);
        self.begin(perm, scratch);
        for lv in &self.levels {
            for &(child, parent, gi) in &lv.tree {
                let img = sd.mul_by(perm[parent as usize], &factors[gi as usize]);
                if !scratch.used.insert(img) {
                    return Err(ExtensionFailure::NotSurjective { element: child });
                }
                perm[child as usize] = img;
            }
        }
        Ok(())
    }

    fn check_shape(&self, images: &[Elem]) -> std::result::Result<(), ExtensionFailure> {
        if images.len() != self.gens.len() {
            return Err(ExtensionFailure::Malformed {
                reason: format!("{} images for {} generators", images.len(), self.gens.len()),
            });
        }
        if let Some(&bad) = images.iter().find(|&&g| g as usize >= self.order) {
            return Err(ExtensionFailure::Malformed {
                reason: format!("image #{bad} out of range"),
            });
        }
        if self.reach() != self.order {
            return Err(ExtensionFailure::NotGenerating {
                reached: self.reach(),
                order: self.order,
            });
        }
        Ok(())
    }

    /// Extends `images` to a full permutation in `perm`. On success `perm`
    /// is an automorphism of `group`.
    pub fn extend_into(
        &self,
        group: &Group,
        images: &[Elem],
        perm: &mut Vec<Elem>,
        scratch: &mut ExtendScratch,
    ) -> std::result::Result<(), ExtensionFailure> {
        self.check_shape(images)?;
        for (i, (&img, &ord)) in images.iter().zip(&self.gen_orders).enumerate() {
            let found = group.element_order(img);
            if found != ord {
                return Err(ExtensionFailure::OrderMismatch {
                    generator: i,
                    expected: ord,
                    found,
                });
            }
        }
        perm.resize(self.order, IDENTITY);
        self.begin(perm, scratch);
        for level in 0..self.levels.len() {
            self.extend_level(group, level, images, perm, scratch)?;
        }
        Ok(())
    }
}

/// Extends a generator map to a validated automorphism. The map's
/// generators need not be the designated ones, but must generate the group.
pub fn extend_generator_map(group: &Group, map: &GeneratorMap) -> std::result::Result<Automorphism, ExtensionFailure> {
    if map.generators.len() != map.images.len() {
        return Err(ExtensionFailure::Malformed {
            reason: "generator and image lists differ in length".into(),
        });
    }
    let extender =
        Extender::new(group, &map.generators).map_err(|e| ExtensionFailure::Malformed { reason: e.to_string() })?;
    let mut perm = Vec::new();
    let mut scratch = ExtendScratch::new(group.order());
    extender.extend_into(group, &map.images, &mut perm, &mut scratch)?;
    let gen_images = group.generators().iter().map(|&g| perm[g as usize]).collect();
    Ok(Automorphism::from_parts(perm, gen_images, Provenance::Composite))
}

/// Validates images of the designated generators.
pub fn from_generator_images(
    group: &Group,
    images: &[Elem],
    provenance: Provenance,
) -> std::result::Result<Automorphism, ExtensionFailure> {
    let map = GeneratorMap::on_generators(group, images.to_vec());
    Ok(extend_generator_map(group, &map)?.with_provenance(provenance))
}

/// `h ↦ g⁻¹ h g`.
pub fn inner(group: &Group, g: Elem) -> Automorphism {
    let perm: Vec<Elem> = group.elements().map(|h| group.conj(h, g)).collect();
    let gen_images = group.generators().iter().map(|&h| perm[h as usize]).collect();
    Automorphism::from_parts(perm, gen_images, Provenance::Inner(g))
}

/// Checks the homomorphism property on every pair, for tests and small
/// groups.
pub fn is_homomorphism_exhaustive(group: &Group, phi: &Automorphism) -> bool {
    group.elements().all(|g| {
        group
            .elements()
            .all(|h| phi.apply(group.mul(g, h)) == group.mul(phi.apply(g), phi.apply(h)))
    })
}

/// `g⁻¹ φ(g) ∈ Z(G)` for every `g`.
pub fn is_central_automorphism(group: &Group, phi: &Automorphism) -> Result<bool> {
    phi.check_group(group)?;
    let z = center(group);
    Ok(group
        .elements()
        .all(|g| z.contains(group.mul(group.inv(g), phi.apply(g)))))
}

/// `φ(z) = z` for every central `z`.
pub fn fixes_center_pointwise(group: &Group, phi: &Automorphism) -> Result<bool> {
    phi.check_group(group)?;
    Ok(center(group).members().iter().all(|&z| phi.apply(z) == z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build, GroupSpec};

    fn entry(spec: &str) -> crate::constructions::CatalogEntry {
        build(&spec.parse::<GroupSpec>().unwrap()).unwrap()
    }

    #[test]
    fn relator_validation_agrees_with_edge_checks() {
        use rand::{Rng, SeedableRng};
        for spec in [
            "theorem_a:n=2,p=3",
            "two_group:n=3",
            "dihedral:16",
            "modular:3",
            "abelian:9,3",
        ] {
            let g = entry(spec).group;
            let ext = Extender::new(&g, g.generators()).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
            let (mut p1, mut p2) = (Vec::new(), Vec::new());
            let mut s1 = ExtendScratch::new(g.order());
            let mut s2 = ExtendScratch::new(g.order());
            let orders = g.element_orders();
            let mut accepted = 0;
            for _ in 0..3000 {
                // same-order images, so most rejections come from relations
                let images: Vec<Elem> = g
                    .generators()
                    .iter()
                    .map(|&y| loop {
                        let c = rng.gen_range(0..g.order() as Elem);
                        if orders[c as usize] == orders[y as usize] {
                            break c;
                        }
                    })
                    .collect();
                let r1 = ext.extend_into(&g, &images, &mut p1, &mut s1).is_ok();
                let r2 = ext.extend_by_relators(&g, &images, &mut p2, &mut s2).is_ok();
                assert_eq!(r1, r2, "{spec} {images:?}");
                if r1 {
                    assert_eq!(p1, p2);
                    accepted += 1;
                }
            }
            assert!(accepted > 0, "{spec}");
        }
    }

    #[test]
    fn identity_map_extends_to_identity() {
        let e = entry("theorem_a:n=2,p=3");
        let map = GeneratorMap::on_generators(&e.group, e.group.generators().to_vec());
        let phi = extend_generator_map(&e.group, &map).unwrap();
        assert!(phi.is_identity());
    }

    #[test]
    fn q8_map_extends() {
        let e = entry("q8");
        let (i, k) = (e.named("i").unwrap(), e.named("k").unwrap());
        let phi = from_generator_images(&e.group, &[i, k], Provenance::Composite).unwrap();
        assert!(is_homomorphism_exhaustive(&e.group, &phi));
        assert!(fixes_center_pointwise(&e.group, &phi).unwrap());
    }

    #[test]
    fn order_mismatch_is_not_a_homomorphism() {
        let e = entry("sym:3");
        let t = e.named("t").unwrap();
        let err = from_generator_images(&e.group, &[t, t], Provenance::Composite).unwrap_err();
        assert_eq!(err.kind(), "not_homomorphism");
    }

    #[test]
    fn non_generating_and_non_injective_maps_fail() {
        let e = entry("abelian:9,9");
        let g = &e.group;
        let a = e.named("a").unwrap();
        let map = GeneratorMap {
            generators: vec![a],
            images: vec![a],
        };
        assert_eq!(extend_generator_map(g, &map).unwrap_err().kind(), "not_generating");
        let err = from_generator_images(g, &[a, a], Provenance::Composite).unwrap_err();
        assert_eq!(err.kind(), "not_surjective");
    }

    #[test]
    fn inner_automorphisms_compose() {
        let e = entry("sym:3");
        let g = &e.group;
        let c = g.parse_element("(123)").unwrap();
        let t = g.parse_element("(12)").unwrap();
        assert_eq!(g.label(inner(g, c).apply(t)), "(23)");
        for u in g.elements() {
            for v in g.elements() {
                let lhs = inner(g, u).then(&inner(g, v));
                assert_eq!(lhs.perm(), inner(g, g.mul(u, v)).perm());
            }
        }
        let z = entry("q8");
        let m1 = z.named("-1").unwrap();
        assert!(inner(&z.group, m1).is_identity());
    }

    #[test]
    fn inner_automorphisms_of_class_two_are_central() {
        let e = entry("heisenberg:3");
        for g in e.group.elements() {
            assert!(is_central_automorphism(&e.group, &inner(&e.group, g)).unwrap());
        }
    }

    #[test]
    fn inverse_undoes() {
        let e = entry("q8");
        let (i, k) = (e.named("i").unwrap(), e.named("k").unwrap());
        let phi = from_generator_images(&e.group, &[i, k], Provenance::Composite).unwrap();
        assert!(phi.then(&phi.inverse(&e.group)).is_identity());
    }
}
