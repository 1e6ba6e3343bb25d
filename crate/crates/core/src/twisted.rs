//! Twisted conjugacy: displacement sets, twisted classes, fixed subgroups.
//!
//! For an automorphism `φ`, `x` and `y` are `φ`-conjugate when
//! `y = z⁻¹ x φ(z)` for some `z`. The class of the identity is the
//! displacement set `[G, φ] = {g⁻¹ φ(g) : g ∈ G}`, and
//! `|[G, φ]| · |C_G(φ)| = |G|` where `C_G(φ)` is the fixed subgroup.

use serde::Serialize;

use crate::automorphisms::Automorphism;
use crate::error::{Error, Result};
use crate::group::subgroup::ClosureScratch;
use crate::group::{closure, is_subgroup, Elem, Group, SubgroupSet, SubsetTest, IDENTITY};
use crate::util::Marks;

/// `[G, φ]` with its subgroup and normality flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplacementSet {
    members: Vec<Elem>,
    test: SubsetTest,
    /// Only computed for subgroups.
    normal: Option<bool>,
}

impl DisplacementSet {
    /// Sorted members.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subgroup(&self) -> bool {
        self.test.is_subgroup()
    }

    pub fn subset_test(&self) -> SubsetTest {
        self.test
    }

    /// Members whose product leaves the set, when it is not a subgroup.
    pub fn witness(&self) -> Option<(Elem, Elem)> {
        match self.test {
            SubsetTest::Subgroup => None,
            SubsetTest::NotSubgroup { left, right } => Some((left, right)),
        }
    }

    pub fn is_normal(&self) -> Option<bool> {
        self.normal
    }
}

/// Reusable buffers for repeated displacement computations over one group.
pub struct TwistedScratch {
    closure: ClosureScratch,
    closure_b: ClosureScratch,
    /// `values[g] = g⁻¹ φ(g)` for the last permutation.
    values: Vec<Elem>,
    members: Vec<Elem>,
    aux: Marks,
    aux_list: Vec<Elem>,
}

/// Summary of one displacement computation from [`TwistedScratch`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DisplacementSummary {
    pub len: usize,
    pub test: SubsetTest,
    pub normal: Option<bool>,
}

/// Outcome of [`TwistedScratch::bv_decomposition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BvSummary {
    pub b_len: usize,
    pub b_is_subgroup: bool,
    pub v_len: usize,
    /// Order of `[x, φ] = x⁻¹ φ(x)`.
    pub v_generator_order: u32,
    /// `B · V` equals the displacement set.
    pub matches: bool,
}

/// Sorted members of `marks`, without a data-dependent branch per element.
fn collect_marked(marks: &Marks, out: &mut Vec<Elem>) {
    let n = marks.len();
    out.clear();
    out.resize(n, IDENTITY);
    let mut len = 0;
    for g in 0..n as Elem {
        out[len] = g;
        len += marks.contains(g) as usize;
    }
    out.truncate(len);
}

impl TwistedScratch {
    pub fn new(order: usize) -> Self {
        TwistedScratch {
            closure: ClosureScratch::new(order),
            closure_b: ClosureScratch::new(order),
            values: vec![IDENTITY; order],
            members: Vec::new(),
            aux: Marks::new(order),
            aux_list: Vec::new(),
        }
    }

    /// Computes `[G, φ]` for the permutation `perm`; members are available
    /// from [`TwistedScratch::members`] until the next call.
    pub fn displacement(&mut self, group: &Group, perm: &[Elem], with_normality: bool) -> DisplacementSummary {
        let target = &mut self.closure.target;
        target.clear();
        let inverses = group.inverses();
        let values = &mut self.values;
        match group.as_semidirect() {
            Some(sd) => {
                for ((v, &gi), &pg) in values.iter_mut().zip(inverses).zip(perm) {
                    *v = sd.mul(gi, pg);
                    target.set(*v);
                }
            }
            None => {
                for ((v, &gi), &pg) in values.iter_mut().zip(inverses).zip(perm) {
                    *v = group.mul(gi, pg);
                    target.set(*v);
                }
            }
        }
        collect_marked(&self.closure.target, &mut self.members);
        let test = self.closure.test_subset(group, &self.members);
        let normal = (with_normality && test.is_subgroup()).then(|| {
            let target = &self.closure.target;
            self.members
                .iter()
                .all(|&d| group.generators().iter().all(|&y| target.contains(group.conj(d, y))))
        });
        DisplacementSummary {
            len: self.members.len(),
            test,
            normal,
        }
    }

    /// Members of the last displacement set, sorted.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    /// Whether `g` lies in the last displacement set.
    pub fn in_displacement(&self, g: Elem) -> bool {
        self.closure.target.contains(g)
    }

    /// `g⁻¹ φ(g)` for the last permutation.
    pub fn value(&self, g: Elem) -> Elem {
        self.values[g as usize]
    }

    /// Decomposes the last displacement set as `B · V` with
    /// `B = {c⁻¹ φ(c) : c ∈ A}` and `V = <x⁻¹ φ(x)>`, for a normal-form
    /// group `A ⋊ <x>`. Call right after [`TwistedScratch::displacement`]
    /// with the same permutation.
    pub fn bv_decomposition(&mut self, group: &Group, a_elems: &[Elem], x: Elem) -> BvSummary {
        // B
        self.closure_b.target.clear();
        self.aux_list.clear();
        for &c in a_elems {
            let b = self.values[c as usize];
            if self.closure_b.target.insert(b) {
                self.aux_list.push(b);
            }
        }
        let b_list = std::mem::take(&mut self.aux_list);
        let b_is_subgroup = self.closure_b.test_subset(group, &b_list).is_subgroup();
        let b_len = b_list.len();
        // V = <v>
        let v = self.values[x as usize];
        let v_generator_order = group.element_order(v);
        // B·V against the displacement set
        self.aux.clear();
        let mut product_len = 0usize;
        let mut inside = true;
        let right_v = group.right_multiplier(v);
        for &b in &b_list {
            let mut e = b;
            for _ in 0..v_generator_order {
                if self.aux.insert(e) {
                    product_len += 1;
                    inside &= self.closure.target.contains(e);
                }
                e = right_v.apply(e);
            }
        }
        self.aux_list = b_list;
        BvSummary {
            b_len,
            b_is_subgroup,
            v_len: v_generator_order as usize,
            v_generator_order,
            matches: inside && product_len == self.members.len(),
        }
    }
}

/// `[G, φ] = {g⁻¹ φ(g)}`, with the subgroup test and, for subgroups,
/// normality.
pub fn displacement_set(group: &Group, phi: &Automorphism) -> Result<DisplacementSet> {
    phi.check_group(group)?;
    let mut s = TwistedScratch::new(group.order());
    let summary = s.displacement(group, phi.perm(), true);
    Ok(DisplacementSet {
        members: s.members,
        test: summary.test,
        normal: summary.normal,
    })
}

/// The `φ`-conjugacy classes of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedPartition {
    /// Sorted classes, ordered by least member.
    pub classes: Vec<Vec<Elem>>,
    #[serde(skip)]
    class_of: Vec<u32>,
}

impl TwistedPartition {
    pub fn reidemeister_number(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, g: Elem) -> &[Elem] {
        &self.classes[self.class_of[g as usize] as usize]
    }

    pub fn class_index(&self, g: Elem) -> usize {
        self.class_of[g as usize] as usize
    }
}

/// Orbits of the action `y · z = z⁻¹ y φ(z)`, found by closing each
/// unassigned element under the generators' actions.
pub fn twisted_partition(group: &Group, phi: &Automorphism) -> Result<TwistedPartition> {
    phi.check_group(group)?;
    let n = group.order();
    let mut class_of = vec![u32::MAX; n];
    let mut classes = Vec::new();
    let acting: Vec<(Elem, Elem)> = group
        .generators()
        .iter()
        .map(|&z| (group.inv(z), phi.apply(z)))
        .collect();
    for start in group.elements() {
        if class_of[start as usize] != u32::MAX {
            continue;
        }
        let id = classes.len() as u32;
        class_of[start as usize] = id;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let y = orbit[head];
            for &(zi, fz) in &acting {
                let w = group.mul(group.mul(zi, y), fz);
                if class_of[w as usize] == u32::MAX {
                    class_of[w as usize] = id;
                    orbit.push(w);
                }
            }
            head += 1;
        }
        orbit.sort_unstable();
        classes.push(orbit);
    }
    Ok(TwistedPartition { classes, class_of })
}

/// `C_G(φ) = {g : φ(g) = g}`.
pub fn fixed_subgroup(group: &Group, phi: &Automorphism) -> Result<SubgroupSet> {
    phi.check_group(group)?;
    let fixed: Vec<Elem> = group.elements().filter(|&g| phi.apply(g) == g).collect();
    match is_subgroup(group, &fixed)? {
        SubsetTest::Subgroup => Ok(SubgroupSet::from_closed(group.order(), fixed)),
        SubsetTest::NotSubgroup { .. } => Err(Error::Precondition(
            "fixed points are not closed; the map is not a homomorphism".into(),
        )),
    }
}

/// Outcome of [`is_congruence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub holds: bool,
    /// An element whose class differs from `x · [G, φ]`.
    pub witness: Option<Elem>,
}

/// Whether every `φ`-class is the coset `x · [G, φ]` of each of its members.
pub fn is_congruence(group: &Group, phi: &Automorphism) -> Result<Congruence> {
    let partition = twisted_partition(group, phi)?;
    let identity_class = partition.class_of(IDENTITY).to_vec();
    Ok(congruence_from(group, &partition, &identity_class))
}

pub(crate) fn congruence_from(group: &Group, partition: &TwistedPartition, displacement: &[Elem]) -> Congruence {
    for x in group.elements() {
        let cls = partition.class_index(x);
        let fits = partition.classes[cls].len() == displacement.len()
            && displacement
                .iter()
                .all(|&d| partition.class_index(group.mul(x, d)) == cls);
        if !fits {
            return Congruence {
                holds: false,
                witness: Some(x),
            };
        }
    }
    Congruence {
        holds: true,
        witness: None,
    }
}

/// The decomposition `[G, φ] = B · V` for a normal-form group `A ⋊ <x>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BvDecomposition {
    /// `{c⁻¹ φ(c) : c ∈ A}`, sorted.
    pub b: Vec<Elem>,
    pub b_is_subgroup: bool,
    /// `<x⁻¹ φ(x)>`.
    pub v: SubgroupSet,
    pub v_generator: Elem,
    /// `B · V`, sorted.
    pub product: Vec<Elem>,
    pub matches: bool,
}

pub fn bv_decomposition(group: &Group, phi: &Automorphism) -> Result<BvDecomposition> {
    phi.check_group(group)?;
    let sd = group
        .as_semidirect()
        .ok_or_else(|| Error::Precondition("B·V decomposition needs a normal-form group".into()))?;
    let d = sd.descriptor();
    if d.m < 2 {
        return Err(Error::Precondition("the group has no x part".into()));
    }
    let x = sd.index(0, 0, 1);
    let mut b: Vec<Elem> = group
        .elements()
        .filter(|&c| sd.in_a(c))
        .map(|c| group.mul(group.inv(c), phi.apply(c)))
        .collect();
    b.sort_unstable();
    b.dedup();
    let b_is_subgroup = is_subgroup(group, &b)?.is_subgroup();
    let v_generator = group.mul(group.inv(x), phi.apply(x));
    let v = closure(group, &[v_generator])?;
    let mut product: Vec<Elem> = b
        .iter()
        .flat_map(|&u| v.members().iter().map(move |&w| group.mul(u, w)))
        .collect();
    product.sort_unstable();
    product.dedup();
    let displacement = displacement_set(group, phi)?;
    let matches = product == displacement.members();
    Ok(BvDecomposition {
        b,
        b_is_subgroup,
        v,
        v_generator,
        product,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::{inner, named_automorphism, NamedLabel};
    use crate::constructions::{build, CatalogEntry};

    fn entry(spec: &str) -> CatalogEntry {
        build(&spec.parse().unwrap()).unwrap()
    }

    #[test]
    fn identity_displacement_is_trivial() {
        let e = entry("theorem_a:n=2,p=3");
        let d = displacement_set(&e.group, &Automorphism::identity(&e.group)).unwrap();
        assert_eq!(d.members(), &[IDENTITY]);
        assert!(d.is_subgroup());
        assert_eq!(d.is_normal(), Some(true));
    }

    #[test]
    fn s3_inner_displacement() {
        let e = entry("sym:3");
        let g = &e.group;
        let phi = inner(g, g.parse_element("(123)").unwrap());
        let d = displacement_set(g, &phi).unwrap();
        assert_eq!(g.labels(d.members()), ["1", "(132)"]);
        let (l, r) = d.witness().unwrap();
        assert!(!d.contains(g.mul(l, r)));
        assert!(!is_congruence(g, &phi).unwrap().holds);
    }

    #[test]
    fn conjugacy_classes_of_s3() {
        let e = entry("sym:3");
        let p = twisted_partition(&e.group, &Automorphism::identity(&e.group)).unwrap();
        assert_eq!(p.reidemeister_number(), 3);
        assert_eq!(p.classes.iter().map(Vec::len).sum::<usize>(), 6);
    }

    #[test]
    fn q8_displacement_and_fixed_points() {
        let e = entry("q8");
        let phi = named_automorphism(&e, NamedLabel::Q8Phi, None).unwrap();
        let d = displacement_set(&e.group, &phi).unwrap();
        assert_eq!(e.group.labels(d.members()), ["1", "-i"]);
        assert!(!d.is_subgroup());
        let c = fixed_subgroup(&e.group, &phi).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(d.len() * c.len(), 8);
    }

    #[test]
    fn abelian_classes_are_cosets() {
        let e = entry("abelian:9,3");
        let (a, b) = (e.named("a").unwrap(), e.named("b").unwrap());
        let g = &e.group;
        // a ↦ a b, b ↦ b
        let phi = crate::automorphisms::from_generator_images(
            g,
            &[g.mul(a, b), b],
            crate::automorphisms::Provenance::Composite,
        )
        .unwrap();
        assert!(is_congruence(g, &phi).unwrap().holds);
        let p = twisted_partition(g, &phi).unwrap();
        let d = displacement_set(g, &phi).unwrap();
        assert!(p.classes.iter().all(|c| c.len() == d.len()));
    }

    #[test]
    fn bv_matches_on_identity() {
        let e = entry("theorem_a:n=2,p=3");
        let bv = bv_decomposition(&e.group, &Automorphism::identity(&e.group)).unwrap();
        assert_eq!(bv.b, vec![IDENTITY]);
        assert_eq!(bv.v.len(), 1);
        assert!(bv.matches);
    }

    #[test]
    fn scratch_agrees_with_direct_computation() {
        let e = entry("theorem_a:n=2,p=3");
        let g = &e.group;
        let mut s = TwistedScratch::new(g.order());
        for h in [3, 17, 100, 242] {
            let phi = inner(g, h);
            let d = displacement_set(g, &phi).unwrap();
            let summary = s.displacement(g, phi.perm(), true);
            assert_eq!(s.members(), d.members());
            assert_eq!(summary.test, d.subset_test());
        }
    }
}
