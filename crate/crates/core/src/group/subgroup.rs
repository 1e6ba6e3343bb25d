//! Subgroup machinery: closures, subgroup tests, center, centralizers and
//! the lower central series.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::semidirect::RightFactor;
use crate::group::{Elem, Group, IDENTITY};
use crate::util::Marks;

/// Multiplications a single closure may spend before giving up.
pub const DEFAULT_CLOSURE_BUDGET: u64 = 1 << 20;

/// A subgroup of a parent group, as a sorted index set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupSet {
    parent_order: usize,
    members: Vec<Elem>,
}

impl SubgroupSet {
    /// Wraps a set already known to be closed. Sorts and deduplicates.
    pub(crate) fn from_closed(parent_order: usize, mut members: Vec<Elem>) -> Self {
        members.sort_unstable();
        members.dedup();
        debug_assert!(parent_order % members.len() == 0, "Lagrange violated");
        SubgroupSet { parent_order, members }
    }

    pub fn whole(group: &Group) -> Self {
        SubgroupSet {
            parent_order: group.order(),
            members: group.elements().collect(),
        }
    }

    pub fn trivial(group: &Group) -> Self {
        SubgroupSet {
            parent_order: group.order(),
            members: vec![IDENTITY],
        }
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent_order
    }
}

/// Outcome of [`is_subgroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubsetTest {
    Subgroup,
    /// `left * right` lies outside the set although both factors are in it.
    NotSubgroup {
        left: Elem,
        right: Elem,
    },
}

impl SubsetTest {
    pub fn is_subgroup(&self) -> bool {
        matches!(self, SubsetTest::Subgroup)
    }

    /// The escaping product, when not a subgroup.
    pub fn witness(&self) -> Option<(Elem, Elem)> {
        match *self {
            SubsetTest::Subgroup => None,
            SubsetTest::NotSubgroup { left, right } => Some((left, right)),
        }
    }
}

/// Reusable scratch space for closure computations over one group.
pub(crate) struct ClosureScratch {
    pub(crate) inside: Marks,
    pub(crate) target: Marks,
    pub(crate) members: Vec<Elem>,
    gens: Vec<Elem>,
    /// Right multipliers for `gens`, normal-form groups only.
    factors: Vec<RightFactor>,
}

impl ClosureScratch {
    pub(crate) fn new(order: usize) -> Self {
        ClosureScratch {
            inside: Marks::new(order),
            target: Marks::new(order),
            members: Vec::new(),
            gens: Vec::new(),
            factors: Vec::new(),
        }
    }

    /// Closes `seeds` under multiplication. Each seed not yet reached becomes
    /// a generator; old members are multiplied by the new generator only and
    /// new members by every generator, which keeps the cost near
    /// `|closure| * #generators`.
    ///
    /// With `restrict_to_target`, the first product leaving the `target`
    /// marks aborts and is returned as a witness pair.
    pub(crate) fn close(
        &mut self,
        group: &Group,
        seeds: impl IntoIterator<Item = Elem>,
        restrict_to_target: bool,
        budget: u64,
    ) -> Result<Option<(Elem, Elem)>> {
        self.inside.clear();
        self.members.clear();
        self.gens.clear();
        self.factors.clear();
        let sd = group.as_semidirect();
        self.inside.insert(IDENTITY);
        self.members.push(IDENTITY);
        let mut spent = 0u64;
        for s in seeds {
            if self.inside.contains(s) {
                continue;
            }
            self.gens.push(s);
            if let Some(sd) = sd {
                self.factors.push(sd.right_factor(s));
            }
            let old_len = self.members.len();
            let mut head = 0;
            while head < self.members.len() {
                let u = self.members[head];
                let first = if head < old_len { self.gens.len() - 1 } else { 0 };
                for gi in first..self.gens.len() {
                    let g = self.gens[gi];
                    let w = match sd {
                        Some(sd) => sd.mul_by(u, &self.factors[gi]),
                        None => group.mul(u, g),
                    };
                    spent += 1;
                    if spent > budget {
                        return Err(Error::Budget {
                            what: "subgroup closure",
                            budget,
                        });
                    }
                    if restrict_to_target && !self.target.contains(w) {
                        return Ok(Some((u, g)));
                    }
                    if self.inside.insert(w) {
                        self.members.push(w);
                    }
                }
                head += 1;
            }
        }
        Ok(None)
    }

    /// Subgroup test for the set currently held in `target` (given also as a
    /// list). The identity need not be in the set; if it is missing, some
    /// power of a member escapes and is reported.
    pub(crate) fn test_subset(&mut self, group: &Group, set: &[Elem]) -> SubsetTest {
        // seeds are members of the target, so the closure stays inside it
        // until a product escapes
        match self.close(group, set.iter().copied(), true, u64::MAX) {
            Ok(Some((left, right))) => SubsetTest::NotSubgroup { left, right },
            Ok(None) => {
                if self.target.contains(IDENTITY) {
                    SubsetTest::Subgroup
                } else {
                    // unreachable for nonempty sets: the closure passes
                    // through the identity via some product first
                    let s = set[0];
                    SubsetTest::NotSubgroup {
                        left: group.pow(s, group.element_order(s) as i64 - 1),
                        right: s,
                    }
                }
            }
            Err(_) => unreachable!("unbounded budget"),
        }
    }
}

/// The subgroup generated by `seeds`, with the default product budget.
pub fn closure(group: &Group, seeds: &[Elem]) -> Result<SubgroupSet> {
    closure_with_budget(group, seeds, DEFAULT_CLOSURE_BUDGET)
}

pub fn closure_with_budget(group: &Group, seeds: &[Elem], budget: u64) -> Result<SubgroupSet> {
    for &s in seeds {
        group.check(s)?;
    }
    let mut scratch = ClosureScratch::new(group.order());
    scratch.close(group, seeds.iter().copied(), false, budget)?;
    Ok(SubgroupSet::from_closed(group.order(), scratch.members))
}

/// Whether `set` is a subgroup; when it is not, returns a pair of members
/// whose product leaves the set.
pub fn is_subgroup(group: &Group, set: &[Elem]) -> Result<SubsetTest> {
    if set.is_empty() {
        return Err(Error::param("subgroup test on an empty set"));
    }
    let mut scratch = ClosureScratch::new(group.order());
    for &s in set {
        group.check(s)?;
        scratch.target.insert(s);
    }
    Ok(scratch.test_subset(group, set))
}

/// Normality under conjugation by the designated generators.
pub fn is_normal(group: &Group, sub: &SubgroupSet) -> bool {
    sub.members()
        .iter()
        .all(|&u| group.generators().iter().all(|&g| sub.contains(group.conj(u, g))))
}

/// Smallest subgroup containing `seeds` that is normalized by `conjugators`.
pub fn normal_closure(group: &Group, seeds: &[Elem], conjugators: &[Elem]) -> Result<SubgroupSet> {
    let mut gens: Vec<Elem> = seeds.to_vec();
    loop {
        let sub = closure(group, &gens)?;
        let missing: Vec<Elem> = gens
            .iter()
            .flat_map(|&u| conjugators.iter().map(move |&y| (u, y)))
            .map(|(u, y)| group.conj(u, y))
            .filter(|c| !sub.contains(*c))
            .collect();
        if missing.is_empty() {
            return Ok(sub);
        }
        gens.extend(missing);
    }
}

/// Elements commuting with every generator.
pub fn center(group: &Group) -> SubgroupSet {
    let gens = group.generators();
    let members = group
        .elements()
        .filter(|&g| gens.iter().all(|&y| group.mul(g, y) == group.mul(y, g)))
        .collect();
    SubgroupSet::from_closed(group.order(), members)
}

/// Pointwise centralizer of `set`.
pub fn centralizer(group: &Group, set: &[Elem]) -> SubgroupSet {
    let members = group
        .elements()
        .filter(|&g| set.iter().all(|&y| group.mul(g, y) == group.mul(y, g)))
        .collect();
    SubgroupSet::from_closed(group.order(), members)
}

/// `[U, V]`: the subgroup generated by all commutators `[u, v]`.
pub fn commutator_subgroup(group: &Group, u: &[Elem], v: &[Elem]) -> Result<SubgroupSet> {
    let mut seen = Marks::new(group.order());
    let mut comms = Vec::new();
    for &x in u {
        for &y in v {
            let c = group.commutator(x, y);
            if seen.insert(c) {
                comms.push(c);
            }
        }
    }
    closure_with_budget(group, &comms, u64::MAX)
}

pub fn derived_subgroup(group: &Group) -> Result<SubgroupSet> {
    let all: Vec<Elem> = group.elements().collect();
    commutator_subgroup(group, &all, &all)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent,
}

/// `γ₁ = G`, `γᵢ₊₁ = [γᵢ, G]`, until the series stabilizes.
pub fn lower_central_series(group: &Group) -> Result<Vec<SubgroupSet>> {
    let all: Vec<Elem> = group.elements().collect();
    let mut series = vec![SubgroupSet::whole(group)];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let next = commutator_subgroup(group, last.members(), &all)?;
        if next == *last {
            break;
        }
        series.push(next);
    }
    Ok(series)
}

pub fn nilpotency_class(group: &Group) -> Result<Nilpotency> {
    let series = lower_central_series(group)?;
    Ok(if series.last().unwrap().is_trivial() {
        Nilpotency::Class(series.len() - 1)
    } else {
        Nilpotency::NotNilpotent
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build, GroupSpec};

    fn entry(spec: &str) -> Group {
        build(&spec.parse::<GroupSpec>().unwrap()).unwrap().group
    }

    #[test]
    fn closure_of_identity_is_trivial() {
        let g = entry("sym:3");
        assert!(closure(&g, &[0]).unwrap().is_trivial());
    }

    #[test]
    fn closure_of_three_cycle_in_s3() {
        let g = entry("sym:3");
        let c = g.parse_element("(123)").unwrap();
        let sub = closure(&g, &[c]).unwrap();
        let mut labels = g.labels(sub.members());
        labels.sort();
        assert_eq!(labels, vec!["(123)", "(132)", "1"]);
    }

    #[test]
    fn derived_subgroup_of_g23() {
        let g = entry("theorem_a:n=2,p=3");
        let a3 = g.parse_element("a^3").unwrap();
        let b3 = g.parse_element("b^3").unwrap();
        let sub = closure(&g, &[a3, b3]).unwrap();
        assert_eq!(sub.len(), 9);
        assert_eq!(derived_subgroup(&g).unwrap(), sub);
    }

    #[test]
    fn subset_witnesses() {
        let s3 = entry("sym:3");
        let c = s3.parse_element("(132)").unwrap();
        let t = is_subgroup(&s3, &[0, c]).unwrap();
        assert_eq!(t, SubsetTest::NotSubgroup { left: c, right: c });
        let all: Vec<Elem> = s3.elements().collect();
        assert!(is_subgroup(&s3, &all).unwrap().is_subgroup());

        let q8 = entry("q8");
        let mi = q8.parse_element("-i").unwrap();
        match is_subgroup(&q8, &[0, mi]).unwrap() {
            SubsetTest::NotSubgroup { left, right } => {
                assert_eq!((left, right), (mi, mi));
                assert_eq!(q8.label(q8.mul(left, right)), "-1");
            }
            SubsetTest::Subgroup => panic!("{{1, -i}} is not a subgroup"),
        }
        assert!(is_subgroup(&q8, &[]).is_err());
    }

    #[test]
    fn missing_identity_is_detected() {
        let q8 = entry("q8");
        let i = q8.parse_element("i").unwrap();
        let mi = q8.parse_element("-i").unwrap();
        let m1 = q8.parse_element("-1").unwrap();
        assert!(!is_subgroup(&q8, &[i, mi, m1]).unwrap().is_subgroup());
    }

    #[test]
    fn centers() {
        let q8 = entry("q8");
        let mut z = q8.labels(center(&q8).members());
        z.sort();
        assert_eq!(z, vec!["-1", "1"]);

        let g = entry("theorem_a:n=2,p=3");
        let z = center(&g);
        assert_eq!(z.len(), 9);
        let sd = g.as_semidirect().unwrap();
        for &c in z.members() {
            assert!(sd.in_a(c));
            assert_eq!(g.pow(c, 3), 0);
        }

        let ab = entry("abelian:9,9");
        assert!(center(&ab).is_whole());
    }

    #[test]
    fn nilpotency_classes() {
        assert_eq!(nilpotency_class(&entry("abelian:9,9")).unwrap(), Nilpotency::Class(1));
        let g = entry("theorem_a:n=2,p=3");
        let series = lower_central_series(&g).unwrap();
        assert_eq!(series.iter().map(|s| s.len()).collect::<Vec<_>>(), vec![243, 9, 1]);
        assert_eq!(nilpotency_class(&g).unwrap(), Nilpotency::Class(2));
        assert_eq!(nilpotency_class(&entry("sym:3")).unwrap(), Nilpotency::NotNilpotent);
        assert_eq!(nilpotency_class(&entry("sym:1")).unwrap(), Nilpotency::Class(0));
    }

    #[test]
    fn normal_closure_in_s3() {
        let s3 = entry("sym:3");
        let t = s3.parse_element("(12)").unwrap();
        let sub = normal_closure(&s3, &[t], s3.generators()).unwrap();
        assert!(sub.is_whole());
        assert!(!is_normal(&s3, &closure(&s3, &[t]).unwrap()));
    }

    #[test]
    fn closure_budget_is_enforced() {
        let g = entry("theorem_a:n=2,p=3");
        let err = closure_with_budget(&g, g.generators(), 10);
        assert!(matches!(err, Err(Error::Budget { .. })));
    }
}
