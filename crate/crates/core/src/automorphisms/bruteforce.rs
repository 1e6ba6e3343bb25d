//! Complete automorphism enumeration by depth-first search over generator
//! images.

use std::ops::ControlFlow;

use serde::Serialize;

use super::{Automorphism, ExtendScratch, Extender, Provenance};
use crate::error::{Error, Result};
use crate::group::{Elem, Group, IDENTITY};

/// Default cap on candidate images tried.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BruteForceStats {
    /// Candidate images tried, over all levels.
    pub nodes: u64,
    pub automorphisms: u64,
    /// False when the visitor stopped the search early.
    pub complete: bool,
}

struct Search<'a, F> {
    group: &'a Group,
    extender: Extender,
    candidates: Vec<Vec<Elem>>,
    images: Vec<Elem>,
    perm: Vec<Elem>,
    scratch: ExtendScratch,
    budget: u64,
    stats: BruteForceStats,
    visit: F,
}

impl<F: FnMut(&[Elem], &[Elem]) -> ControlFlow<()>> Search<'_, F> {
    fn descend(&mut self, level: usize) -> Result<ControlFlow<()>> {
        if level == self.candidates.len() {
            self.stats.automorphisms += 1;
            return Ok((self.visit)(&self.images, &self.perm));
        }
        for ci in 0..self.candidates[level].len() {
            self.stats.nodes += 1;
            if self.stats.nodes > self.budget {
                return Err(Error::Budget {
                    what: "automorphism search",
                    budget: self.budget,
                });
            }
            self.images[level] = self.candidates[level][ci];
            let ok = self
                .extender
                .extend_level(self.group, level, &self.images, &mut self.perm, &mut self.scratch)
                .is_ok();
            let flow = if ok {
                self.descend(level + 1)?
            } else {
                ControlFlow::Continue(())
            };
            self.extender.retract_level(level, &self.perm, &mut self.scratch);
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Calls `visit(generator_images, perm)` for every automorphism, in
/// lexicographic order of the designated generators' images. Candidate
/// images are restricted to elements of the same order; partial maps are
/// extended to each prefix subgroup and pruned on the first conflict.
/// `visit` may stop the search by returning `ControlFlow::Break`.
pub fn visit_bruteforce(
    group: &Group,
    budget: u64,
    visit: impl FnMut(&[Elem], &[Elem]) -> ControlFlow<()>,
) -> Result<BruteForceStats> {
    let gens = group.generators();
    let extender = Extender::new(group, gens)?;
    if extender.reach() != group.order() {
        return Err(Error::Precondition(
            "designated generators do not generate the group".into(),
        ));
    }
    let orders = group.element_orders();
    let candidates = extender
        .generator_orders()
        .iter()
        .map(|&o| group.elements().filter(|&g| orders[g as usize] == o).collect())
        .collect();
    let mut search = Search {
        group,
        candidates,
        images: vec![IDENTITY; gens.len()],
        perm: vec![IDENTITY; group.order()],
        scratch: ExtendScratch::new(group.order()),
        extender,
        budget,
        stats: BruteForceStats::default(),
        visit,
    };
    search.extender.begin(&mut search.perm, &mut search.scratch);
    search.stats.complete = search.descend(0)?.is_continue();
    Ok(search.stats)
}

/// The full automorphism group, sorted by permutation. Fails with a budget
/// error instead of returning a partial list.
pub fn enumerate_bruteforce(group: &Group, budget: u64) -> Result<Vec<Automorphism>> {
    let mut out = Vec::new();
    visit_bruteforce(group, budget, |images, perm| {
        out.push(Automorphism::from_parts(
            perm.to_vec(),
            images.to_vec(),
            Provenance::BruteForce,
        ));
        ControlFlow::Continue(())
    })?;
    out.sort_unstable_by(|a, b| a.perm().cmp(b.perm()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::{inner, is_homomorphism_exhaustive};
    use crate::constructions::{build, GroupSpec};
    use crate::group::center;

    fn aut_count(spec: &str) -> usize {
        let g = build(&spec.parse::<GroupSpec>().unwrap()).unwrap().group;
        enumerate_bruteforce(&g, DEFAULT_BUDGET).unwrap().len()
    }

    #[test]
    fn small_automorphism_groups() {
        assert_eq!(aut_count("cyclic:1"), 1);
        assert_eq!(aut_count("cyclic:3"), 2);
        assert_eq!(aut_count("cyclic:9"), 6);
        assert_eq!(aut_count("sym:3"), 6);
        assert_eq!(aut_count("q8"), 24);
        assert_eq!(aut_count("dihedral:8"), 8);
        assert_eq!(aut_count("abelian:3,3"), 48);
    }

    #[test]
    fn s3_automorphisms_are_inner() {
        let g = build(&"sym:3".parse().unwrap()).unwrap().group;
        let auts = enumerate_bruteforce(&g, DEFAULT_BUDGET).unwrap();
        let mut inners: Vec<Vec<Elem>> = g.elements().map(|h| inner(&g, h).perm().to_vec()).collect();
        inners.sort();
        inners.dedup();
        assert_eq!(inners.len(), g.order() / center(&g).len());
        let perms: Vec<Vec<Elem>> = auts.iter().map(|a| a.perm().to_vec()).collect();
        assert_eq!(perms, inners);
        assert!(auts.iter().all(|a| is_homomorphism_exhaustive(&g, a)));
    }

    #[test]
    fn exhausted_budget_is_an_error() {
        let g = build(&"q8".parse().unwrap()).unwrap().group;
        assert!(matches!(enumerate_bruteforce(&g, 5), Err(Error::Budget { .. })));
    }
}
