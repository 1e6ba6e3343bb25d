//! Direct products, quotients and central products.

use crate::error::{Error, Result};
use crate::group::subgroup::{center, is_normal, SubgroupSet};
use crate::group::{CayleyTable, Elem, Group, IDENTITY};
use crate::util::Marks;

/// `H x K`, indexed as `h * |K| + k` and multiplied componentwise.
pub fn direct_product(h: &Group, k: &Group) -> Result<Group> {
    Group::product_of(h, k)
}

/// A quotient `G/N` with the projection from `G`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Group,
    /// `projection[g]` is the coset of `g`.
    pub projection: Vec<Elem>,
}

/// Quotient orders up to this bound get an exhaustive well-definedness check.
const EXHAUSTIVE_CHECK: usize = 512;

/// `G/N` for a normal subgroup `N`. Cosets are represented by their least
/// element and enumerated breadth first from the images of `G`'s generators.
pub fn quotient(group: &Group, normal: &SubgroupSet, name: impl Into<String>) -> Result<Quotient> {
    if normal.parent_order() != group.order() {
        return Err(Error::param("subgroup belongs to a different group"));
    }
    if !is_normal(group, normal) {
        return Err(Error::NotNormal);
    }
    let n = group.order();
    let mut rep = vec![Elem::MAX; n];
    for g in group.elements() {
        if rep[g as usize] == Elem::MAX {
            for &u in normal.members() {
                rep[group.mul(u, g) as usize] = g;
            }
        }
    }
    let mut gens = Vec::new();
    let mut names = Vec::new();
    for (&g, nm) in group.generators().iter().zip(group.generator_names()) {
        let r = rep[g as usize];
        if r != IDENTITY {
            gens.push(r);
            names.push(nm.clone());
        }
    }
    let realized = CayleyTable::generate(IDENTITY, &gens, |&a, &b| rep[group.mul(a, b) as usize])?;
    let mut slot = vec![Elem::MAX; n];
    for (i, &r) in realized.elements.iter().enumerate() {
        slot[r as usize] = i as Elem;
    }
    let projection: Vec<Elem> = rep.iter().map(|&r| slot[r as usize]).collect();
    if projection.contains(&Elem::MAX) {
        return Err(Error::param("generators do not generate the group"));
    }
    let table = realized.table;
    if n <= EXHAUSTIVE_CHECK {
        for g in group.elements() {
            for h in group.elements() {
                let lhs = projection[group.mul(g, h) as usize];
                let rhs = table.get(projection[g as usize], projection[h as usize]);
                if lhs != rhs {
                    return Err(Error::Precondition(format!(
                        "coset multiplication not well defined at ({g}, {h})"
                    )));
                }
            }
        }
    }
    let group = Group::from_table(name, table, realized.generators, names, None)?;
    Ok(Quotient { group, projection })
}

/// `H ∘ K = (H x K) / {(z, θ(z)⁻¹)}`, identifying `<h_central>` with
/// `<k_central>` via `h_central ↦ k_central`.
#[derive(Clone, Debug)]
pub struct CentralProduct {
    pub group: Group,
    pub h: Group,
    pub k: Group,
    pub h_central: Elem,
    pub k_central: Elem,
    /// Projection from `H x K` (pair index `h * |K| + k`).
    pub projection: Vec<Elem>,
}

impl CentralProduct {
    pub fn embed_h(&self, h: Elem) -> Elem {
        self.projection[h as usize * self.k.order()]
    }

    pub fn embed_k(&self, k: Elem) -> Elem {
        self.projection[k as usize]
    }

    pub fn pair(&self, h: Elem, k: Elem) -> Elem {
        self.projection[h as usize * self.k.order() + k as usize]
    }

    /// Image of the identified central subgroup.
    pub fn identified_center(&self) -> Vec<Elem> {
        let mut out = Vec::new();
        let mut z = IDENTITY;
        loop {
            out.push(self.embed_h(z));
            z = self.h.mul(z, self.h_central);
            if z == IDENTITY {
                break;
            }
        }
        out.sort_unstable();
        out
    }

    /// Checks `[H̄, K̄] = 1` and `H̄ ∩ K̄ = Z̄` exactly.
    pub fn check_invariants(&self) -> Result<()> {
        let g = &self.group;
        for h in self.h.elements() {
            let hb = self.embed_h(h);
            for k in self.k.elements() {
                if g.commutator(hb, self.embed_k(k)) != IDENTITY {
                    return Err(Error::Precondition(format!(
                        "embedded factors do not commute at ({h}, {k})"
                    )));
                }
            }
        }
        let mut in_h = Marks::new(g.order());
        for h in self.h.elements() {
            in_h.insert(self.embed_h(h));
        }
        let mut meet: Vec<Elem> = self
            .k
            .elements()
            .map(|k| self.embed_k(k))
            .filter(|&e| in_h.contains(e))
            .collect();
        meet.sort_unstable();
        meet.dedup();
        if meet != self.identified_center() {
            return Err(Error::Precondition(
                "embedded factors meet outside the identified center".into(),
            ));
        }
        Ok(())
    }
}

pub fn central_product(
    h: &Group,
    k: &Group,
    h_central: Elem,
    k_central: Elem,
    name: impl Into<String>,
) -> Result<CentralProduct> {
    h.check(h_central)?;
    k.check(k_central)?;
    if !center(h).contains(h_central) || !center(k).contains(k_central) {
        return Err(Error::Precondition(
            "identified elements must be central in their factors".into(),
        ));
    }
    if h.element_order(h_central) != k.element_order(k_central) {
        return Err(Error::Precondition(
            "identified cyclic subgroups have different orders".into(),
        ));
    }
    let product = direct_product(h, k)?;
    let kn = k.order() as Elem;
    let mut members = Vec::new();
    let (mut zh, mut zk) = (IDENTITY, IDENTITY);
    loop {
        members.push(zh * kn + k.inv(zk));
        zh = h.mul(zh, h_central);
        zk = k.mul(zk, k_central);
        if zh == IDENTITY {
            break;
        }
    }
    let normal = SubgroupSet::from_closed(product.order(), members);
    let q = quotient(&product, &normal, name)?;
    let cp = CentralProduct {
        group: q.group,
        h: h.clone(),
        k: k.clone(),
        h_central,
        k_central,
        projection: q.projection,
    };
    cp.check_invariants()?;
    Ok(cp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build, GroupSpec};
    use crate::group::subgroup::{closure, derived_subgroup};

    fn entry(spec: &str) -> crate::constructions::CatalogEntry {
        build(&spec.parse::<GroupSpec>().unwrap()).unwrap()
    }

    #[test]
    fn product_with_trivial_group_preserves_orders() {
        let g = entry("theorem_a:n=2,p=3").group;
        let one = entry("cyclic:1").group;
        let p = direct_product(&g, &one).unwrap();
        assert_eq!(p.order(), g.order());
        for e in g.elements() {
            assert_eq!(p.element_order(e), g.element_order(e));
        }
    }

    #[test]
    fn quotient_by_non_normal_subgroup_fails() {
        let s3 = entry("sym:3").group;
        let t = s3.parse_element("(12)").unwrap();
        let sub = closure(&s3, &[t]).unwrap();
        assert!(matches!(quotient(&s3, &sub, "bad"), Err(Error::NotNormal)));
    }

    #[test]
    fn abelianization_of_s3() {
        let s3 = entry("sym:3").group;
        let d = derived_subgroup(&s3).unwrap();
        let q = quotient(&s3, &d, "S3/S3'").unwrap();
        assert_eq!(q.group.order(), 2);
        assert!(q.group.is_abelian());
    }

    #[test]
    fn heisenberg_central_square() {
        let h = entry("heisenberg:3");
        let z = h.named("z").unwrap();
        let cp = central_product(&h.group, &h.group, z, z, "H∘H").unwrap();
        assert_eq!(cp.group.order(), 243);
        assert_eq!(center(&cp.group).len(), 3);
        assert_eq!(cp.identified_center().len(), 3);
    }

    #[test]
    fn dihedral_central_square_is_order_32() {
        let d8 = entry("dihedral:8");
        let z = d8.group.parse_element("a^2").unwrap();
        let cp = central_product(&d8.group, &d8.group, z, z, "D8∘D8").unwrap();
        assert_eq!(cp.group.order(), 32);
        assert_eq!(center(&cp.group).len(), 2);
        assert_eq!(derived_subgroup(&cp.group).unwrap().len(), 2);
    }

    #[test]
    fn rejects_non_central_identification() {
        let d8 = entry("dihedral:8");
        let a = d8.group.parse_element("a").unwrap();
        assert!(central_product(&d8.group, &d8.group, a, a, "bad").is_err());
    }
}
