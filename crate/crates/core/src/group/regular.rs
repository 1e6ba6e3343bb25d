//! Regularity of finite p-groups.
//!
//! `G` is regular when for all `g, h` the correction term
//! `d = h^(-p) g^(-p) (gh)^p` is a product of p-th powers of elements of
//! `<g, h>'`. The products of p-th powers of a finite group form exactly the
//! subgroup generated by the p-th powers, so membership is tested against
//! that subgroup.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::subgroup::{closure, normal_closure};
use crate::group::{Elem, Group, IDENTITY};
use crate::util::prime_power;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Regularity {
    pub regular: bool,
    /// First violating pair in index order.
    pub witness: Option<(Elem, Elem)>,
    pub pairs_checked: u64,
}

pub fn is_regular_p_group(group: &Group, p: u64) -> Result<Regularity> {
    match prime_power(group.order() as u64) {
        Some((q, _)) if q == p => {}
        _ if group.order() == 1 => {}
        _ => return Err(Error::param(format!("order {} is not a power of {p}", group.order()))),
    }
    let p = p as i64;
    let mut pairs = 0u64;
    for g in group.elements() {
        let g_inv_p = group.pow(g, -p);
        for h in group.elements() {
            pairs += 1;
            let d = group.mul(group.mul(group.pow(h, -p), g_inv_p), group.pow(group.mul(g, h), p));
            if d == IDENTITY {
                continue;
            }
            if !correction_is_pth_power_product(group, g, h, d, p)? {
                return Ok(Regularity {
                    regular: false,
                    witness: Some((g, h)),
                    pairs_checked: pairs,
                });
            }
        }
    }
    Ok(Regularity {
        regular: true,
        witness: None,
        pairs_checked: pairs,
    })
}

fn correction_is_pth_power_product(group: &Group, g: Elem, h: Elem, d: Elem, p: i64) -> Result<bool> {
    // <g,h>' is the normal closure of [g,h] in <g,h>
    let derived = normal_closure(group, &[group.commutator(g, h)], &[g, h])?;
    let powers: Vec<Elem> = derived.members().iter().map(|&u| group.pow(u, p)).collect();
    Ok(closure(group, &powers)?.contains(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build, GroupSpec};

    fn group(spec: &str) -> Group {
        build(&spec.parse::<GroupSpec>().unwrap()).unwrap().group
    }

    #[test]
    fn abelian_groups_are_regular() {
        let r = is_regular_p_group(&group("abelian:9,3"), 3).unwrap();
        assert!(r.regular);
        assert_eq!(r.pairs_checked, 27 * 27);
    }

    #[test]
    fn wrong_prime_is_rejected() {
        assert!(is_regular_p_group(&group("q8"), 3).is_err());
        assert!(is_regular_p_group(&group("sym:3"), 3).is_err());
    }
}
