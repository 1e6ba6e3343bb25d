//! Lifting a factor automorphism through a central product.

use super::{from_generator_images, Automorphism, Provenance};
use crate::error::{Error, Result};
use crate::group::{CentralProduct, Elem, IDENTITY};

/// For `G = H ∘ K` and an automorphism `φ` of `H` fixing the identified
/// central subgroup pointwise, the map `hk ↦ φ(h) k`. The map is assembled
/// over all pairs, checked to be well defined, and then validated from its
/// generator images.
pub fn lift_central_product(cp: &CentralProduct, phi_h: &Automorphism) -> Result<Automorphism> {
    phi_h.check_group(&cp.h)?;
    let mut z = IDENTITY;
    loop {
        if phi_h.apply(z) != z {
            return Err(Error::Precondition(format!(
                "the automorphism moves the identified central element {}",
                cp.h.label(z)
            )));
        }
        z = cp.h.mul(z, cp.h_central);
        if z == IDENTITY {
            break;
        }
    }
    let g = &cp.group;
    let mut perm = vec![Elem::MAX; g.order()];
    for h in cp.h.elements() {
        let hi = phi_h.apply(h);
        for k in cp.k.elements() {
            let src = cp.pair(h, k);
            let img = cp.pair(hi, k);
            let slot = &mut perm[src as usize];
            if *slot == Elem::MAX {
                *slot = img;
            } else if *slot != img {
                return Err(Error::Precondition(format!("lift is not well defined at #{src}")));
            }
        }
    }
    let images: Vec<Elem> = g.generators().iter().map(|&x| perm[x as usize]).collect();
    let lifted = from_generator_images(g, &images, Provenance::Lifted(phi_h.provenance().to_string()))?;
    if lifted.perm() != perm.as_slice() {
        return Err(Error::Precondition(
            "lift disagrees with the extension of its generator images".into(),
        ));
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build, heisenberg};
    use crate::group::central_product;

    #[test]
    fn identity_lifts_to_identity() {
        let h = heisenberg(3).unwrap();
        let z = h.named("z").unwrap();
        let cp = central_product(&h.group, &h.group, z, z, "H∘H").unwrap();
        let id = Automorphism::identity(&h.group);
        assert!(lift_central_product(&cp, &id).unwrap().is_identity());
    }

    #[test]
    fn lift_requires_fixed_center() {
        let e = build(&"heisenberg:3".parse().unwrap()).unwrap();
        let z = e.named("z").unwrap();
        let cp = central_product(&e.group, &e.group, z, z, "H∘H").unwrap();
        let (x, y) = (e.named("x").unwrap(), e.named("y").unwrap());
        // x ↦ y, y ↦ x inverts z
        let swap = from_generator_images(&e.group, &[y, x], Provenance::Composite).unwrap();
        assert!(lift_central_product(&cp, &swap).is_err());
    }
}
