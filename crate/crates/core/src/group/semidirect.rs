//! Metacyclic-style groups `(Z_q1 x Z_q2) ⋊ <x>` where `x` acts on the
//! abelian normal subgroup by a single scalar.
//!
//! Elements are normal-form words `a^i b^j x^k` with `i < q1`, `j < q2`,
//! `k < m`, indexed lexicographically: `index = (i * q2 + j) * m + k`.
//! Conjugation follows `g^h = h⁻¹ g h` and the defining relation is
//! `c^x = c^s` for every `c` in `A = <a> x <b>`. Moving `x^k` past an
//! `A`-element therefore scales it by `s^{-k}`:
//!
//! ```text
//! a^i b^j x^k · a^i' b^j' x^k' = a^(i + σ i') b^(j + σ j') x^(k + k'),   σ = s^(-k)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Elem;
use crate::util::{gcd, inv_mod, lcm, pow_mod};

/// Largest order accepted for a normal-form group. Everything downstream
/// (automorphism permutations, displacement sets) is linear in the order.
pub const SEMIDIRECT_CAP: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemidirectDescriptor {
    /// Order of `a`.
    pub q1: u32,
    /// Order of `b`; 1 when `A` is cyclic.
    pub q2: u32,
    /// Order of `x`.
    pub m: u32,
    /// Action scalar: `c^x = c^s`.
    pub s: u32,
}

impl SemidirectDescriptor {
    pub fn new(q1: u32, q2: u32, m: u32, s: u32) -> Self {
        SemidirectDescriptor { q1, q2, m, s }
    }

    pub fn order(&self) -> u64 {
        self.q1 as u64 * self.q2 as u64 * self.m as u64
    }

    /// Exponent modulus of `A`.
    pub fn a_exponent(&self) -> u64 {
        lcm(self.q1 as u64, self.q2 as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q1 == 0 || self.q2 == 0 || self.m == 0 {
            return Err(Error::param("moduli and the order of x must be positive"));
        }
        let order = self.order();
        if order > SEMIDIRECT_CAP {
            return Err(Error::SizeCap {
                what: "normal-form group",
                size: order as u128,
                cap: SEMIDIRECT_CAP as u128,
            });
        }
        let l = self.a_exponent();
        if l > 1 && gcd(self.s as u64 % l, l) != 1 {
            return Err(Error::param(format!(
                "action scalar {} is not invertible modulo {l}",
                self.s
            )));
        }
        if pow_mod(self.s as u64, self.m as u64, l) != 1 % l {
            return Err(Error::param(format!(
                "s^m = {}^{} is not 1 modulo {l}, so x^m would act nontrivially",
                self.s, self.m
            )));
        }
        Ok(())
    }
}

/// Normal-form multiplication backend.
///
/// Each element is stored as its contributions to the index,
/// `[i * q2 * m, j * m, k, i * q2 + j]`, so a product is three modular
/// additions of precomputed terms.
#[derive(Clone, Debug)]
pub struct ScalarSemidirect {
    desc: SemidirectDescriptor,
    parts: Vec<[u32; 4]>,
    /// `twist[k * |A| + c]` holds the index contributions of `s^(-k) * c`.
    twist: Vec<[u32; 2]>,
    /// Moduli of the three contributions.
    mod_i: u32,
    mod_j: u32,
}

/// Right multiplication by a fixed element, see
/// [`ScalarSemidirect::right_factor`].
#[derive(Clone, Debug)]
pub(crate) struct RightFactor {
    twist: Vec<[u32; 2]>,
    k: u32,
}

#[inline(always)]
fn add_mod(x: u32, y: u32, modulus: u32) -> u32 {
    let s = x + y;
    if s >= modulus {
        s - modulus
    } else {
        s
    }
}

impl ScalarSemidirect {
    pub(crate) fn new(desc: SemidirectDescriptor) -> Result<Self> {
        desc.validate()?;
        let SemidirectDescriptor { q1, q2, m, s } = desc;
        let l = desc.a_exponent();
        // s is a unit mod l, validated above
        let s_inv = inv_mod(s as u64 % l, l).unwrap_or(0);
        let mod_j = q2 * m;
        let mod_i = q1 * mod_j;
        let mut twist = Vec::with_capacity(desc.order() as usize);
        for k in 0..m as u64 {
            let sigma = pow_mod(s_inv, k, l.max(1));
            for i in 0..q1 as u64 {
                let si = (sigma * i % q1 as u64) as u32;
                for j in 0..q2 as u64 {
                    let sj = (sigma * j % q2 as u64) as u32;
                    twist.push([si * mod_j, sj * m]);
                }
            }
        }
        let mut parts = Vec::with_capacity(desc.order() as usize);
        for i in 0..q1 {
            for j in 0..q2 {
                for k in 0..m {
                    parts.push([i * mod_j, j * m, k, i * q2 + j]);
                }
            }
        }
        Ok(ScalarSemidirect {
            desc,
            parts,
            twist,
            mod_i,
            mod_j,
        })
    }

    pub fn descriptor(&self) -> SemidirectDescriptor {
        self.desc
    }

    #[inline]
    pub fn index(&self, i: u32, j: u32, k: u32) -> Elem {
        (i * self.desc.q2 + j) * self.desc.m + k
    }

    /// Index of `a^i b^j x^k` with arbitrary integer exponents.
    pub fn index_wrapping(&self, i: i64, j: i64, k: i64) -> Elem {
        let d = &self.desc;
        self.index(
            i.rem_euclid(d.q1 as i64) as u32,
            j.rem_euclid(d.q2 as i64) as u32,
            k.rem_euclid(d.m as i64) as u32,
        )
    }

    #[inline]
    pub fn coords(&self, g: Elem) -> [u32; 3] {
        let [_, _, k, c] = self.parts[g as usize];
        [c / self.desc.q2, c % self.desc.q2, k]
    }

    /// True for elements of `A` (no `x` part).
    #[inline]
    pub fn in_a(&self, g: Elem) -> bool {
        self.parts[g as usize][2] == 0
    }

    #[inline]
    pub(crate) fn mul(&self, g: Elem, h: Elem) -> Elem {
        let [gi, gj, gk, _] = self.parts[g as usize];
        let [_, _, hk, hc] = self.parts[h as usize];
        let na = self.desc.q1 * self.desc.q2;
        let [ti, tj] = self.twist[(gk * na + hc) as usize];
        add_mod(gi, ti, self.mod_i) + add_mod(gj, tj, self.mod_j) + add_mod(gk, hk, self.desc.m)
    }

    /// Precomputed right multiplication by `y`.
    pub(crate) fn right_factor(&self, y: Elem) -> RightFactor {
        let [_, _, k, c] = self.parts[y as usize];
        let na = self.desc.q1 * self.desc.q2;
        RightFactor {
            twist: (0..self.desc.m).map(|l| self.twist[(l * na + c) as usize]).collect(),
            k,
        }
    }

    #[inline]
    pub(crate) fn mul_by(&self, u: Elem, f: &RightFactor) -> Elem {
        let [ui, uj, uk, _] = self.parts[u as usize];
        let [ti, tj] = f.twist[uk as usize];
        add_mod(ui, ti, self.mod_i) + add_mod(uj, tj, self.mod_j) + add_mod(uk, f.k, self.desc.m)
    }

    /// Defining relators over the generators `a`, `b`, `x` that are present
    /// (modulus above 1), as words of `(generator position, exponent)`:
    /// powers of the generators, `[a, b]`, and `x⁻¹ c x c^(-s)`.
    pub(crate) fn relators(&self) -> Vec<Vec<(usize, i64)>> {
        let d = &self.desc;
        let moduli = [d.q1, d.q2, d.m];
        let mut pos = [None; 3];
        let mut next = 0;
        for (slot, &q) in pos.iter_mut().zip(&moduli) {
            if q > 1 {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut out = Vec::new();
        for (slot, &q) in pos.iter().zip(&moduli) {
            if let Some(g) = slot {
                out.push(vec![(*g, q as i64)]);
            }
        }
        if let (Some(a), Some(b)) = (pos[0], pos[1]) {
            out.push(vec![(a, -1), (b, -1), (a, 1), (b, 1)]);
        }
        if let Some(x) = pos[2] {
            for c in pos[..2].iter().flatten() {
                out.push(vec![(x, -1), (*c, 1), (x, 1), (*c, -(d.s as i64))]);
            }
        }
        out
    }

    /// `(c x^k)⁻¹ = (c⁻¹)^(s^k) x^(-k)`.
    pub(crate) fn inv(&self, g: Elem) -> Elem {
        let d = &self.desc;
        let [_, _, k, c] = self.parts[g as usize];
        let back = (d.m - k) % d.m;
        let [ti, tj] = self.twist[(back * d.q1 * d.q2 + c) as usize];
        let neg = |t: u32, modulus: u32| if t == 0 { 0 } else { modulus - t };
        neg(ti, self.mod_i) + neg(tj, self.mod_j) + back
    }

    pub(crate) fn word(&self, g: Elem, names: &[String; 3]) -> String {
        let c = self.coords(g);
        let mut parts = Vec::new();
        for (e, name) in c.iter().zip(names) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_descriptors() {
        // 3 is not a unit mod 9
        assert!(SemidirectDescriptor::new(9, 9, 3, 3).validate().is_err());
        // 2^3 = 8 != 1 mod 9
        assert!(SemidirectDescriptor::new(9, 9, 3, 2).validate().is_err());
        assert!(SemidirectDescriptor::new(9, 9, 3, 4).validate().is_ok());
        assert!(SemidirectDescriptor::new(8, 1, 2, 7).validate().is_ok());
    }

    #[test]
    fn twist_moves_x_past_a() {
        let g = ScalarSemidirect::new(SemidirectDescriptor::new(9, 9, 3, 4)).unwrap();
        let a = g.index(1, 0, 0);
        let ax = g.index(1, 0, 1);
        // x a = a^7 x since 4⁻¹ = 7 mod 9
        assert_eq!(g.mul(ax, a), g.index(8, 0, 1));
        for e in 0..243 {
            assert_eq!(g.mul(e, g.inv(e)), 0);
            assert_eq!(g.mul(g.inv(e), e), 0);
        }
    }
}
