//! Finite groups with a fixed element indexing and an exact multiplication
//! backend.
//!
//! Every group enumerates its elements as `0..order` with the identity at
//! index 0. Three backends exist:
//!
//! * [`ScalarSemidirect`]: normal-form words `a^i b^j x^k`, multiplied
//!   arithmetically;
//! * [`CayleyTable`]: a dense table generated from a concrete realization
//!   (permutations, matrices, quaternions, cosets);
//! * direct products, indexed as pairs `g * |K| + k` and multiplied
//!   componentwise without materializing a table.
//!
//! Conventions used throughout the crate: `g^h = h⁻¹ g h` and
//! `[g, h] = g⁻¹ h⁻¹ g h`.

mod perm;
pub mod products;
pub mod regular;
mod semidirect;
pub mod subgroup;
mod table;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub use perm::Perm;
pub use products::{central_product, direct_product, quotient, CentralProduct, Quotient};
pub use regular::{is_regular_p_group, Regularity};
pub use semidirect::{ScalarSemidirect, SemidirectDescriptor, SEMIDIRECT_CAP};
pub use subgroup::{
    center, centralizer, closure, closure_with_budget, derived_subgroup, is_normal, is_subgroup, lower_central_series,
    nilpotency_class, normal_closure, Nilpotency, SubgroupSet, SubsetTest, DEFAULT_CLOSURE_BUDGET,
};
pub use table::{CayleyTable, Realized, TABLE_CAP};

use crate::error::{Error, Result};

/// An element, identified by its index in the group's enumeration.
pub type Elem = u32;

pub const IDENTITY: Elem = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    ScalarSemidirect,
    CayleyTable,
    DirectProduct,
}

#[derive(Clone, Debug)]
pub(crate) enum Backend {
    Semidirect(ScalarSemidirect, [String; 3]),
    Table(CayleyTable),
    Product(Group, Group),
}

/// `u ↦ u y` for a fixed `y`, from [`Group::right_multiplier`].
pub struct RightMultiplier<'a> {
    group: &'a Group,
    kind: RightKind<'a>,
}

enum RightKind<'a> {
    Semidirect(&'a ScalarSemidirect, semidirect::RightFactor),
    Generic(Elem),
}

impl RightMultiplier<'_> {
    #[inline]
    pub fn apply(&self, u: Elem) -> Elem {
        match &self.kind {
            RightKind::Semidirect(s, f) => s.mul_by(u, f),
            RightKind::Generic(y) => self.group.mul(u, *y),
        }
    }
}

/// A finite group. Cheap to clone and immutable after construction.
#[derive(Clone)]
pub struct Group(Arc<Inner>);

struct Inner {
    name: String,
    order: usize,
    backend: Backend,
    generators: Vec<Elem>,
    generator_names: Vec<String>,
    inverses: Vec<Elem>,
    labels: Option<Vec<String>>,
    orders: OnceLock<Vec<u32>>,
    label_index: OnceLock<HashMap<String, Elem>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.0.name)
            .field("order", &self.0.order)
            .field("backend", &self.backend_kind())
            .finish()
    }
}

impl Group {
    fn assemble(
        name: String,
        order: usize,
        backend: Backend,
        generators: Vec<Elem>,
        generator_names: Vec<String>,
        labels: Option<Vec<String>>,
    ) -> Group {
        let inverses = match &backend {
            Backend::Semidirect(s, _) => (0..order as Elem).map(|g| s.inv(g)).collect(),
            Backend::Table(t) => (0..order as Elem).map(|g| t.inverse(g)).collect(),
            Backend::Product(h, k) => {
                let kn = k.order() as Elem;
                (0..order as Elem).map(|g| h.inv(g / kn) * kn + k.inv(g % kn)).collect()
            }
        };
        Group(Arc::new(Inner {
            name,
            order,
            backend,
            generators,
            generator_names,
            inverses,
            labels,
            orders: OnceLock::new(),
            label_index: OnceLock::new(),
        }))
    }

    /// A normal-form group. `names` are the printed names of `a`, `b`, `x`.
    pub fn semidirect(name: impl Into<String>, desc: SemidirectDescriptor, names: [&str; 3]) -> Result<Group> {
        let backend = ScalarSemidirect::new(desc)?;
        let order = desc.order() as usize;
        let mut generators = Vec::new();
        let mut generator_names = Vec::new();
        for (pos, (&modulus, nm)) in [desc.q1, desc.q2, desc.m].iter().zip(names).enumerate() {
            if modulus > 1 {
                let mut c = [0u32; 3];
                c[pos] = 1;
                generators.push(backend.index(c[0], c[1], c[2]));
                generator_names.push(nm.to_string());
            }
        }
        let names = names.map(String::from);
        Ok(Group::assemble(
            name.into(),
            order,
            Backend::Semidirect(backend, names),
            generators,
            generator_names,
            None,
        ))
    }

    /// A table-backed group. `labels`, when given, must cover every element.
    pub fn from_table(
        name: impl Into<String>,
        table: CayleyTable,
        generators: Vec<Elem>,
        generator_names: Vec<String>,
        labels: Option<Vec<String>>,
    ) -> Result<Group> {
        let order = table.order();
        if generators.iter().any(|&g| g as usize >= order) {
            return Err(Error::param("generator index out of range"));
        }
        if generator_names.len() != generators.len() {
            return Err(Error::param("one name per generator required"));
        }
        if labels.as_ref().is_some_and(|l| l.len() != order) {
            return Err(Error::param("one label per element required"));
        }
        Ok(Group::assemble(
            name.into(),
            order,
            Backend::Table(table),
            generators,
            generator_names,
            labels,
        ))
    }

    pub(crate) fn product_of(h: &Group, k: &Group) -> Result<Group> {
        let order = h.order() as u64 * k.order() as u64;
        if order > u32::MAX as u64 / 2 {
            return Err(Error::SizeCap {
                what: "direct product",
                size: order as u128,
                cap: (u32::MAX / 2) as u128,
            });
        }
        let kn = k.order() as Elem;
        let mut generators = Vec::new();
        let mut generator_names = Vec::new();
        for (&g, nm) in h.generators().iter().zip(h.generator_names()) {
            generators.push(g * kn);
            generator_names.push(format!("({nm}, 1)"));
        }
        for (&g, nm) in k.generators().iter().zip(k.generator_names()) {
            generators.push(g);
            generator_names.push(format!("(1, {nm})"));
        }
        Ok(Group::assemble(
            format!("{} x {}", h.name(), k.name()),
            order as usize,
            Backend::Product(h.clone(), k.clone()),
            generators,
            generator_names,
            None,
        ))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> Elem {
        IDENTITY
    }

    /// The designated generating set.
    pub fn generators(&self) -> &[Elem] {
        &self.0.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.0.generator_names
    }

    pub fn backend_kind(&self) -> BackendKind {
        match self.0.backend {
            Backend::Semidirect(..) => BackendKind::ScalarSemidirect,
            Backend::Table(_) => BackendKind::CayleyTable,
            Backend::Product(..) => BackendKind::DirectProduct,
        }
    }

    pub fn as_semidirect(&self) -> Option<&ScalarSemidirect> {
        match &self.0.backend {
            Backend::Semidirect(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn as_table(&self) -> Option<&CayleyTable> {
        match &self.0.backend {
            Backend::Table(t) => Some(t),
            _ => None,
        }
    }

    /// The two factors of a direct product.
    pub fn factors(&self) -> Option<(&Group, &Group)> {
        match &self.0.backend {
            Backend::Product(h, k) => Some((h, k)),
            _ => None,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.order as Elem
    }

    pub fn check(&self, g: Elem) -> Result<Elem> {
        if (g as usize) < self.0.order {
            Ok(g)
        } else {
            Err(Error::InvalidElement {
                index: g as u64,
                order: self.0.order,
            })
        }
    }

    #[inline]
    pub fn mul(&self, g: Elem, h: Elem) -> Elem {
        match &self.0.backend {
            Backend::Semidirect(s, _) => s.mul(g, h),
            Backend::Table(t) => t.get(g, h),
            Backend::Product(a, b) => {
                let kn = b.order() as Elem;
                a.mul(g / kn, h / kn) * kn + b.mul(g % kn, h % kn)
            }
        }
    }

    /// Multiplication with index validation.
    pub fn multiply(&self, g: Elem, h: Elem) -> Result<Elem> {
        Ok(self.mul(self.check(g)?, self.check(h)?))
    }

    #[inline]
    pub fn inv(&self, g: Elem) -> Elem {
        self.0.inverses[g as usize]
    }

    /// Right multiplication by a fixed `y`, precomputed where the backend
    /// allows it.
    pub fn right_multiplier(&self, y: Elem) -> RightMultiplier<'_> {
        let kind = match &self.0.backend {
            Backend::Semidirect(s, _) => RightKind::Semidirect(s, s.right_factor(y)),
            _ => RightKind::Generic(y),
        };
        RightMultiplier { group: self, kind }
    }

    /// `inverses()[g] = g⁻¹`.
    pub fn inverses(&self) -> &[Elem] {
        &self.0.inverses
    }

    pub fn pow(&self, g: Elem, e: i64) -> Elem {
        let mut base = if e < 0 { self.inv(g) } else { g };
        let mut e = e.unsigned_abs();
        let mut acc = IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `h⁻¹ g h`.
    #[inline]
    pub fn conj(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(self.inv(h), g), h)
    }

    /// `g⁻¹ h⁻¹ g h`.
    #[inline]
    pub fn commutator(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))
    }

    /// Least `k >= 1` with `g^k = 1`.
    pub fn element_order(&self, g: Elem) -> u32 {
        self.element_orders()[g as usize]
    }

    /// Orders of all elements, computed once.
    pub fn element_orders(&self) -> &[u32] {
        self.0.orders.get_or_init(|| {
            self.elements()
                .map(|g| {
                    let mut k = 1;
                    let mut acc = g;
                    while acc != IDENTITY {
                        acc = self.mul(acc, g);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, &g)| gens[i + 1..].iter().all(|&h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Human-readable name of an element: normal-form words for structured
    /// groups, cycles for permutation groups, `#index` otherwise.
    pub fn label(&self, g: Elem) -> String {
        if let Some(labels) = &self.0.labels {
            return labels[g as usize].clone();
        }
        match &self.0.backend {
            Backend::Semidirect(s, names) => s.word(g, names),
            Backend::Table(_) => {
                if g == IDENTITY {
                    "1".into()
                } else {
                    format!("#{g}")
                }
            }
            Backend::Product(h, k) => {
                let kn = k.order() as Elem;
                format!("({}, {})", h.label(g / kn), k.label(g % kn))
            }
        }
    }

    pub fn labels<'a>(&self, elems: impl IntoIterator<Item = &'a Elem>) -> Vec<String> {
        elems.into_iter().map(|&g| self.label(g)).collect()
    }

    /// Parses `#index`, an element label, or a word in the generator names
    /// such as `a^2 b x^-1` (factors separated by spaces or `*`).
    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        let text = text.trim();
        if let Some(idx) = text.strip_prefix('#') {
            let idx: u64 = idx.parse().map_err(|_| Error::parse(text, "expected #<index>"))?;
            if idx >= self.order() as u64 {
                return Err(Error::InvalidElement {
                    index: idx,
                    order: self.order(),
                });
            }
            return Ok(idx as Elem);
        }
        if text == "1" {
            return Ok(IDENTITY);
        }
        let index = self
            .0
            .label_index
            .get_or_init(|| self.elements().map(|g| (self.label(g), g)).collect());
        if let Some(&g) = index.get(text) {
            return Ok(g);
        }
        let mut acc = IDENTITY;
        for factor in text
            .split(|c: char| c == '*' || c.is_whitespace())
            .filter(|f| !f.is_empty())
        {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| Error::parse(text, format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let pos = self
                .generator_names()
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::parse(text, format!("unknown generator `{name}`")))?;
            acc = self.mul(acc, self.pow(self.generators()[pos], exp));
        }
        Ok(acc)
    }

    /// Order of the subgroup generated by `gens`.
    pub fn generated_order(&self, gens: &[Elem]) -> usize {
        closure(self, gens).map(|s| s.len()).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g23() -> Group {
        Group::semidirect("G", SemidirectDescriptor::new(9, 9, 3, 4), ["a", "b", "x"]).unwrap()
    }

    #[test]
    fn normal_form_words_round_trip() {
        let g = g23();
        for e in g.elements() {
            assert_eq!(g.parse_element(&g.label(e)).unwrap(), e);
        }
        let ax = g.parse_element("a x").unwrap();
        let a = g.parse_element("a").unwrap();
        assert_eq!(g.label(g.mul(ax, a)), "a^8 x");
        assert_eq!(g.parse_element("x^-1").unwrap(), g.parse_element("x^2").unwrap());
        assert!(g.parse_element("q").is_err());
        assert!(g.parse_element("#243").is_err());
    }

    #[test]
    fn element_orders_in_g23() {
        let g = g23();
        assert_eq!(g.element_order(0), 1);
        assert_eq!(g.element_order(g.parse_element("a").unwrap()), 9);
        assert_eq!(g.element_order(g.parse_element("x").unwrap()), 3);
        let ax = g.parse_element("a x").unwrap();
        assert_eq!(g.element_order(ax), 9);
        assert_eq!(g.pow(ax, 3), g.parse_element("a^3").unwrap());
    }

    #[test]
    fn multiply_validates_indices() {
        let g = g23();
        assert!(matches!(g.multiply(0, 243), Err(Error::InvalidElement { .. })));
        assert_eq!(g.multiply(5, 0).unwrap(), 5);
    }
}
