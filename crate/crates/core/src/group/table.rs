//! Dense Cayley tables, built only from concrete realizations.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::group::Elem;

/// Hard cap on the order of a table-backed group.
pub const TABLE_CAP: usize = 20_000;

#[derive(Clone, Debug)]
pub struct CayleyTable {
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
}

/// A table together with the realized element behind each index.
pub struct Realized<T> {
    pub table: CayleyTable,
    pub elements: Vec<T>,
    pub generators: Vec<Elem>,
}

impl CayleyTable {
    /// Generates the group spanned by `gens` inside some concrete group `T`,
    /// breadth first from the identity with right multiplication by the
    /// generators. Index 0 is the identity.
    pub fn generate<T, F>(identity: T, gens: &[T], mul: F) -> Result<Realized<T>>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut index: HashMap<T, Elem> = HashMap::new();
        let mut elements = vec![identity.clone()];
        index.insert(identity, 0);
        let mut head = 0;
        while head < elements.len() {
            for g in gens {
                let p = mul(&elements[head], g);
                if !index.contains_key(&p) {
                    if elements.len() >= TABLE_CAP {
                        return Err(Error::SizeCap {
                            what: "Cayley table",
                            size: elements.len() as u128 + 1,
                            cap: TABLE_CAP as u128,
                        });
                    }
                    index.insert(p.clone(), elements.len() as Elem);
                    elements.push(p);
                }
            }
            head += 1;
        }
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for g in &elements {
            for h in &elements {
                table.push(index[&mul(g, h)]);
            }
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        let table = CayleyTable::from_raw(n, table)?;
        Ok(Realized {
            table,
            elements,
            generators,
        })
    }

    /// Wraps a raw table after checking the Latin-square property and that
    /// index 0 is a two-sided identity.
    pub fn from_raw(order: usize, table: Vec<Elem>) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::param("table shape does not match order"));
        }
        if order > TABLE_CAP {
            return Err(Error::SizeCap {
                what: "Cayley table",
                size: order as u128,
                cap: TABLE_CAP as u128,
            });
        }
        let t = CayleyTable {
            order,
            table,
            inverse: Vec::new(),
        };
        if !t.is_latin_square() {
            return Err(Error::param("table is not a Latin square"));
        }
        if (0..order).any(|g| t.get(0, g as Elem) != g as Elem || t.get(g as Elem, 0) != g as Elem) {
            return Err(Error::param("index 0 is not the identity"));
        }
        let inverse = (0..order)
            .map(|g| {
                let row = &t.table[g * order..(g + 1) * order];
                row.iter().position(|&x| x == 0).unwrap() as Elem
            })
            .collect();
        Ok(CayleyTable { inverse, ..t })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, g: Elem, h: Elem) -> Elem {
        self.table[g as usize * self.order + h as usize]
    }

    #[inline]
    pub fn inverse(&self, g: Elem) -> Elem {
        self.inverse[g as usize]
    }

    pub fn is_latin_square(&self) -> bool {
        let n = self.order;
        let mut seen = vec![usize::MAX; n];
        for r in 0..n {
            for c in 0..n {
                let v = self.table[r * n + c] as usize;
                if v >= n || seen[v] == r {
                    return false;
                }
                seen[v] = r;
            }
        }
        seen.iter_mut().for_each(|s| *s = usize::MAX);
        for c in 0..n {
            for r in 0..n {
                let v = self.table[r * n + c] as usize;
                if seen[v] == c {
                    return false;
                }
                seen[v] = c;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generates_cyclic_group_from_integers() {
        let r = CayleyTable::generate(0u32, &[1u32], |a, b| (a + b) % 6).unwrap();
        assert_eq!(r.table.order(), 6);
        assert_eq!(r.elements, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(r.table.get(4, 5), 3);
        assert_eq!(r.table.inverse(2), 4);
    }

    #[test]
    fn rejects_non_latin_tables() {
        assert!(CayleyTable::from_raw(2, vec![0, 1, 1, 1]).is_err());
        assert!(CayleyTable::from_raw(2, vec![0, 1, 1, 0]).is_ok());
    }

    #[test]
    fn enforces_cap() {
        let err = CayleyTable::generate(0u64, &[1u64], |a, b| (a + b) % 30_000);
        assert!(matches!(err, Err(Error::SizeCap { .. })));
    }
}
