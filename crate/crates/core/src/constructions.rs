//! Catalog of named groups, their designated generators and the relations
//! each construction must satisfy.
//!
//! Groups are described by spec strings:
//!
//! | spec                              | group                                        |
//! |-----------------------------------|----------------------------------------------|
//! | `theorem_a:n=2,p=3`               | `(Z_{p^n} x Z_{p^n}) ⋊ Z_{p^{n-1}}`, `c^x = c^{1+p}` |
//! | `two_group:n=3`                   | `(Z_{2^n} x Z_{2^n}) ⋊ Z_{2^{n-1}}`, `c^x = c^3`      |
//! | `dihedral:16`                     | dihedral group of order 16                   |
//! | `q8`                              | quaternion group                             |
//! | `heisenberg:3`, `modular:3`       | the non-abelian groups of order `p^3`, p odd |
//! | `extraspecial:p=3,m=2,kind=heis`  | iterated central product of order-`p^3` groups |
//! | `sym:3`, `cyclic:9`, `abelian:9,9`| symmetric, cyclic, two-generator abelian     |
//! | `product:cyclic:3\|sym:3`          | direct product                               |

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{
    center, central_product, derived_subgroup, nilpotency_class, CayleyTable, CentralProduct, Elem, Group, Nilpotency,
    Perm, SemidirectDescriptor, IDENTITY,
};
use crate::util::{is_prime, prime_power};

/// Largest degree accepted for symmetric groups.
pub const MAX_SYMMETRIC_DEGREE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraspecialKind {
    /// Heisenberg factors only (exponent p, p odd).
    Heis,
    /// One order-`p^2`-exponent factor, then Heisenberg factors (p odd).
    Modular,
    /// Dihedral factors only (p = 2).
    D8,
    /// One quaternion factor, then dihedral factors (p = 2).
    Q8,
}

impl ExtraspecialKind {
    fn as_str(self) -> &'static str {
        match self {
            ExtraspecialKind::Heis => "heis",
            ExtraspecialKind::Modular => "modular",
            ExtraspecialKind::D8 => "d8",
            ExtraspecialKind::Q8 => "q8",
        }
    }

    /// Kind of the remaining factors after the first.
    fn rest(self) -> Self {
        match self {
            ExtraspecialKind::Heis | ExtraspecialKind::Modular => ExtraspecialKind::Heis,
            ExtraspecialKind::D8 | ExtraspecialKind::Q8 => ExtraspecialKind::D8,
        }
    }
}

impl FromStr for ExtraspecialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heis" | "heisenberg" => Ok(ExtraspecialKind::Heis),
            "modular" => Ok(ExtraspecialKind::Modular),
            "d8" => Ok(ExtraspecialKind::D8),
            "q8" => Ok(ExtraspecialKind::Q8),
            _ => Err(Error::parse(s, "kind must be heis, modular, d8 or q8")),
        }
    }
}

/// A parsed catalog descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    TheoremA { n: u32, p: u32 },
    TwoGroup { n: u32 },
    Dihedral { order: u32 },
    Quaternion8,
    Heisenberg { p: u32 },
    Modular { p: u32 },
    Extraspecial { p: u32, m: u32, kind: ExtraspecialKind },
    Symmetric { k: u32 },
    Cyclic { n: u32 },
    Abelian { q1: u32, q2: u32 },
    Product(Vec<GroupSpec>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::TheoremA { n, p } => write!(f, "theorem_a:n={n},p={p}"),
            GroupSpec::TwoGroup { n } => write!(f, "two_group:n={n}"),
            GroupSpec::Dihedral { order } => write!(f, "dihedral:{order}"),
            GroupSpec::Quaternion8 => write!(f, "q8"),
            GroupSpec::Heisenberg { p } => write!(f, "heisenberg:{p}"),
            GroupSpec::Modular { p } => write!(f, "modular:{p}"),
            GroupSpec::Extraspecial { p, m, kind } => {
                write!(f, "extraspecial:p={p},m={m},kind={}", kind.as_str())
            }
            GroupSpec::Symmetric { k } => write!(f, "sym:{k}"),
            GroupSpec::Cyclic { n } => write!(f, "cyclic:{n}"),
            GroupSpec::Abelian { q1, q2 } => write!(f, "abelian:{q1},{q2}"),
            GroupSpec::Product(parts) => {
                write!(f, "product:")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

fn keyed(input: &str, args: &str, keys: &[&str]) -> Result<Vec<String>> {
    let mut out = vec![None; keys.len()];
    for part in args.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(input, format!("expected key=value, got `{part}`")))?;
        let pos = keys
            .iter()
            .position(|&key| key == k.trim())
            .ok_or_else(|| Error::parse(input, format!("unknown key `{k}`")))?;
        out[pos] = Some(v.trim().to_string());
    }
    out.into_iter()
        .zip(keys)
        .map(|(v, k)| v.ok_or_else(|| Error::parse(input, format!("missing `{k}`"))))
        .collect()
}

fn num(input: &str, v: &str) -> Result<u32> {
    v.trim()
        .parse()
        .map_err(|_| Error::parse(input, format!("`{v}` is not a non-negative integer")))
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let input = input.trim();
        let (family, args) = input.split_once(':').unwrap_or((input, ""));
        let spec = match family {
            "theorem_a" => {
                let v = keyed(input, args, &["n", "p"])?;
                GroupSpec::TheoremA {
                    n: num(input, &v[0])?,
                    p: num(input, &v[1])?,
                }
            }
            "two_group" => {
                let v = keyed(input, args, &["n"])?;
                GroupSpec::TwoGroup { n: num(input, &v[0])? }
            }
            "dihedral" => GroupSpec::Dihedral {
                order: num(input, args)?,
            },
            "q8" if args.is_empty() => GroupSpec::Quaternion8,
            "heisenberg" => GroupSpec::Heisenberg { p: num(input, args)? },
            "modular" => GroupSpec::Modular { p: num(input, args)? },
            "extraspecial" => {
                let v = keyed(input, args, &["p", "m", "kind"])?;
                GroupSpec::Extraspecial {
                    p: num(input, &v[0])?,
                    m: num(input, &v[1])?,
                    kind: v[2].parse()?,
                }
            }
            "sym" => GroupSpec::Symmetric { k: num(input, args)? },
            "cyclic" => GroupSpec::Cyclic { n: num(input, args)? },
            "abelian" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| Error::parse(input, "expected abelian:q1,q2"))?;
                GroupSpec::Abelian {
                    q1: num(input, a)?,
                    q2: num(input, b)?,
                }
            }
            "product" => {
                let parts = args.split('|').map(str::parse).collect::<Result<Vec<GroupSpec>>>()?;
                if parts.len() < 2 {
                    return Err(Error::parse(input, "a product needs at least two factors"));
                }
                GroupSpec::Product(parts)
            }
            _ => return Err(Error::parse(input, "unknown group family")),
        };
        Ok(spec)
    }
}

/// Structural values a construction is expected to have.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExpectedProfile {
    pub order: u64,
    pub class: Option<usize>,
    pub center_order: Option<usize>,
    pub derived_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

/// A constructed group with its designated elements.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: GroupSpec,
    pub group: Group,
    /// Named elements: the designated generators plus notable extras.
    pub designated: Vec<(String, Elem)>,
    pub expected: ExpectedProfile,
    pub relations: Vec<RelationCheck>,
    /// For central products: the construction data and the first factor.
    pub central: Option<(CentralProduct, Box<CatalogEntry>)>,
}

impl CatalogEntry {
    pub fn descriptor(&self) -> String {
        self.spec.to_string()
    }

    pub fn named(&self, name: &str) -> Option<Elem> {
        self.designated.iter().find(|(n, _)| n == name).map(|&(_, e)| e)
    }

    /// Computed profile, with `None` where the entry states no expectation.
    pub fn computed_profile(&self) -> Result<ExpectedProfile> {
        let g = &self.group;
        let e = &self.expected;
        Ok(ExpectedProfile {
            order: g.order() as u64,
            class: match e.class {
                Some(_) => match nilpotency_class(g)? {
                    Nilpotency::Class(c) => Some(c),
                    Nilpotency::NotNilpotent => None,
                },
                None => None,
            },
            center_order: e.center_order.map(|_| center(g).len()),
            derived_order: match e.derived_order {
                Some(_) => Some(derived_subgroup(g)?.len()),
                None => None,
            },
        })
    }
}

struct Relations<'g> {
    group: &'g Group,
    checks: Vec<RelationCheck>,
}

impl<'g> Relations<'g> {
    fn new(group: &'g Group) -> Self {
        Relations {
            group,
            checks: Vec::new(),
        }
    }

    fn eq(&mut self, relation: impl Into<String>, lhs: Elem, rhs: Elem) {
        self.checks.push(RelationCheck {
            relation: relation.into(),
            holds: lhs == rhs,
        });
    }

    fn order(&mut self, name: &str, g: Elem, order: u32) {
        let holds = self.group.element_order(g) == order;
        self.checks.push(RelationCheck {
            relation: format!("o({name}) = {order}"),
            holds,
        });
    }

    fn holds(&mut self, relation: impl Into<String>, holds: bool) {
        self.checks.push(RelationCheck {
            relation: relation.into(),
            holds,
        });
    }
}

fn finish(
    spec: GroupSpec,
    group: Group,
    designated: Vec<(String, Elem)>,
    expected: ExpectedProfile,
    relations: Vec<RelationCheck>,
    central: Option<(CentralProduct, Box<CatalogEntry>)>,
) -> Result<CatalogEntry> {
    if let Some(bad) = relations.iter().find(|r| !r.holds) {
        return Err(Error::Relation {
            name: spec.to_string(),
            relation: bad.relation.clone(),
        });
    }
    if group.order() as u64 != expected.order {
        return Err(Error::Relation {
            name: spec.to_string(),
            relation: format!("|G| = {}", expected.order),
        });
    }
    Ok(CatalogEntry {
        spec,
        group,
        designated,
        expected,
        relations,
        central,
    })
}

/// Builds the catalog entry for `spec`, checking all of its relations.
pub fn build(spec: &GroupSpec) -> Result<CatalogEntry> {
    match *spec {
        GroupSpec::TheoremA { n, p } => theorem_a_group(n, p),
        GroupSpec::TwoGroup { n } => two_group_family(n),
        GroupSpec::Dihedral { order } => dihedral(order),
        GroupSpec::Quaternion8 => quaternion8(),
        GroupSpec::Heisenberg { p } => heisenberg(p),
        GroupSpec::Modular { p } => modular_p3(p),
        GroupSpec::Extraspecial { p, m, kind } => extraspecial(p, m, kind),
        GroupSpec::Symmetric { k } => symmetric(k),
        GroupSpec::Cyclic { n } => cyclic(n),
        GroupSpec::Abelian { q1, q2 } => abelian(q1, q2),
        GroupSpec::Product(ref parts) => product(parts),
    }
}

/// Shared relation list for `(Z_q1 x Z_q2) ⋊ <x>` with `c^x = c^s`.
fn semidirect_entry(
    spec: GroupSpec,
    desc: SemidirectDescriptor,
    names: [&str; 3],
    expected: ExpectedProfile,
) -> Result<CatalogEntry> {
    let group = Group::semidirect(spec.to_string(), desc, names)?;
    let sd = group.as_semidirect().unwrap();
    let mut rel = Relations::new(&group);
    let mut designated = Vec::new();
    let gens: Vec<(usize, Elem)> = [desc.q1, desc.q2, desc.m]
        .iter()
        .enumerate()
        .filter(|(_, &q)| q > 1)
        .map(|(pos, _)| {
            let mut c = [0u32; 3];
            c[pos] = 1;
            (pos, sd.index(c[0], c[1], c[2]))
        })
        .collect();
    let moduli = [desc.q1, desc.q2, desc.m];
    for &(pos, g) in &gens {
        rel.order(names[pos], g, moduli[pos]);
        designated.push((names[pos].to_string(), g));
    }
    let x = gens.iter().find(|(pos, _)| *pos == 2).map(|&(_, g)| g);
    let a_gens: Vec<(usize, Elem)> = gens.iter().copied().filter(|(pos, _)| *pos < 2).collect();
    if a_gens.len() == 2 {
        let (a, b) = (a_gens[0].1, a_gens[1].1);
        rel.eq(
            format!("[{}, {}] = 1", names[0], names[1]),
            group.commutator(a, b),
            IDENTITY,
        );
    }
    if let Some(x) = x {
        for &(pos, c) in &a_gens {
            let nm = names[pos];
            rel.eq(
                format!("{nm}^{} = {nm}^{}", names[2], desc.s),
                group.conj(c, x),
                group.pow(c, desc.s as i64),
            );
        }
    }
    let relations = rel.checks;
    finish(spec, group, designated, expected, relations, None)
}

fn require_prime(p: u32, what: &str) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::param(format!("{what}: {p} is not prime")));
    }
    Ok(())
}

/// `G(n, p) = (Z_{p^n} x Z_{p^n}) ⋊ <x>` with `x` of order `p^{n-1}` acting
/// as `c ↦ c^{1+p}`.
pub fn theorem_a_group(n: u32, p: u32) -> Result<CatalogEntry> {
    require_prime(p, "theorem_a")?;
    if p == 2 {
        return Err(Error::param("theorem_a requires an odd prime"));
    }
    if n < 2 {
        return Err(Error::param("theorem_a requires n >= 2"));
    }
    let q = (p as u64)
        .checked_pow(n)
        .filter(|&q| q <= u32::MAX as u64)
        .ok_or_else(|| Error::param("p^n too large"))? as u32;
    let desc = SemidirectDescriptor::new(q, q, q / p, 1 + p);
    let pn = p as u64;
    let expected = ExpectedProfile {
        order: desc.order(),
        class: Some(n as usize),
        center_order: None,
        derived_order: Some(pn.pow(2 * (n - 1)) as usize),
    };
    semidirect_entry(GroupSpec::TheoremA { n, p }, desc, ["a", "b", "x"], expected)
}

/// `(Z_{2^n} x Z_{2^n}) ⋊ <x>` with `x` of order `2^{n-1}` acting as
/// `c ↦ c^3`.
pub fn two_group_family(n: u32) -> Result<CatalogEntry> {
    if !(2..=10).contains(&n) {
        return Err(Error::param("two_group requires 2 <= n <= 10"));
    }
    let q = 1u32 << n;
    let desc = SemidirectDescriptor::new(q, q, q / 2, 3);
    let expected = ExpectedProfile {
        order: desc.order(),
        ..Default::default()
    };
    semidirect_entry(GroupSpec::TwoGroup { n }, desc, ["a", "b", "x"], expected)
}

/// Dihedral group of order `2^n`, `n >= 3`, as `<a> ⋊ <x>` with `a^x = a⁻¹`.
pub fn dihedral(order: u32) -> Result<CatalogEntry> {
    match prime_power(order as u64) {
        Some((2, n)) if n >= 3 => {}
        _ => return Err(Error::param("dihedral order must be 2^n with n >= 3")),
    }
    let half = order / 2;
    let desc = SemidirectDescriptor::new(half, 1, 2, half - 1);
    let n = order.trailing_zeros() as usize;
    let expected = ExpectedProfile {
        order: order as u64,
        class: Some(n - 1),
        center_order: Some(2),
        derived_order: Some(half as usize / 2),
    };
    semidirect_entry(GroupSpec::Dihedral { order }, desc, ["a", "b", "x"], expected)
}

/// Cyclic group `Z_n`.
pub fn cyclic(n: u32) -> Result<CatalogEntry> {
    if n == 0 {
        return Err(Error::param("cyclic order must be positive"));
    }
    let desc = SemidirectDescriptor::new(n, 1, 1, 1);
    let expected = ExpectedProfile {
        order: n as u64,
        class: Some(if n == 1 { 0 } else { 1 }),
        ..Default::default()
    };
    semidirect_entry(GroupSpec::Cyclic { n }, desc, ["a", "b", "x"], expected)
}

/// `Z_q1 x Z_q2`.
pub fn abelian(q1: u32, q2: u32) -> Result<CatalogEntry> {
    if q1 == 0 || q2 == 0 {
        return Err(Error::param("abelian moduli must be positive"));
    }
    let desc = SemidirectDescriptor::new(q1, q2, 1, 1);
    let expected = ExpectedProfile {
        order: desc.order(),
        ..Default::default()
    };
    semidirect_entry(GroupSpec::Abelian { q1, q2 }, desc, ["a", "b", "x"], expected)
}

type Quaternion = [i8; 4];

fn hamilton(p: &Quaternion, q: &Quaternion) -> Quaternion {
    let [a1, b1, c1, d1] = *p;
    let [a2, b2, c2, d2] = *q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

fn quaternion_label(q: &Quaternion) -> String {
    let names = ["1", "i", "j", "k"];
    let pos = q.iter().position(|&c| c != 0).unwrap();
    let sign = if q[pos] < 0 { "-" } else { "" };
    format!("{sign}{}", names[pos])
}

/// `Q8 = {±1, ±i, ±j, ±k}` realized by unit quaternions, generated by `i, j`.
pub fn quaternion8() -> Result<CatalogEntry> {
    let one = [1, 0, 0, 0];
    let gens = [[0, 1, 0, 0], [0, 0, 1, 0]];
    let r = CayleyTable::generate(one, &gens, hamilton)?;
    let labels = r.elements.iter().map(quaternion_label).collect();
    let group = Group::from_table(
        "q8",
        r.table,
        r.generators.clone(),
        vec!["i".into(), "j".into()],
        Some(labels),
    )?;
    let i = group.parse_element("i")?;
    let j = group.parse_element("j")?;
    let k = group.parse_element("k")?;
    let m1 = group.parse_element("-1")?;
    let mut rel = Relations::new(&group);
    rel.eq("i^2 = -1", group.pow(i, 2), m1);
    rel.eq("j^2 = -1", group.pow(j, 2), m1);
    rel.eq("i j = k", group.mul(i, j), k);
    rel.eq("i^j = i^-1", group.conj(i, j), group.inv(i));
    let relations = rel.checks;
    let expected = ExpectedProfile {
        order: 8,
        class: Some(2),
        center_order: Some(2),
        derived_order: Some(2),
    };
    let designated = vec![("i".into(), i), ("j".into(), j), ("k".into(), k), ("-1".into(), m1)];
    finish(GroupSpec::Quaternion8, group, designated, expected, relations, None)
}

/// Heisenberg group of upper unitriangular 3x3 matrices over `Z_p`; the
/// triple `(a, b, c)` is the matrix with `a` at (1,2), `b` at (2,3) and `c`
/// at (1,3).
pub fn heisenberg(p: u32) -> Result<CatalogEntry> {
    require_prime(p, "heisenberg")?;
    if p == 2 {
        return Err(Error::param("heisenberg requires an odd prime"));
    }
    let mul = move |u: &[u32; 3], v: &[u32; 3]| [(u[0] + v[0]) % p, (u[1] + v[1]) % p, (u[2] + v[2] + u[0] * v[1]) % p];
    let r = CayleyTable::generate([0, 0, 0], &[[1, 0, 0], [0, 1, 0]], mul)?;
    // (a, b, c) = x^a y^b z^(c - ab)
    let labels = r
        .elements
        .iter()
        .map(|&[a, b, c]| {
            let zc = (c + p * p - a * b % p) % p;
            let mut parts = Vec::new();
            for (name, e) in [("x", a), ("y", b), ("z", zc)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    e => parts.push(format!("{name}^{e}")),
                }
            }
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join(" ")
            }
        })
        .collect();
    let group = Group::from_table(
        format!("heisenberg:{p}"),
        r.table,
        r.generators.clone(),
        vec!["x".into(), "y".into()],
        Some(labels),
    )?;
    let (x, y) = (r.generators[0], r.generators[1]);
    let z = group.commutator(x, y);
    let mut rel = Relations::new(&group);
    for (name, g) in [("x", x), ("y", y), ("z", z)] {
        rel.eq(format!("{name}^{p} = 1"), group.pow(g, p as i64), IDENTITY);
    }
    rel.eq("[x, z] = 1", group.commutator(x, z), IDENTITY);
    rel.eq("[y, z] = 1", group.commutator(y, z), IDENTITY);
    rel.holds("[x, y] = z, z != 1", z != IDENTITY && group.label(z) == "z");
    let relations = rel.checks;
    let expected = ExpectedProfile {
        order: (p as u64).pow(3),
        class: Some(2),
        center_order: Some(p as usize),
        derived_order: Some(p as usize),
    };
    let designated = vec![("x".into(), x), ("y".into(), y), ("z".into(), z)];
    finish(
        GroupSpec::Heisenberg { p },
        group,
        designated,
        expected,
        relations,
        None,
    )
}

/// `<x, y | x^{p^2} = y^p = 1, x^y = x^{1+p}>`, p odd.
pub fn modular_p3(p: u32) -> Result<CatalogEntry> {
    require_prime(p, "modular")?;
    if p == 2 {
        return Err(Error::param("modular requires an odd prime"));
    }
    let desc = SemidirectDescriptor::new(p * p, 1, p, 1 + p);
    let expected = ExpectedProfile {
        order: (p as u64).pow(3),
        class: Some(2),
        center_order: Some(p as usize),
        derived_order: Some(p as usize),
    };
    let mut entry = semidirect_entry(GroupSpec::Modular { p }, desc, ["x", "", "y"], expected)?;
    let x = entry.named("x").unwrap();
    entry.designated.push(("z".into(), entry.group.pow(x, p as i64)));
    Ok(entry)
}

/// `S_k` for `k <= 5`, generated by `(12)` and `(12...k)`.
pub fn symmetric(k: u32) -> Result<CatalogEntry> {
    let kk = k as usize;
    if kk == 0 || kk > MAX_SYMMETRIC_DEGREE {
        return Err(Error::param(format!(
            "symmetric degree must be in 1..={MAX_SYMMETRIC_DEGREE}"
        )));
    }
    let mut gens = Vec::new();
    let mut names = Vec::new();
    if kk >= 2 {
        gens.push(Perm::from_cycles(kk, &[&[1, 2]]));
        names.push("t".to_string());
    }
    if kk >= 3 {
        let cycle: Vec<u8> = (1..=k as u8).collect();
        gens.push(Perm::from_cycles(kk, &[&cycle]));
        names.push("c".to_string());
    }
    let r = CayleyTable::generate(Perm::identity(kk), &gens, |a, b| a.then(b))?;
    let labels = r.elements.iter().map(Perm::cycle_string).collect();
    let group = Group::from_table(
        format!("sym:{k}"),
        r.table,
        r.generators.clone(),
        names.clone(),
        Some(labels),
    )?;
    let factorial: u64 = (1..=k as u64).product();
    let mut rel = Relations::new(&group);
    rel.holds(format!("|S_{k}| = {factorial}"), group.order() as u64 == factorial);
    let relations = rel.checks;
    let designated = names.into_iter().zip(r.generators).collect();
    let expected = ExpectedProfile {
        order: factorial,
        ..Default::default()
    };
    finish(GroupSpec::Symmetric { k }, group, designated, expected, relations, None)
}

fn factor_of_order_p3(p: u32, kind: ExtraspecialKind) -> Result<(CatalogEntry, Elem)> {
    let entry = match kind {
        ExtraspecialKind::Heis => heisenberg(p)?,
        ExtraspecialKind::Modular => modular_p3(p)?,
        ExtraspecialKind::D8 => dihedral(8)?,
        ExtraspecialKind::Q8 => quaternion8()?,
    };
    let z = match kind {
        ExtraspecialKind::Heis | ExtraspecialKind::Modular => entry.named("z").unwrap(),
        ExtraspecialKind::D8 => entry.group.pow(entry.named("a").unwrap(), 2),
        ExtraspecialKind::Q8 => entry.named("-1").unwrap(),
    };
    Ok((entry, z))
}

/// Extraspecial group of order `p^{1+2m}` as `F1 ∘ (F2 ∘ (... ∘ Fm))` over
/// identified centers. For `m = 1` this is the single factor.
pub fn extraspecial(p: u32, m: u32, kind: ExtraspecialKind) -> Result<CatalogEntry> {
    let odd_kind = matches!(kind, ExtraspecialKind::Heis | ExtraspecialKind::Modular);
    if p == 2 && odd_kind || p != 2 && !odd_kind {
        return Err(Error::param(format!(
            "kind {} does not apply to p = {p}",
            kind.as_str()
        )));
    }
    if m == 0 {
        return Err(Error::param("extraspecial requires m >= 1"));
    }
    let entry = extraspecial_from(p, m, kind, 1)?;
    let spec = GroupSpec::Extraspecial { p, m, kind };
    let g = &entry.group;
    let z = entry.named("z").unwrap();
    let zg = center(g);
    let derived = derived_subgroup(g)?;
    let mut rel = Relations::new(g);
    rel.holds(format!("|Z(G)| = {p}"), zg.len() == p as usize && zg.contains(z));
    rel.holds("G' = Z(G)", derived == zg);
    let frattini_quotient_elementary = g.elements().all(|e| zg.contains(g.pow(e, p as i64)));
    rel.holds("G/Z(G) elementary abelian", frattini_quotient_elementary);
    let relations = rel.checks;
    let expected = ExpectedProfile {
        order: (p as u64).pow(1 + 2 * m),
        class: Some(2),
        center_order: Some(p as usize),
        derived_order: Some(p as usize),
    };
    let group = entry.group;
    let central = entry.central;
    let mut designated = entry.designated;
    designated.retain(|(n, _)| n != "z");
    designated.push(("z".into(), z));
    finish(spec, group, designated, expected, relations, central)
}

fn extraspecial_from(p: u32, m: u32, kind: ExtraspecialKind, first: u32) -> Result<CatalogEntry> {
    let (f1, z1) = factor_of_order_p3(p, kind)?;
    let suffix = |entry: &CatalogEntry, idx: u32| -> Vec<(String, Elem)> {
        entry
            .group
            .generator_names()
            .iter()
            .zip(entry.group.generators())
            .map(|(n, &g)| (format!("{n}{idx}"), g))
            .collect()
    };
    if m == 1 {
        let mut entry = f1.clone();
        let mut designated = suffix(&f1, first);
        designated.push(("z".into(), z1));
        entry.designated = designated;
        return Ok(entry);
    }
    let rest = extraspecial_from(p, m - 1, kind.rest(), first + 1)?;
    let z_rest = rest.named("z").unwrap();
    let name = format!("extraspecial:p={p},m={m},kind={}", kind.as_str());
    let cp = central_product(&f1.group, &rest.group, z1, z_rest, name.clone())?;
    let mut names: Vec<String> = suffix(&f1, first).into_iter().map(|(n, _)| n).collect();
    names.extend(rest.designated.iter().filter(|(n, _)| n != "z").map(|(n, _)| n.clone()));
    let table = cp.group.as_table().unwrap().clone();
    let generators = cp.group.generators().to_vec();
    if generators.len() != names.len() {
        return Err(Error::Relation {
            name,
            relation: "one quotient generator per factor generator".into(),
        });
    }
    let group = Group::from_table(name, table, generators.clone(), names.clone(), None)?;
    let cp = CentralProduct {
        group: group.clone(),
        ..cp
    };
    let mut designated: Vec<(String, Elem)> = names.into_iter().zip(generators).collect();
    designated.push(("z".into(), cp.embed_h(z1)));
    let expected = ExpectedProfile {
        order: group.order() as u64,
        ..Default::default()
    };
    Ok(CatalogEntry {
        spec: GroupSpec::Extraspecial { p, m, kind },
        group,
        designated,
        expected,
        relations: Vec::new(),
        central: Some((cp, Box::new(f1))),
    })
}

fn product(parts: &[GroupSpec]) -> Result<CatalogEntry> {
    let entries = parts.iter().map(build).collect::<Result<Vec<_>>>()?;
    let mut group = entries[0].group.clone();
    for e in &entries[1..] {
        group = crate::group::direct_product(&group, &e.group)?;
    }
    let designated = group
        .generator_names()
        .iter()
        .cloned()
        .zip(group.generators().iter().copied())
        .collect();
    let expected = ExpectedProfile {
        order: entries.iter().map(|e| e.group.order() as u64).product(),
        ..Default::default()
    };
    finish(
        GroupSpec::Product(parts.to_vec()),
        group,
        designated,
        expected,
        Vec::new(),
        None,
    )
}

/// Groups over which the inner-congruence characterization of abelian
/// groups is checked.
pub fn congruence_catalog() -> Vec<GroupSpec> {
    [
        "cyclic:1",
        "cyclic:9",
        "abelian:9,9",
        "product:cyclic:4|cyclic:6",
        "sym:3",
        "sym:4",
        "dihedral:8",
        "dihedral:16",
        "q8",
        "heisenberg:3",
        "modular:3",
        "theorem_a:n=2,p=3",
        "two_group:n=2",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

/// Groups of order at most 512 whose full automorphism group is enumerated
/// for the invariant suite.
pub fn invariant_catalog() -> Vec<GroupSpec> {
    let mut specs = congruence_catalog();
    specs.extend(
        [
            "cyclic:3",
            "sym:5",
            "extraspecial:p=2,m=2,kind=d8",
            "extraspecial:p=2,m=2,kind=q8",
        ]
        .iter()
        .map(|s| s.parse::<GroupSpec>().unwrap()),
    );
    specs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "theorem_a:n=2,p=3",
            "dihedral:16",
            "q8",
            "heisenberg:3",
            "modular:3",
            "two_group:n=3",
            "extraspecial:p=3,m=2,kind=heis",
            "sym:3",
            "product:cyclic:3|sym:3",
            "abelian:9,9",
        ] {
            assert_eq!(s.parse::<GroupSpec>().unwrap().to_string(), s);
        }
        assert!("theorem_a:n=2".parse::<GroupSpec>().is_err());
        assert!("nonsense".parse::<GroupSpec>().is_err());
        assert!("extraspecial:p=3,m=2,kind=zz".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn theorem_a_orders() {
        assert_eq!(theorem_a_group(2, 3).unwrap().group.order(), 243);
        assert_eq!(theorem_a_group(3, 3).unwrap().group.order(), 6561);
        assert_eq!(theorem_a_group(2, 5).unwrap().group.order(), 3125);
        assert!(theorem_a_group(1, 3).is_err());
        assert!(theorem_a_group(2, 2).is_err());
        assert!(theorem_a_group(2, 9).is_err());
    }

    #[test]
    fn theorem_a_profile() {
        let e = theorem_a_group(2, 3).unwrap();
        let c = e.computed_profile().unwrap();
        assert_eq!(c, e.expected);
        assert_eq!(c.class, Some(2));
        assert_eq!(c.derived_order, Some(9));
    }

    #[test]
    fn two_group_orders_and_relation() {
        let e2 = two_group_family(2).unwrap();
        assert_eq!(e2.group.order(), 32);
        let e3 = two_group_family(3).unwrap();
        assert_eq!(e3.group.order(), 256);
        assert!(e3.relations.iter().any(|r| r.relation == "a^x = a^3" && r.holds));
        assert!(two_group_family(1).is_err());
    }

    #[test]
    fn small_families() {
        let d = dihedral(16).unwrap();
        let g = &d.group;
        let (a, x) = (d.named("a").unwrap(), d.named("x").unwrap());
        assert_eq!(g.element_order(a), 8);
        assert_eq!(g.element_order(x), 2);
        assert_eq!(g.conj(a, x), g.inv(a));
        // x a⁻¹ = a x
        assert_eq!(g.mul(x, g.inv(a)), g.mul(a, x));
        assert!(dihedral(4).is_err() && dihedral(12).is_err());

        let h = heisenberg(3).unwrap();
        assert_eq!(h.group.order(), 27);
        assert_eq!(h.computed_profile().unwrap(), h.expected);

        let q = quaternion8().unwrap();
        let (i, j) = (q.named("i").unwrap(), q.named("j").unwrap());
        assert_eq!(q.group.label(q.group.conj(i, j)), "-i");
        assert_eq!(q.group.pow(i, 2), q.group.pow(j, 2));

        let m = modular_p3(3).unwrap();
        assert_eq!(m.computed_profile().unwrap(), m.expected);
        assert!(modular_p3(2).is_err());

        assert_eq!(symmetric(4).unwrap().group.order(), 24);
        assert!(symmetric(6).is_err());
    }

    #[test]
    fn extraspecial_entries() {
        let single = extraspecial(3, 1, ExtraspecialKind::Heis).unwrap();
        assert_eq!(single.group.order(), 27);
        let e = extraspecial(3, 2, ExtraspecialKind::Heis).unwrap();
        assert_eq!(e.group.order(), 243);
        assert_eq!(e.computed_profile().unwrap(), e.expected);
        assert!(e.central.is_some());
        let names: Vec<&str> = e.designated.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["x1", "y1", "x2", "y2", "z"]);
        for kind in [ExtraspecialKind::D8, ExtraspecialKind::Q8] {
            let e = extraspecial(2, 2, kind).unwrap();
            assert_eq!(e.group.order(), 32);
            assert_eq!(e.computed_profile().unwrap(), e.expected);
        }
        assert_eq!(
            extraspecial(3, 2, ExtraspecialKind::Modular).unwrap().group.order(),
            243
        );
        assert!(extraspecial(2, 2, ExtraspecialKind::Heis).is_err());
        assert!(extraspecial(3, 0, ExtraspecialKind::Heis).is_err());
    }

    #[test]
    fn products_multiply_orders() {
        let e = build(&"product:cyclic:4|cyclic:6".parse().unwrap()).unwrap();
        assert_eq!(e.group.order(), 24);
        assert!(e.group.is_abelian());
    }
}
