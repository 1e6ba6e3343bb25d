use super::{VerificationReport, VerifyOptions};
use crate::automorphisms::{enumerate_bruteforce, Automorphism};
use crate::constructions::{build, GroupSpec};
use crate::error::Result;
use crate::group::{center, Group, IDENTITY};
use crate::twisted::{is_congruence, twisted_partition, TwistedScratch};

/// Check id of [`check_invariants`]; not part of the `verify` suite.
pub const INVARIANTS_ID: &str = "invariants";
const INVARIANTS_CLAIM: &str =
    "|[1]_phi| |C_G(phi)| = |G|, R(id) = #conjugacy classes, central => subgroup, abelian => congruence, automorphisms preserve orders";

/// Conjugacy classes by direct orbit computation under every element.
pub fn conjugacy_class_count(g: &Group) -> usize {
    let mut seen = vec![false; g.order()];
    let mut count = 0;
    for x in g.elements() {
        if seen[x as usize] {
            continue;
        }
        count += 1;
        for h in g.elements() {
            seen[g.conj(x, h) as usize] = true;
        }
    }
    count
}

#[derive(Default)]
struct Violations {
    index: u64,
    class_of_one: u64,
    central: u64,
    congruence: u64,
    orders: u64,
    first: Vec<(usize, String)>,
}

impl Violations {
    fn note(&mut self, slot: usize, what: impl FnOnce() -> String) {
        if !self.first.iter().any(|(s, _)| *s == slot) {
            self.first.push((slot, what()));
        }
    }
}

/// Invariants over every brute-force automorphism of each group in `specs`.
pub fn check_invariants(specs: &[GroupSpec], opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(INVARIANTS_ID, INVARIANTS_CLAIM);
    let mut total = 0u64;
    let mut central_count = 0u64;
    for spec in specs {
        let entry = build(spec)?;
        let g = &entry.group;
        let auts = match &opts.cache {
            Some(cache) => cache.load_or_enumerate(g, &entry.descriptor(), opts.budget)?,
            None => enumerate_bruteforce(g, opts.budget)?,
        };
        let v = sweep(g, &auts, &mut central_count)?;
        total += auts.len() as u64;
        let classes = conjugacy_class_count(g);
        let r_id = twisted_partition(g, &Automorphism::identity(g))?.reidemeister_number();
        report.check_detail(
            format!("{spec}: R(id) = number of conjugacy classes"),
            r_id == classes,
            r_id.to_string(),
            || format!("R(id) = {r_id}, conjugacy classes = {classes}"),
        );
        let witness = |slot: usize| {
            v.first
                .iter()
                .find(|(s, _)| *s == slot)
                .map(|(_, w)| w.clone())
                .unwrap_or_default()
        };
        let n = auts.len() as u64;
        report.check_detail(
            format!("{spec}: |[1]_phi| |C_G(phi)| = |G|"),
            v.index == 0,
            format!("{n} automorphisms"),
            || witness(0),
        );
        report.check(
            format!("{spec}: [1]_phi is the displacement set"),
            v.class_of_one == 0,
            || witness(1),
        );
        report.check(
            format!("{spec}: central automorphisms have subgroup displacement sets"),
            v.central == 0,
            || witness(2),
        );
        if g.is_abelian() {
            report.check(
                format!("{spec}: every automorphism gives congruence classes"),
                v.congruence == 0,
                || witness(3),
            );
        }
        report.check(
            format!("{spec}: automorphisms preserve element orders"),
            v.orders == 0,
            || witness(4),
        );
    }
    report
        .count("groups_scanned", specs.len() as u64)
        .count("automorphisms_scanned", total)
        .count("central_automorphisms", central_count);
    Ok(report)
}

fn sweep(g: &Group, auts: &[Automorphism], central_count: &mut u64) -> Result<Violations> {
    let mut v = Violations::default();
    let mut scratch = TwistedScratch::new(g.order());
    let z = center(g);
    let orders = g.element_orders();
    let abelian = g.is_abelian();
    for (i, phi) in auts.iter().enumerate() {
        let perm = phi.perm();
        let d = scratch.displacement(g, perm, false);
        let fixed = g.elements().filter(|&x| perm[x as usize] == x).count();
        let label = || {
            format!(
                "automorphism {i} with generator images ({})",
                g.labels(phi.gen_images()).join(", ")
            )
        };
        if d.len * fixed != g.order() {
            v.index += 1;
            v.note(0, || format!("{}: |D| = {}, |C| = {fixed}", label(), d.len));
        }
        let partition = twisted_partition(g, phi)?;
        if partition.class_of(IDENTITY) != scratch.members() {
            v.class_of_one += 1;
            v.note(1, || {
                format!("{}: class of 1 differs from the displacement set", label())
            });
        }
        if scratch.members().iter().all(|&u| z.contains(u)) {
            *central_count += 1;
            if !d.test.is_subgroup() {
                v.central += 1;
                v.note(2, || format!("{}: central, displacement not a subgroup", label()));
            }
        }
        if abelian && !is_congruence(g, phi)?.holds {
            v.congruence += 1;
            v.note(3, || {
                format!("{}: classes are not cosets of the displacement set", label())
            });
        }
        if let Some(x) = g
            .elements()
            .find(|&x| orders[perm[x as usize] as usize] != orders[x as usize])
        {
            v.orders += 1;
            v.note(4, || format!("{}: |{}| != |phi({})|", label(), g.label(x), g.label(x)));
        }
    }
    Ok(v)
}
