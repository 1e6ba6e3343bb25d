use rayon::prelude::*;

use super::{CheckId, Mode, VerificationReport, VerifyOptions};
use crate::automorphisms::{
    enumerate_bruteforce, enumerate_structured, Automorphism, StructuredCounts, StructuredEnumerator, StructuredScratch,
};
use crate::constructions::{theorem_a_group, CatalogEntry};
use crate::error::{Error, Result};
use crate::group::{closure, derived_subgroup, is_normal, nilpotency_class, Elem, Group, Nilpotency, ScalarSemidirect};
use crate::twisted::TwistedScratch;

/// First failure of one per-automorphism assertion, with the failure count.
#[derive(Clone, Debug, Default)]
struct Failures {
    count: u64,
    first: Option<String>,
}

impl Failures {
    fn record(&mut self, witness: impl FnOnce() -> String) {
        if self.first.is_none() {
            self.first = Some(witness());
        }
        self.count += 1;
    }

    fn merge(&mut self, other: Failures) {
        if self.first.is_none() {
            self.first = other.first;
        }
        self.count += other.count;
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    scanned: u64,
    not_subgroup: Failures,
    a_not_invariant: Failures,
    x_not_in_ax: Failures,
    b_not_subgroup: Failures,
    bv_mismatch: Failures,
    normal: u64,
    structured: StructuredCounts,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.scanned += other.scanned;
        self.not_subgroup.merge(other.not_subgroup);
        self.a_not_invariant.merge(other.a_not_invariant);
        self.x_not_in_ax.merge(other.x_not_in_ax);
        self.b_not_subgroup.merge(other.b_not_subgroup);
        self.bv_mismatch.merge(other.bv_mismatch);
        self.normal += other.normal;
        self.structured.add(&other.structured);
    }
}

/// Per-automorphism checks on `G(n, p) = A ⋊ <x>`.
struct Frame {
    group: Group,
    a_elems: Vec<Elem>,
    x: Elem,
    with_normality: bool,
}

impl Frame {
    fn new(entry: &CatalogEntry, with_normality: bool) -> Frame {
        let group = entry.group.clone();
        let sd = sd(&group);
        let a_elems = group.elements().filter(|&c| sd.in_a(c)).collect();
        let x = sd.index(0, 0, 1);
        Frame {
            group,
            a_elems,
            x,
            with_normality,
        }
    }

    fn describe(&self, images: &[Elem]) -> String {
        let g = &self.group;
        g.generator_names()
            .iter()
            .zip(images)
            .map(|(name, &img)| format!("{name} -> {}", g.label(img)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn examine(&self, scratch: &mut TwistedScratch, perm: &[Elem], images: &[Elem], tally: &mut Tally) {
        let g = &self.group;
        let sd = sd(g);
        tally.scanned += 1;
        let d = scratch.displacement(g, perm, self.with_normality);
        if let Some((l, r)) = d.test.witness() {
            tally.not_subgroup.record(|| {
                format!(
                    "phi: {}; {} * {} = {} is not a displacement",
                    self.describe(images),
                    g.label(l),
                    g.label(r),
                    g.label(g.mul(l, r))
                )
            });
        }
        if d.normal == Some(true) {
            tally.normal += 1;
        }
        if let Some(&c) = self.a_elems.iter().find(|&&c| !sd.in_a(perm[c as usize])) {
            tally.a_not_invariant.record(|| {
                format!(
                    "phi: {}; phi({}) = {} lies outside A",
                    self.describe(images),
                    g.label(c),
                    g.label(perm[c as usize])
                )
            });
        }
        let phi_x = perm[self.x as usize];
        if sd.coords(phi_x)[2] != 1 {
            tally
                .x_not_in_ax
                .record(|| format!("phi: {}; phi(x) = {}", self.describe(images), g.label(phi_x)));
        }
        let bv = scratch.bv_decomposition(g, &self.a_elems, self.x);
        if !bv.b_is_subgroup {
            tally
                .b_not_subgroup
                .record(|| format!("phi: {}; |B| = {}", self.describe(images), bv.b_len));
        }
        if !bv.matches {
            tally.bv_mismatch.record(|| {
                format!(
                    "phi: {}; |B| = {}, |V| = {}, |[G,phi]| = {}",
                    self.describe(images),
                    bv.b_len,
                    bv.v_len,
                    d.len
                )
            });
        }
    }
}

fn sd(group: &Group) -> &ScalarSemidirect {
    group.as_semidirect().expect("theorem_a groups are normal-form")
}

fn gn_params(report: &mut VerificationReport, n: u32, p: u32) {
    report.param("n", n).param("p", p);
}

/// Class and derived-subgroup assertions.
fn group_facts(report: &mut VerificationReport, entry: &CatalogEntry, n: u32, p: u32) -> Result<()> {
    let g = &entry.group;
    let class = nilpotency_class(g)?;
    report.check_detail(
        "nilpotency class equals n",
        class == Nilpotency::Class(n as usize),
        match class {
            Nilpotency::Class(c) => format!("class {c}"),
            Nilpotency::NotNilpotent => "not nilpotent".into(),
        },
        || format!("computed {class:?}, expected class {n}"),
    );
    let (a, b) = (entry.named("a").unwrap(), entry.named("b").unwrap());
    let expected = closure(g, &[g.pow(a, p as i64), g.pow(b, p as i64)])?;
    let derived = derived_subgroup(g)?;
    report.count("derived_subgroup_order", derived.len() as u64);
    report.check("derived subgroup equals <a^p, b^p>", derived == expected, || {
        format!("|G'| = {}, |<a^p, b^p>| = {}", derived.len(), expected.len())
    });
    Ok(())
}

enum Aspects {
    All,
    Bv,
}

fn per_automorphism(report: &mut VerificationReport, tally: &Tally, aspects: Aspects) {
    let scanned = tally.scanned;
    report.count("automorphisms_scanned", scanned);
    let mut put = |name: &str, f: &Failures| {
        report.check_detail(
            name,
            f.count == 0 && scanned > 0,
            format!("{} of {scanned}", scanned - f.count),
            || f.first.clone().unwrap_or_else(|| "no automorphisms scanned".into()),
        );
    };
    if matches!(aspects, Aspects::All) {
        put("every displacement set is a subgroup", &tally.not_subgroup);
        put("every automorphism maps A into A", &tally.a_not_invariant);
        put("every automorphism maps x into A x", &tally.x_not_in_ax);
    }
    put("B = [A, phi] is a subgroup", &tally.b_not_subgroup);
    put("B . <[x, phi]> equals the displacement set", &tally.bv_mismatch);
}

fn structured_counts(report: &mut VerificationReport, c: &StructuredCounts) {
    report
        .count("candidates", c.candidates)
        .count("validated", c.validated)
        .count("rejected", c.rejected);
    if c.singular_draws > 0 {
        report.count("singular_draws", c.singular_draws);
    }
}

/// The brute-force automorphism group, through the cache when one is set.
fn bruteforce(entry: &CatalogEntry, opts: &VerifyOptions) -> Result<Vec<Automorphism>> {
    match &opts.cache {
        Some(cache) => cache.load_or_enumerate(&entry.group, &entry.descriptor(), opts.budget),
        None => enumerate_bruteforce(&entry.group, opts.budget),
    }
}

fn scan(
    entry: &CatalogEntry,
    mode: Mode,
    opts: &VerifyOptions,
    report: &mut VerificationReport,
) -> Result<Option<Tally>> {
    let g = &entry.group;
    let frame = Frame::new(entry, mode == Mode::Exhaustive);
    match mode {
        Mode::Exhaustive => {
            let brute = match bruteforce(entry, opts) {
                Ok(a) => a,
                Err(Error::Budget { what, budget }) => {
                    report.incomplete(format!("budget of {budget} exhausted during {what}"));
                    return Ok(None);
                }
                Err(e) => return Err(e),
            };
            let (structured, counts) = enumerate_structured(g)?;
            let agree =
                structured.len() == brute.len() && structured.iter().zip(&brute).all(|(s, b)| s.perm() == b.perm());
            report.count("bruteforce_automorphisms", brute.len() as u64);
            report.check_detail(
                "structured enumeration equals brute force",
                agree,
                format!("{} structured, {} brute force", structured.len(), brute.len()),
                || match structured.iter().zip(&brute).find(|(s, b)| s.perm() != b.perm()) {
                    Some((s, b)) => format!(
                        "first difference: structured {} vs brute force {}",
                        frame.describe(s.gen_images()),
                        frame.describe(b.gen_images())
                    ),
                    None => format!("{} structured vs {} brute force", structured.len(), brute.len()),
                },
            );
            let mut tally = Tally {
                structured: counts,
                ..Tally::default()
            };
            let mut scratch = TwistedScratch::new(g.order());
            for phi in &brute {
                frame.examine(&mut scratch, phi.perm(), phi.gen_images(), &mut tally);
            }
            Ok(Some(tally))
        }
        Mode::Structured => {
            let e = StructuredEnumerator::new(g)?;
            let run = |scratch: &mut (StructuredScratch, TwistedScratch), chunk: usize| {
                let mut tally = Tally::default();
                let (enum_scratch, twisted) = scratch;
                tally.structured = e.visit_chunk(chunk, enum_scratch, |phi| {
                    frame.examine(twisted, phi.perm(), phi.gen_images(), &mut tally);
                });
                tally
            };
            let fresh = || (StructuredScratch::new(g.order()), TwistedScratch::new(g.order()));
            let parts: Vec<Tally> = opts.install(|| {
                if opts.workers <= 1 {
                    let mut s = fresh();
                    (0..e.chunks()).map(|c| run(&mut s, c)).collect()
                } else {
                    (0..e.chunks()).into_par_iter().map_init(fresh, run).collect()
                }
            })?;
            let mut tally = Tally::default();
            for t in parts {
                tally.merge(t);
            }
            Ok(Some(tally))
        }
        Mode::Sampled { samples } => {
            let seed = opts.require_seed("sampled mode")?;
            report.seed = Some(seed);
            report.sample_size = Some(samples);
            let e = StructuredEnumerator::new(g)?;
            let mut tally = Tally::default();
            let mut scratch = TwistedScratch::new(g.order());
            let counts = e.sample(samples, seed, samples.saturating_mul(100).max(1000), |phi| {
                frame.examine(&mut scratch, phi.perm(), phi.gen_images(), &mut tally);
            });
            match counts {
                Ok(c) => tally.structured = c,
                Err(Error::Budget { what, budget }) => {
                    report.incomplete(format!("budget of {budget} exhausted during {what}"));
                }
                Err(e) => return Err(e),
            }
            Ok(Some(tally))
        }
    }
}

/// Displacement sets of `G(n, p)` in the given mode, with the structural
/// facts the argument rests on: `φ(A) ⊆ A`, `φ(x) ∈ A x`, and
/// `[G, φ] = B · V`.
pub fn check_theorem_a(n: u32, p: u32, mode: Mode, opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(CheckId::TheoremA.as_str(), CheckId::TheoremA.claim());
    gn_params(&mut report, n, p);
    report.param("mode", mode.name());
    let entry = theorem_a_group(n, p)?;
    report.count("group_order", entry.group.order() as u64);
    group_facts(&mut report, &entry, n, p)?;
    if let Some(tally) = scan(&entry, mode, opts, &mut report)? {
        per_automorphism(&mut report, &tally, Aspects::All);
        if mode == Mode::Exhaustive {
            report.count("normal_displacements", tally.normal);
        }
        structured_counts(&mut report, &tally.structured);
    }
    Ok(report)
}

/// Only the `B · V` assertions of [`check_theorem_a`].
pub fn check_bv_decomposition(n: u32, p: u32, mode: Mode, opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(CheckId::BvDecomposition.as_str(), CheckId::BvDecomposition.claim());
    gn_params(&mut report, n, p);
    report.param("mode", mode.name());
    let entry = theorem_a_group(n, p)?;
    if let Some(tally) = scan(&entry, mode, opts, &mut report)? {
        per_automorphism(&mut report, &tally, Aspects::Bv);
    }
    Ok(report)
}

/// Group-level structure of `G(n, p)`.
pub fn check_theorem_a_structure(n: u32, p: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(CheckId::TheoremAStructure.as_str(), CheckId::TheoremAStructure.claim());
    gn_params(&mut report, n, p);
    let entry = theorem_a_group(n, p)?;
    let g = &entry.group;
    let sd = sd(g);
    report.count("group_order", g.order() as u64);
    group_facts(&mut report, &entry, n, p)?;
    let q = (p as u64).pow(n) as usize;
    let derived = report.counts["derived_subgroup_order"];
    report.check_detail(
        "|G'| = p^(2(n-1))",
        derived == (p as u64).pow(2 * (n - 1)),
        derived.to_string(),
        || format!("|G'| = {derived}"),
    );
    let a_elems: Vec<Elem> = g.elements().filter(|&c| sd.in_a(c)).collect();
    let x = sd.index(0, 0, 1);
    let s = 1 + p as i64;
    let bad_action = a_elems.iter().copied().find(|&c| g.conj(c, x) != g.pow(c, s));
    report.check(format!("x acts on A as c -> c^{s}"), bad_action.is_none(), || {
        let c = bad_action.unwrap();
        format!("x^-1 {} x = {}", g.label(c), g.label(g.conj(c, x)))
    });
    report.count("a_order", a_elems.len() as u64);
    report.check("|A| = p^(2n)", a_elems.len() == q * q, || {
        format!("|A| = {}", a_elems.len())
    });
    let mut checked = 0u64;
    let mut not_normal = None;
    for &c in &a_elems {
        let sub = closure(g, &[c])?;
        checked += 1;
        if !is_normal(g, &sub) {
            not_normal = Some(c);
            break;
        }
    }
    report.count("cyclic_subgroups_checked", checked);
    report.check("<c> is normal for every c in A", not_normal.is_none(), || {
        format!("<{}> is not normal", g.label(not_normal.unwrap()))
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g23_exhaustive_passes() {
        let r = check_theorem_a(2, 3, Mode::Exhaustive, &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.counts["automorphisms_scanned"], 34992);
    }

    #[test]
    fn sampled_needs_a_seed() {
        let err = check_theorem_a(2, 3, Mode::Sampled { samples: 10 }, &VerifyOptions::default());
        assert!(err.is_err());
        let opts = VerifyOptions {
            seed: Some(1),
            ..VerifyOptions::default()
        };
        let r = check_theorem_a(2, 3, Mode::Sampled { samples: 10 }, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.seed, Some(1));
    }

    #[test]
    fn structure_of_g23() {
        let r = check_theorem_a_structure(2, 3).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.counts["derived_subgroup_order"], 9);
    }
}
