//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use twisted_core::constructions::invariant_catalog;
use twisted_core::verify::{
    check_bv_decomposition, check_counterexamples, check_direct_product, check_inner_congruence, check_invariants,
    check_power_formula, check_regularity, check_s3_example, check_theorem_a, check_theorem_a_structure, Mode,
    VerificationReport, VerifyOptions,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_reports(reports: &[VerificationReport]) -> Outcome {
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            let status = (!r.passed()).then(|| format!("{} is {}", r.check_id, r.status));
            status
                .into_iter()
                .chain(r.failed_assertions().map(|a| format!("{}: {}", r.check_id, a.name)))
        })
        .collect();
    Outcome {
        ok: failed.is_empty(),
        detail: if failed.is_empty() {
            reports.iter().map(summary).collect::<Vec<_>>().join("; ")
        } else {
            failed.join("; ")
        },
    }
}

fn summary(r: &VerificationReport) -> String {
    let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!(
        "{} [{}] {} assertions",
        r.check_id,
        params.join(" "),
        r.assertions.len()
    )
}

fn require(mut o: Outcome, cond: bool, what: &str) -> Outcome {
    if !cond {
        o.ok = false;
        o.detail = format!("{what}; {}", o.detail);
    }
    o
}

fn seeded() -> VerifyOptions {
    VerifyOptions {
        seed: Some(42),
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..Default::default()
    }
}

fn c1() -> Outcome {
    from_reports(&[check_s3_example().unwrap()])
}

fn c2() -> Outcome {
    from_reports(&[check_inner_congruence(None).unwrap()])
}

fn c3() -> Outcome {
    let opts = VerifyOptions::default();
    let a = check_theorem_a(2, 3, Mode::Exhaustive, &opts).unwrap();
    let bv = check_bv_decomposition(2, 3, Mode::Exhaustive, &opts).unwrap();
    let s = check_theorem_a_structure(2, 3).unwrap();
    let derived = s.counts.get("derived_subgroup_order").copied();
    let scanned = a.counts.get("automorphisms_scanned").copied().unwrap_or(0);
    let o = from_reports(&[a, bv, s]);
    let o = require(o, derived == Some(9), "|G'| != 9");
    require(o, scanned > 0, "no automorphisms scanned")
}

fn c4() -> Outcome {
    let opts = seeded();
    let g25 = check_theorem_a(2, 5, Mode::Structured, &opts).unwrap();
    let g33 = check_theorem_a(3, 3, Mode::Sampled { samples: 10_000 }, &opts).unwrap();
    let validated = g33.counts.get("validated").copied().unwrap_or(0);
    let seed = g33.seed;
    let o = from_reports(&[g25, g33]);
    let o = require(o, validated >= 10_000, "fewer than 10^4 validated samples");
    require(o, seed == Some(42), "seed not recorded")
}

fn c5() -> Outcome {
    from_reports(&[check_counterexamples().unwrap()])
}

fn c6() -> Outcome {
    from_reports(&[check_power_formula(3).unwrap()])
}

fn c7() -> Outcome {
    let r = check_regularity(None).unwrap();
    let pairs = r.counts.get("pairs_checked").copied();
    require(
        from_reports(&[r]),
        pairs == Some(59049),
        "pair count differs from 59049",
    )
}

fn c8() -> Outcome {
    from_reports(&[check_invariants(&invariant_catalog(), &VerifyOptions::default()).unwrap()])
}

fn c9() -> Outcome {
    let r = check_direct_product(100, &seeded()).unwrap();
    let pairs = r.counts.get("pairs_checked").copied();
    require(from_reports(&[r]), pairs == Some(100), "fewer than 100 pairs")
}

fn c10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_twisted"))
            .args(["verify", "all", "--seed", "42", "--format", "json", "--cache-dir"])
            .arg(dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    let identical = first.stdout == second.stdout && !first.stdout.is_empty();
    Outcome {
        ok: identical && first.status.success() && second.status.success(),
        detail: format!(
            "{} bytes, exit codes {:?} and {:?}, {}",
            first.stdout.len(),
            first.status.code(),
            second.status.code(),
            if identical { "byte-identical" } else { "outputs differ" }
        ),
    }
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "S3 example", Some(Duration::from_secs(1)), c1),
        (2, "inner congruence iff abelian", Some(Duration::from_secs(60)), c2),
        (3, "G(2,3) exhaustive", Some(Duration::from_secs(600)), c3),
        (4, "G(2,5) structured and G(3,3) sampled", None, c4),
        (5, "counterexample suite", Some(Duration::from_secs(60)), c5),
        (6, "power formula", Some(Duration::from_secs(10)), c6),
        (7, "regularity of G(2,3)", Some(Duration::from_secs(120)), c7),
        (8, "invariant suite", Some(Duration::from_secs(300)), c8),
        (9, "coprime direct product", Some(Duration::from_secs(60)), c9),
        (10, "determinism of verify all", None, c10),
    ];
    let only: Vec<u32> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failures = 0;
    for (n, name, limit, f) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let mut o = f();
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took > limit {
                o.ok = false;
                o.detail = format!("took longer than {}s; {}", limit.as_secs(), o.detail);
            }
        }
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {n:>2} {mark} {name} ({:.1}s): {}",
            took.as_secs_f64(),
            o.detail
        );
        failures += usize::from(!o.ok);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
