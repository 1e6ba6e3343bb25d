//! Command-line front end for `twisted-core`.
//!
//! [`run`] parses arguments, runs one subcommand and returns the process
//! exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; for `verify`, every assertion held |
//! | 1 | at least one verification assertion failed |
//! | 2 | usage or construction error |
//! | 3 | budget exhausted, incomplete check or corrupt cache entry |

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twisted_core::automorphisms::cache::AutCache;
use twisted_core::automorphisms::{
    enumerate_bruteforce, from_generator_images, inner, named_automorphism, Automorphism, NamedLabel, Provenance,
    StructuredEnumerator, DEFAULT_BUDGET,
};
use twisted_core::constructions::{build, CatalogEntry, GroupSpec};
use twisted_core::group::{center, nilpotency_class, normal_closure, Elem, Group, Nilpotency};
use twisted_core::twisted::{displacement_set, fixed_subgroup, is_congruence, twisted_partition};
use twisted_core::verify::{
    run_all, run_check, CheckId, CheckRequest, Mode, Status, SuiteReport, VerificationReport, VerifyOptions,
};
use twisted_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

/// Members printed before a set is abbreviated in human output.
const SHOW_LIMIT: usize = 64;
/// Groups above this order skip the nilpotency class in `info`.
const CLASS_LIMIT: usize = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "twisted",
    version,
    about = "Twisted conjugacy in finite groups: constructions, automorphisms, displacement sets and claim checks"
)]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Seed for sampled modes and cache revalidation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Automorphism cache directory (default: $TWISTED_CACHE_DIR or .twisted-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the automorphism cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Node budget for brute-force automorphism searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Record wall-clock time in reports (breaks byte-identical output).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a catalog group and print its structure.
    Info {
        #[arg(long)]
        group: String,
    },
    /// Enumerate the automorphisms of a group.
    Automorphisms {
        #[arg(long)]
        group: String,
        /// exhaustive (brute force, any group), structured or sampled (G(n,p) only).
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long)]
        samples: Option<u64>,
        /// Print the generator images of every automorphism.
        #[arg(long)]
        list: bool,
    },
    /// Displacement set, twisted classes and fixed points of one automorphism.
    Twisted {
        #[arg(long)]
        group: String,
        /// identity | inner:<elem> | named:<label>[@<elem>] | images:<elem>;<elem>;...
        #[arg(long, default_value = "identity")]
        aut: String,
        /// Print every twisted class.
        #[arg(long)]
        classes: bool,
    },
    /// Run a named check, or `all` for the suite.
    Verify {
        /// Check id or `all`.
        check: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
        /// exhaustive | structured | sampled
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        samples: Option<u64>,
        /// Group for checks that take one (inner-congruence, regularity, counterexamples).
        #[arg(long)]
        group: Option<String>,
        /// With `all`: include the complete structured pass over G(2,5).
        #[arg(long)]
        full: bool,
    },
    /// Manage the automorphism cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
    /// Look for 2-groups with a non-subgroup displacement set (no pass/fail).
    Search {
        /// Largest n of the two_group family to include.
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum CacheAction {
    /// List cached entries.
    List,
    /// Remove every cached entry.
    Clear,
    /// Verify checksums and revalidate sampled members; quarantine corrupt entries.
    Validate,
}

/// Check ids with the statement each one tests, for `--help`.
pub fn checks_help() -> String {
    let mut s = String::from("Checks:\n");
    for c in CheckId::ALL {
        s.push_str(&format!("  {:<20} {}\n", c.as_str(), c.claim()));
    }
    s.push_str("  all                  the suite above in a fixed order\n");
    s
}

fn command() -> clap::Command {
    Cli::command()
        .after_help(checks_help())
        .mut_subcommand("verify", |c| c.after_help(checks_help()))
}

/// Problems that end a run before a report is produced.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::Budget { .. } | Error::CorruptCache { .. }) => EXIT_INCOMPLETE,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Info { group } => info(g, &parse_spec(group)?, out),
        Command::Automorphisms {
            group,
            mode,
            samples,
            list,
        } => automorphisms(g, &parse_spec(group)?, mode, *samples, *list, out),
        Command::Twisted { group, aut, classes } => twisted(g, &parse_spec(group)?, aut, *classes, out),
        Command::Verify {
            check,
            n,
            p,
            mode,
            samples,
            group,
            full,
        } => {
            let spec = group.as_deref().map(parse_spec).transpose()?;
            let mode = mode.as_deref().map(|m| Mode::parse(m, *samples)).transpose()?;
            if matches!(mode, Some(Mode::Sampled { .. })) && g.seed.is_none() {
                return Err(Failure::Usage("sampled mode needs --seed".into()));
            }
            if check == "all" {
                let suite = run_all(*full, &options(g))?;
                emit_suite(g.format, &suite, out)?;
                return Ok(status_code(suite.status));
            }
            let id: CheckId = check.parse()?;
            let mut req = CheckRequest::new(id);
            req.n = *n;
            req.p = *p;
            req.mode = mode;
            req.group = spec;
            req.samples = *samples;
            let report = run_check(&req, &options(g))?;
            emit_reports(g.format, std::slice::from_ref(&report), out)?;
            Ok(status_code(report.status))
        }
        Command::Cache { action } => cache_admin(g, *action, out, err),
        Command::Search { n } => {
            let report = run_check(&CheckRequest::new(CheckId::Search).n(*n), &options(g))?;
            emit_reports(g.format, std::slice::from_ref(&report), out)?;
            Ok(status_code(report.status))
        }
    }
}

fn parse_spec(s: &str) -> Result<GroupSpec, Failure> {
    s.parse::<GroupSpec>().map_err(Failure::Core)
}

fn cache(g: &GlobalArgs) -> AutCache {
    AutCache::resolve(g.cache_dir.clone())
}

fn options(g: &GlobalArgs) -> VerifyOptions {
    VerifyOptions {
        seed: g.seed,
        workers: g.workers.max(1),
        budget: g.budget,
        cache: (!g.no_cache).then(|| cache(g)),
        timings: g.timings,
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAIL,
        Status::Incomplete => EXIT_INCOMPLETE,
    }
}

fn show_set(g: &Group, set: &[Elem]) -> String {
    let mut labels = g.labels(set.iter().take(SHOW_LIMIT));
    if set.len() > SHOW_LIMIT {
        labels.push(format!("... {} more", set.len() - SHOW_LIMIT));
    }
    format!("{{{}}}", labels.join(", "))
}

fn write_json(out: &mut dyn Write, v: &impl serde::Serialize) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(EXIT_OK)
}

/// Writes `(key, value)` rows as a two-column CSV.
fn write_pairs(out: &mut dyn Write, rows: &[(String, String)]) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["key", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn write_human(out: &mut dyn Write, rows: &[(String, String)]) -> Outcome {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    Ok(EXIT_OK)
}

fn info(g: &GlobalArgs, spec: &GroupSpec, out: &mut dyn Write) -> Outcome {
    let entry = build(spec)?;
    let grp = &entry.group;
    let gens = grp.generators();
    let comms: Vec<Elem> = gens
        .iter()
        .flat_map(|&a| gens.iter().map(move |&b| (a, b)))
        .map(|(a, b)| grp.commutator(a, b))
        .collect();
    let derived = normal_closure(grp, &comms, gens)?;
    let class = if grp.order() <= CLASS_LIMIT {
        Some(match nilpotency_class(grp)? {
            Nilpotency::Class(c) => c.to_string(),
            Nilpotency::NotNilpotent => "not nilpotent".into(),
        })
    } else {
        None
    };
    let designated: Vec<(String, String)> = entry
        .designated
        .iter()
        .map(|(n, e)| (n.clone(), grp.label(*e)))
        .collect();
    let mut rows = vec![
        ("descriptor".to_string(), entry.descriptor()),
        ("name".into(), grp.name().to_string()),
        ("order".into(), grp.order().to_string()),
        ("backend".into(), format!("{:?}", grp.backend_kind())),
        ("generators".into(), grp.generator_names().join(", ")),
        ("abelian".into(), grp.is_abelian().to_string()),
        ("center_order".into(), center(grp).len().to_string()),
        ("derived_order".into(), derived.len().to_string()),
        (
            "class".into(),
            class
                .clone()
                .unwrap_or_else(|| format!("not computed above order {CLASS_LIMIT}")),
        ),
    ];
    for (n, l) in &designated {
        rows.push((format!("element {n}"), l.clone()));
    }
    match g.format {
        Format::Human => write_human(out, &rows),
        Format::Csv => write_pairs(out, &rows),
        Format::Json => write_json(
            out,
            &json!({
                "descriptor": entry.descriptor(),
                "name": grp.name(),
                "order": grp.order(),
                "backend": format!("{:?}", grp.backend_kind()),
                "generators": grp.generator_names(),
                "abelian": grp.is_abelian(),
                "center_order": center(grp).len(),
                "derived_order": derived.len(),
                "class": class,
                "designated": designated.iter().map(|(n, l)| json!({"name": n, "element": l})).collect::<Vec<_>>(),
                "relations": entry.relations,
            }),
        ),
    }
}

fn automorphisms(
    g: &GlobalArgs,
    spec: &GroupSpec,
    mode: &str,
    samples: Option<u64>,
    list: bool,
    out: &mut dyn Write,
) -> Outcome {
    let mode = Mode::parse(mode, samples)?;
    let entry = build(spec)?;
    let grp = &entry.group;
    let mut counts: Vec<(String, String)> = Vec::new();
    let auts: Vec<Automorphism> = match mode {
        Mode::Exhaustive => {
            if g.no_cache {
                enumerate_bruteforce(grp, g.budget)?
            } else {
                cache(g).load_or_enumerate(grp, &entry.descriptor(), g.budget)?
            }
        }
        Mode::Structured => {
            let e = StructuredEnumerator::new(grp)?;
            let mut v = Vec::new();
            let c = e.visit_all(|a| v.push(a.clone()));
            counts.push(("candidates".into(), c.candidates.to_string()));
            counts.push(("rejected".into(), c.rejected.to_string()));
            v
        }
        Mode::Sampled { samples } => {
            let seed = g
                .seed
                .ok_or_else(|| Failure::Usage("sampled mode needs --seed".into()))?;
            let e = StructuredEnumerator::new(grp)?;
            let mut v = Vec::new();
            let c = e.sample(samples, seed, 100 * samples, |a| v.push(a.clone()))?;
            counts.push(("seed".into(), seed.to_string()));
            counts.push(("singular_draws".into(), c.singular_draws.to_string()));
            counts.push(("rejected".into(), c.rejected.to_string()));
            v
        }
    };
    let images = |a: &Automorphism| grp.labels(a.gen_images());
    match g.format {
        Format::Json => {
            let mut v = json!({
                "group": entry.descriptor(),
                "order": grp.order(),
                "mode": mode.name(),
                "generators": grp.generator_names(),
                "count": auts.len(),
            });
            for (k, c) in &counts {
                v[k] = json!(c.parse::<u64>().unwrap_or_default());
            }
            if list {
                v["automorphisms"] = Value::from(auts.iter().map(images).collect::<Vec<_>>());
            }
            write_json(out, &v)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(grp.generator_names())?;
            for a in &auts {
                w.write_record(images(a))?;
            }
            w.flush()?;
            Ok(EXIT_OK)
        }
        Format::Human => {
            let mut rows = vec![
                ("group".to_string(), entry.descriptor()),
                ("order".into(), grp.order().to_string()),
                ("mode".into(), mode.name().into()),
                ("automorphisms".into(), auts.len().to_string()),
            ];
            rows.extend(counts);
            write_human(out, &rows)?;
            if list {
                let names = grp.generator_names();
                for a in &auts {
                    let parts: Vec<String> = names
                        .iter()
                        .zip(images(a))
                        .map(|(n, i)| format!("{n} -> {i}"))
                        .collect();
                    writeln!(out, "{}", parts.join("; "))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `identity`, `inner:<elem>`, `named:<label>[@<elem>]` or
/// `images:<elem>;<elem>;...`.
fn parse_aut(entry: &CatalogEntry, text: &str) -> Result<Automorphism, Failure> {
    let grp = &entry.group;
    let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "identity" => Ok(Automorphism::identity(grp)),
        "inner" => Ok(inner(grp, grp.parse_element(arg)?)),
        "named" => {
            let (label, c) = match arg.split_once('@') {
                Some((l, c)) => (l, Some(grp.parse_element(c)?)),
                None => (arg, None),
            };
            let label: NamedLabel = label.parse()?;
            Ok(named_automorphism(entry, label, c)?)
        }
        "images" => {
            let images = arg
                .split(';')
                .map(|e| grp.parse_element(e))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(from_generator_images(grp, &images, Provenance::Composite).map_err(Error::from)?)
        }
        _ => Err(Failure::Usage(format!(
            "unknown automorphism `{text}`; expected identity, inner:<elem>, named:<label> or images:<e1>;<e2>;..."
        ))),
    }
}

fn twisted(g: &GlobalArgs, spec: &GroupSpec, aut: &str, show_classes: bool, out: &mut dyn Write) -> Outcome {
    let entry = build(spec)?;
    let grp = &entry.group;
    let phi = parse_aut(&entry, aut)?;
    let d = displacement_set(grp, &phi)?;
    let partition = twisted_partition(grp, &phi)?;
    let fixed = fixed_subgroup(grp, &phi)?;
    let congruence = is_congruence(grp, &phi)?;
    let escape = d.witness();
    match g.format {
        Format::Json => {
            let mut v = json!({
                "group": entry.descriptor(),
                "order": grp.order(),
                "automorphism": aut,
                "generator_images": grp.labels(phi.gen_images()),
                "displacement": grp.labels(d.members()),
                "displacement_size": d.len(),
                "is_subgroup": d.is_subgroup(),
                "is_normal": d.is_normal(),
                "fixed_subgroup_order": fixed.len(),
                "reidemeister_number": partition.reidemeister_number(),
                "congruence": congruence.holds,
            });
            if let Some((l, r)) = escape {
                v["escaping_product"] = json!([grp.label(l), grp.label(r), grp.label(grp.mul(l, r))]);
            }
            if show_classes {
                v["classes"] = Value::from(partition.classes.iter().map(|c| grp.labels(c)).collect::<Vec<_>>());
            }
            write_json(out, &v)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["class", "size", "representative", "members"])?;
            for (i, c) in partition.classes.iter().enumerate() {
                w.write_record([
                    i.to_string(),
                    c.len().to_string(),
                    grp.label(c[0]),
                    grp.labels(c).join(" | "),
                ])?;
            }
            w.flush()?;
            Ok(EXIT_OK)
        }
        Format::Human => {
            let names = grp.generator_names();
            let images: Vec<String> = names
                .iter()
                .zip(grp.labels(phi.gen_images()))
                .map(|(n, i)| format!("{n} -> {i}"))
                .collect();
            let mut rows = vec![
                (
                    "group".to_string(),
                    format!("{} (order {})", entry.descriptor(), grp.order()),
                ),
                ("automorphism".into(), format!("{aut}: {}", images.join("; "))),
                ("[G,phi]".into(), show_set(grp, d.members())),
                ("|[G,phi]|".into(), d.len().to_string()),
            ];
            match escape {
                None => {
                    let normal = if d.is_normal() == Some(true) { "normal " } else { "" };
                    rows.push(("subgroup".into(), format!("yes, a {normal}subgroup")));
                }
                Some((l, r)) => rows.push((
                    "subgroup".into(),
                    format!(
                        "not a subgroup: {} * {} = {} is outside",
                        grp.label(l),
                        grp.label(r),
                        grp.label(grp.mul(l, r))
                    ),
                )),
            }
            rows.push(("|C_G(phi)|".into(), fixed.len().to_string()));
            rows.push(("R(phi)".into(), partition.reidemeister_number().to_string()));
            rows.push(("congruence".into(), congruence.holds.to_string()));
            write_human(out, &rows)?;
            if show_classes {
                for c in &partition.classes {
                    writeln!(out, "  {}", show_set(grp, c))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn params(r: &VerificationReport) -> String {
    r.parameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn human_report(out: &mut dyn Write, r: &VerificationReport) -> io::Result<()> {
    writeln!(out, "{} [{}]: {}", r.check_id, params(r), r.status)?;
    writeln!(out, "  claim: {}", r.claim_ref)?;
    if let Some(reason) = &r.incomplete_reason {
        writeln!(out, "  incomplete: {reason}")?;
    }
    for a in &r.assertions {
        let mark = if a.holds { "ok  " } else { "FAIL" };
        match &a.detail {
            Some(d) => writeln!(out, "  {mark} {} ({d})", a.name)?,
            None => writeln!(out, "  {mark} {}", a.name)?,
        }
    }
    for w in &r.witnesses {
        writeln!(out, "  witness for `{}`: {}", w.assertion, w.description)?;
    }
    for (k, v) in &r.counts {
        writeln!(out, "  count {k} = {v}")?;
    }
    for (k, v) in &r.observations {
        writeln!(out, "  note  {k}: {v}")?;
    }
    if let Some(seed) = r.seed {
        writeln!(out, "  seed {seed}")?;
    }
    if let Some(t) = r.wall_time {
        writeln!(out, "  wall time {t:.3}s")?;
    }
    Ok(())
}

/// One row per assertion, count and observation.
fn csv_reports(out: &mut dyn Write, reports: &[VerificationReport]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check_id", "parameters", "status", "kind", "name", "value"])?;
    for r in reports {
        let p = params(r);
        let status = r.status.to_string();
        let mut row = |kind: &str, name: &str, value: String| {
            w.write_record([r.check_id.as_str(), &p, &status, kind, name, &value])
        };
        for a in &r.assertions {
            row("assertion", &a.name, a.holds.to_string())?;
        }
        for (k, v) in &r.counts {
            row("count", k, v.to_string())?;
        }
        for (k, v) in &r.observations {
            row("observation", k, v.clone())?;
        }
        if let Some(seed) = r.seed {
            row("seed", "seed", seed.to_string())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn emit_reports(format: Format, reports: &[VerificationReport], out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => {
            write_json(out, &reports[0])?;
        }
        Format::Csv => csv_reports(out, reports)?,
        Format::Human => {
            for r in reports {
                human_report(out, r)?;
            }
        }
    }
    Ok(())
}

fn emit_suite(format: Format, suite: &SuiteReport, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => {
            write_json(out, suite)?;
        }
        Format::Csv => csv_reports(out, &suite.reports)?,
        Format::Human => {
            for r in &suite.reports {
                human_report(out, r)?;
            }
            writeln!(out, "suite: {} ({} checks)", suite.status, suite.reports.len())?;
        }
    }
    Ok(())
}

fn cache_admin(g: &GlobalArgs, action: CacheAction, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cache = cache(g);
    match action {
        CacheAction::List => {
            let entries = cache.list()?;
            match g.format {
                Format::Json => write_json(out, &entries),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["descriptor", "enumerator", "count", "path"])?;
                    for e in &entries {
                        w.write_record([
                            e.header.descriptor.clone(),
                            e.header.enumerator.clone(),
                            e.header.count.to_string(),
                            e.path.display().to_string(),
                        ])?;
                    }
                    w.flush()?;
                    Ok(EXIT_OK)
                }
                Format::Human => {
                    if entries.is_empty() {
                        writeln!(out, "no cached entries in {}", cache.dir().display())?;
                    }
                    for e in &entries {
                        writeln!(
                            out,
                            "{}  {}  {} automorphisms  {}",
                            e.header.descriptor,
                            e.header.enumerator,
                            e.header.count,
                            e.path.display()
                        )?;
                    }
                    Ok(EXIT_OK)
                }
            }
        }
        CacheAction::Clear => {
            let n = cache.clear()?;
            match g.format {
                Format::Json => write_json(out, &json!({ "removed": n })),
                _ => {
                    writeln!(out, "removed {n} files from {}", cache.dir().display())?;
                    Ok(EXIT_OK)
                }
            }
        }
        CacheAction::Validate => {
            let resolve = |d: &str| Ok(build(&d.parse::<GroupSpec>()?)?.group);
            let results = cache.validate(resolve, g.seed.unwrap_or(0))?;
            let corrupt = results.iter().filter(|r| !r.ok).count();
            match g.format {
                Format::Json => {
                    write_json(out, &results)?;
                }
                _ => {
                    for r in &results {
                        if r.ok {
                            writeln!(out, "ok       {}", r.path.display())?;
                        } else {
                            writeln!(out, "corrupt  {}", r.path.display())?;
                            writeln!(err, "{}: {}", r.path.display(), r.reason.as_deref().unwrap_or(""))?;
                            if let Some(q) = &r.quarantined_to {
                                writeln!(out, "         quarantined to {}", q.display())?;
                            }
                        }
                    }
                    writeln!(out, "{} entries checked, {corrupt} corrupt", results.len())?;
                }
            }
            Ok(if corrupt > 0 { EXIT_INCOMPLETE } else { EXIT_OK })
        }
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["twisted"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn help_lists_every_check() {
        let (code, out, _) = run_str(&["verify", "--help"]);
        assert_eq!(code, 0);
        for c in CheckId::ALL {
            assert!(out.contains(c.as_str()) && out.contains(c.claim()), "{}", c.as_str());
        }
    }

    #[test]
    fn unknown_group_is_a_usage_error() {
        let (code, _, err) = run_str(&["info", "--group", "nonsense"]);
        assert_eq!(code, 2);
        assert!(err.contains("nonsense"));
    }

    #[test]
    fn sampled_without_seed_is_rejected() {
        let (code, _, err) = run_str(&["verify", "theorem-a", "--n", "3", "--mode", "sampled", "--no-cache"]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn q8_named_automorphism() {
        let (code, out, _) = run_str(&["twisted", "--group", "q8", "--aut", "named:q8_phi"]);
        assert_eq!(code, 0);
        assert!(out.contains("{1, -i}"), "{out}");
        assert!(out.contains("not a subgroup"), "{out}");
    }
}
