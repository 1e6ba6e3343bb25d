//! Named checks with machine-readable reports.
//!
//! Each check computes the objects behind one claim, asserts what the claim
//! says about them and returns a [`VerificationReport`]. Construction
//! problems surface as errors; exhausted budgets give `incomplete` reports.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::automorphisms::cache::AutCache;
use crate::automorphisms::DEFAULT_BUDGET;
use crate::constructions::GroupSpec;
use crate::error::{Error, Result};

mod checks;
mod counterexamples;
mod invariants;
mod report;
mod theorem_a;

pub use checks::{
    check_direct_product, check_inner_congruence, check_power_formula, check_regularity, check_s3_example, check_search,
};
pub use counterexamples::{check_counterexample, check_counterexamples, counterexample_catalog};
pub use invariants::{check_invariants, conjugacy_class_count, INVARIANTS_ID};
pub use report::{Assertion, Status, SuiteReport, VerificationReport, Witness};
pub use theorem_a::{check_bv_decomposition, check_theorem_a, check_theorem_a_structure};

/// Default number of validated automorphisms in sampled mode.
pub const DEFAULT_SAMPLES: u64 = 10_000;
/// Default number of automorphism pairs for the direct-product check.
pub const DEFAULT_PAIRS: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    S3Example,
    InnerCongruence,
    TheoremA,
    TheoremAStructure,
    BvDecomposition,
    Regularity,
    Counterexamples,
    PowerFormula,
    DirectProduct,
    Search,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::S3Example,
        CheckId::InnerCongruence,
        CheckId::TheoremA,
        CheckId::TheoremAStructure,
        CheckId::BvDecomposition,
        CheckId::Regularity,
        CheckId::Counterexamples,
        CheckId::PowerFormula,
        CheckId::DirectProduct,
        CheckId::Search,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::S3Example => "s3-example",
            CheckId::InnerCongruence => "inner-congruence",
            CheckId::TheoremA => "theorem-a",
            CheckId::TheoremAStructure => "theorem-a-structure",
            CheckId::BvDecomposition => "bv-decomposition",
            CheckId::Regularity => "regularity",
            CheckId::Counterexamples => "counterexamples",
            CheckId::PowerFormula => "power-formula",
            CheckId::DirectProduct => "direct-product",
            CheckId::Search => "search",
        }
    }

    /// The statement the check tests, stored as `claim_ref` in reports.
    pub fn claim(self) -> &'static str {
        match self {
            CheckId::S3Example => "in S3 the displacement set of conjugation by (123) is {1, (132)}, not a subgroup",
            CheckId::InnerCongruence => {
                "some inner automorphism has congruence twisted classes exactly when the group is abelian"
            }
            CheckId::TheoremA => "in G(n,p) the displacement set of every automorphism is a subgroup",
            CheckId::TheoremAStructure => {
                "G(n,p) has class n, derived subgroup <a^p> x <b^p>, and every cyclic subgroup of A is normal"
            }
            CheckId::BvDecomposition => {
                "in G(n,p) the displacement set splits as B.V with B = [A,phi] and V = <[x,phi]>"
            }
            CheckId::Regularity => "G(n,p) is a regular p-group",
            CheckId::Counterexamples => {
                "the 2-group family, dihedral, quaternion and extraspecial groups have automorphisms whose displacement set is not a subgroup"
            }
            CheckId::PowerFormula => "in the 2-group family (xc)^(2^t) = x^(2^t) c^(2^(t+1) h)",
            CheckId::DirectProduct => {
                "for coprime direct products the displacement set is the product of the factor displacement sets"
            }
            CheckId::Search => "exploration of 2-groups whose displacement sets are all subgroups (no pass/fail)",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| Error::parse(s, "unknown check"))
    }
}

/// How the automorphisms of `G(n, p)` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Brute-force enumeration, cross-checked against the structured one.
    Exhaustive,
    /// Every validated structured candidate.
    Structured,
    /// Seeded uniform structured candidates until this many validate.
    Sampled { samples: u64 },
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Structured => "structured",
            Mode::Sampled { .. } => "sampled",
        }
    }

    /// Parses `exhaustive`, `structured` or `sampled`; the sample count
    /// comes separately.
    pub fn parse(s: &str, samples: Option<u64>) -> Result<Mode> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "structured" => Ok(Mode::Structured),
            "sampled" => Ok(Mode::Sampled {
                samples: samples.unwrap_or(DEFAULT_SAMPLES),
            }),
            _ => Err(Error::parse(s, "expected exhaustive, structured or sampled")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Required by sampled modes.
    pub seed: Option<u64>,
    /// Threads for the parallel parts; 1 runs everything inline.
    pub workers: usize,
    /// Node budget for brute-force searches.
    pub budget: u64,
    pub cache: Option<AutCache>,
    /// Fill in `wall_time`.
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: None,
            workers: 1,
            budget: DEFAULT_BUDGET,
            cache: None,
            timings: false,
        }
    }
}

impl VerifyOptions {
    pub(crate) fn require_seed(&self, what: &str) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Precondition(format!("{what} needs a seed")))
    }

    /// Runs `f` on a pool of `workers` threads, or inline for one worker.
    pub(crate) fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        if self.workers <= 1 {
            return Ok(f());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::param(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// One check with its optional parameters; unset ones take the check's
/// defaults.
#[derive(Clone, Debug)]
pub struct CheckRequest {
    pub check: CheckId,
    pub n: Option<u32>,
    pub p: Option<u32>,
    pub mode: Option<Mode>,
    pub group: Option<GroupSpec>,
    pub samples: Option<u64>,
}

impl CheckRequest {
    pub fn new(check: CheckId) -> Self {
        CheckRequest {
            check,
            n: None,
            p: None,
            mode: None,
            group: None,
            samples: None,
        }
    }

    pub fn n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn p(mut self, p: u32) -> Self {
        self.p = Some(p);
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn group(mut self, spec: GroupSpec) -> Self {
        self.group = Some(spec);
        self
    }

    pub fn samples(mut self, samples: u64) -> Self {
        self.samples = Some(samples);
        self
    }
}

/// Runs one check.
pub fn run_check(req: &CheckRequest, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let n = req.n.unwrap_or(2);
    let p = req.p.unwrap_or(3);
    let mut report = match req.check {
        CheckId::S3Example => check_s3_example()?,
        CheckId::InnerCongruence => check_inner_congruence(req.group.as_ref())?,
        CheckId::TheoremA => check_theorem_a(n, p, req.mode.unwrap_or_else(|| default_mode(n, p, req.samples)), opts)?,
        CheckId::TheoremAStructure => check_theorem_a_structure(n, p)?,
        CheckId::BvDecomposition => {
            check_bv_decomposition(n, p, req.mode.unwrap_or_else(|| default_mode(n, p, req.samples)), opts)?
        }
        CheckId::Regularity => check_regularity(req.group.as_ref())?,
        CheckId::Counterexamples => match &req.group {
            Some(spec) => check_counterexample(spec)?,
            None => check_counterexamples()?,
        },
        CheckId::PowerFormula => check_power_formula(req.n.unwrap_or(3))?,
        CheckId::DirectProduct => check_direct_product(req.samples.unwrap_or(DEFAULT_PAIRS), opts)?,
        CheckId::Search => check_search(req.n.unwrap_or(3), opts)?,
    };
    if opts.timings {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// Exhaustive up to order 512, sampled above.
fn default_mode(n: u32, p: u32, samples: Option<u64>) -> Mode {
    let order = (p as u64).pow(3 * n - 1);
    if order <= 512 {
        Mode::Exhaustive
    } else {
        Mode::Sampled {
            samples: samples.unwrap_or(DEFAULT_SAMPLES),
        }
    }
}

/// The checks run by `verify all`, in report order. With `full`, the
/// complete structured pass over `G(2, 5)` is included.
pub fn suite(full: bool) -> Vec<CheckRequest> {
    let mut out = vec![
        CheckRequest::new(CheckId::S3Example),
        CheckRequest::new(CheckId::InnerCongruence),
        CheckRequest::new(CheckId::TheoremA).n(2).p(3).mode(Mode::Exhaustive),
    ];
    if full {
        out.push(CheckRequest::new(CheckId::TheoremA).n(2).p(5).mode(Mode::Structured));
    }
    out.extend([
        CheckRequest::new(CheckId::TheoremA).n(3).p(3).mode(Mode::Sampled {
            samples: DEFAULT_SAMPLES,
        }),
        CheckRequest::new(CheckId::TheoremAStructure).n(2).p(3),
        CheckRequest::new(CheckId::TheoremAStructure).n(3).p(3),
        CheckRequest::new(CheckId::BvDecomposition)
            .n(2)
            .p(3)
            .mode(Mode::Exhaustive),
        CheckRequest::new(CheckId::Regularity),
        CheckRequest::new(CheckId::Counterexamples),
        CheckRequest::new(CheckId::PowerFormula).n(3),
        CheckRequest::new(CheckId::DirectProduct).samples(DEFAULT_PAIRS),
    ]);
    out
}

/// Runs [`suite`]. Checks run concurrently when `opts.workers > 1`; the
/// report order is fixed either way. Sampled checks need `opts.seed`.
pub fn run_all(full: bool, opts: &VerifyOptions) -> Result<SuiteReport> {
    opts.require_seed("verify all")?;
    let requests = suite(full);
    let reports = opts.install(|| {
        if opts.workers <= 1 {
            requests.iter().map(|r| run_check(r, opts)).collect::<Vec<_>>()
        } else {
            requests.par_iter().map(|r| run_check(r, opts)).collect::<Vec<_>>()
        }
    })?;
    Ok(SuiteReport::new(reports.into_iter().collect::<Result<Vec<_>>>()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_round_trip() {
        for c in CheckId::ALL {
            assert_eq!(c.as_str().parse::<CheckId>().unwrap(), c);
        }
        assert_eq!("theorem_a".parse::<CheckId>().unwrap(), CheckId::TheoremA);
        assert!("no-such-check".parse::<CheckId>().is_err());
    }

    #[test]
    fn default_modes() {
        assert_eq!(default_mode(2, 3, None), Mode::Exhaustive);
        assert_eq!(default_mode(3, 3, Some(5)), Mode::Sampled { samples: 5 });
    }
}
