//! On-disk cache of enumerated automorphism groups.
//!
//! One text file per (descriptor, enumerator) pair:
//!
//! ```text
//! twisted-aut-cache
//! schema 1
//! descriptor theorem_a:n=2,p=3
//! enumerator bruteforce-v1
//! generators 3
//! count 34992
//! checksum sha256:<hex>
//! 0 1 2
//! ...
//! ```
//!
//! Each body line lists the images of the designated generators. The
//! checksum covers every line except itself. Loading rebuilds the
//! permutations and fully revalidates a random sample of entries; files that
//! fail any check are renamed with a `.quarantined` suffix.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{Automorphism, ExtendScratch, Extender, Provenance};
use crate::error::{Error, Result};
use crate::group::{Elem, Group};

pub const SCHEMA_VERSION: u32 = 1;
/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "TWISTED_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".twisted-cache";
/// Entries fully revalidated on every load.
pub const REVALIDATE: usize = 10;
pub const BRUTEFORCE_VERSION: &str = "bruteforce-v1";

const MAGIC: &str = "twisted-aut-cache";
const EXTENSION: &str = "aut";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheHeader {
    pub schema: u32,
    pub descriptor: String,
    pub enumerator: String,
    pub generators: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CacheListing {
    pub path: PathBuf,
    pub header: CacheHeader,
}

#[derive(Clone, Debug)]
pub struct AutCache {
    dir: PathBuf,
}

struct Parsed {
    header: CacheHeader,
    images: Vec<Vec<Elem>>,
}

fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
    Error::CorruptCache {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn digest(lines: &[&str]) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

fn field<'a>(path: &Path, line: Option<&'a str>, key: &str) -> Result<&'a str> {
    line.and_then(|l| l.strip_prefix(key))
        .and_then(|l| l.strip_prefix(' '))
        .ok_or_else(|| corrupt(path, format!("missing `{key}` header")))
}

fn parse(path: &Path, text: &str) -> Result<Parsed> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.first() != Some(&MAGIC) {
        return Err(corrupt(path, "not a cache file"));
    }
    let mut it = lines.iter().copied().skip(1);
    let schema: u32 = field(path, it.next(), "schema")?
        .parse()
        .map_err(|_| corrupt(path, "bad schema"))?;
    if schema != SCHEMA_VERSION {
        return Err(corrupt(path, format!("unsupported schema {schema}")));
    }
    let descriptor = field(path, it.next(), "descriptor")?.to_string();
    let enumerator = field(path, it.next(), "enumerator")?.to_string();
    let generators: usize = field(path, it.next(), "generators")?
        .parse()
        .map_err(|_| corrupt(path, "bad generator count"))?;
    let count: usize = field(path, it.next(), "count")?
        .parse()
        .map_err(|_| corrupt(path, "bad count"))?;
    let checksum = field(path, it.next(), "checksum")?;
    let mut covered: Vec<&str> = lines[..6].to_vec();
    covered.extend(&lines[7..]);
    if checksum.strip_prefix("sha256:") != Some(digest(&covered).as_str()) {
        return Err(corrupt(path, "checksum mismatch"));
    }
    let images = lines[7..]
        .iter()
        .map(|l| {
            let row = l
                .split_whitespace()
                .map(|v| v.parse::<Elem>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| corrupt(path, "bad image index"))?;
            if row.len() != generators {
                return Err(corrupt(path, "wrong number of images"));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    if images.len() != count {
        return Err(corrupt(path, "entry count does not match header"));
    }
    Ok(Parsed {
        header: CacheHeader {
            schema,
            descriptor,
            enumerator,
            generators,
            count,
        },
        images,
    })
}

impl AutCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        AutCache { dir: dir.into() }
    }

    /// `explicit`, else the environment override, else the default.
    pub fn resolve(explicit: Option<PathBuf>) -> Self {
        let dir = explicit
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        AutCache::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, descriptor: &str, enumerator: &str) -> PathBuf {
        let clean: String = format!("{descriptor}__{enumerator}")
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect();
        self.dir.join(format!("{clean}.{EXTENSION}"))
    }

    pub fn store(&self, descriptor: &str, enumerator: &str, auts: &[Automorphism]) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let generators = auts.first().map_or(0, |a| a.gen_images().len());
        let head = [
            MAGIC.to_string(),
            format!("schema {SCHEMA_VERSION}"),
            format!("descriptor {descriptor}"),
            format!("enumerator {enumerator}"),
            format!("generators {generators}"),
            format!("count {}", auts.len()),
        ];
        let body: Vec<String> = auts
            .iter()
            .map(|a| {
                a.gen_images()
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let covered: Vec<&str> = head.iter().chain(&body).map(String::as_str).collect();
        let mut text = head.join("\n");
        text.push_str(&format!("\nchecksum sha256:{}\n", digest(&covered)));
        for l in &body {
            text.push_str(l);
            text.push('\n');
        }
        let path = self.path_for(descriptor, enumerator);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    fn quarantine(&self, path: &Path) -> PathBuf {
        let mut q = path.as_os_str().to_owned();
        q.push(".quarantined");
        let q = PathBuf::from(q);
        // best effort: a failed rename still reports the corruption
        let _ = fs::rename(path, &q);
        q
    }

    /// Reads, rebuilds and spot-validates a cache file against `group`.
    fn read_validated(&self, path: &Path, group: &Group, seed: u64) -> Result<(CacheHeader, Vec<Automorphism>)> {
        let text = fs::read_to_string(path)?;
        let parsed = parse(path, &text)?;
        if parsed.header.generators != group.generators().len() {
            return Err(corrupt(path, "generator count does not match the group"));
        }
        if parsed.images.iter().flatten().any(|&g| g as usize >= group.order()) {
            return Err(corrupt(path, "image index out of range"));
        }
        let extender = Extender::new(group, group.generators())?;
        let mut auts: Vec<Automorphism> = parsed
            .images
            .into_iter()
            .map(|images| {
                let mut perm = Vec::new();
                extender.fill_unchecked(group, &images, &mut perm);
                Automorphism::from_parts(perm, images, Provenance::Cached)
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = REVALIDATE.min(auts.len());
        let mut scratch = ExtendScratch::new(group.order());
        let mut perm = Vec::new();
        for i in sample(&mut rng, auts.len(), k) {
            let a = &auts[i];
            if extender
                .extend_into(group, a.gen_images(), &mut perm, &mut scratch)
                .is_err()
                || perm != a.perm()
            {
                return Err(corrupt(path, format!("entry {i} is not an automorphism")));
            }
        }
        auts.sort_unstable_by(|a, b| a.perm().cmp(b.perm()));
        Ok((parsed.header, auts))
    }

    /// The cached automorphisms for `(descriptor, enumerator)`, if present.
    /// A corrupt file is quarantined and reported as an error.
    pub fn load(
        &self,
        group: &Group,
        descriptor: &str,
        enumerator: &str,
        seed: u64,
    ) -> Result<Option<Vec<Automorphism>>> {
        let path = self.path_for(descriptor, enumerator);
        if !path.exists() {
            return Ok(None);
        }
        match self.read_validated(&path, group, seed) {
            Ok((header, auts)) if header.descriptor == descriptor && header.enumerator == enumerator => Ok(Some(auts)),
            Ok(_) => {
                self.quarantine(&path);
                Err(corrupt(&path, "header does not match file name"))
            }
            Err(e @ Error::CorruptCache { .. }) => {
                self.quarantine(&path);
                Err(e)
            }
            Err(e) => Err(e),
        }
    }

    fn entries(&self) -> Result<Vec<PathBuf>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut out: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == EXTENSION))
            .collect();
        out.sort();
        Ok(out)
    }

    /// The brute-force automorphism group of `group`, from the cache when a
    /// valid entry exists; otherwise enumerated and stored.
    pub fn load_or_enumerate(&self, group: &Group, descriptor: &str, budget: u64) -> Result<Vec<Automorphism>> {
        if let Some(auts) = self.load(group, descriptor, BRUTEFORCE_VERSION, 0)? {
            return Ok(auts);
        }
        let auts = super::enumerate_bruteforce(group, budget)?;
        self.store(descriptor, BRUTEFORCE_VERSION, &auts)?;
        Ok(auts)
    }

    /// Headers of all readable entries. Unreadable ones are skipped here
    /// and reported by [`AutCache::validate`].
    pub fn list(&self) -> Result<Vec<CacheListing>> {
        let mut out = Vec::new();
        for path in self.entries()? {
            let text = fs::read_to_string(&path)?;
            if let Ok(p) = parse(&path, &text) {
                out.push(CacheListing { path, header: p.header });
            }
        }
        Ok(out)
    }

    /// Removes every entry (quarantined files included). Returns the number
    /// of files removed.
    pub fn clear(&self) -> Result<usize> {
        if !self.dir.exists() {
            return Ok(0);
        }
        let mut n = 0;
        for e in fs::read_dir(&self.dir)? {
            let path = e?.path();
            let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
            if name.ends_with(&format!(".{EXTENSION}")) || name.ends_with(".quarantined") {
                fs::remove_file(&path)?;
                n += 1;
            }
        }
        Ok(n)
    }

    /// Checks every entry: checksum, then rebuild and revalidation of
    /// [`REVALIDATE`] random members against the group named by its
    /// descriptor. Corrupt entries are quarantined.
    pub fn validate(&self, resolve: impl Fn(&str) -> Result<Group>, seed: u64) -> Result<Vec<CacheValidation>> {
        let mut out = Vec::new();
        for path in self.entries()? {
            let outcome = fs::read_to_string(&path)
                .map_err(Error::from)
                .and_then(|text| parse(&path, &text))
                .and_then(|p| {
                    let group = resolve(&p.header.descriptor)?;
                    self.read_validated(&path, &group, seed).map(|(h, _)| h)
                });
            match outcome {
                Ok(header) => out.push(CacheValidation {
                    path,
                    descriptor: Some(header.descriptor),
                    ok: true,
                    reason: None,
                    quarantined_to: None,
                }),
                Err(e) => {
                    let q = self.quarantine(&path);
                    out.push(CacheValidation {
                        path,
                        descriptor: None,
                        ok: false,
                        reason: Some(e.to_string()),
                        quarantined_to: Some(q),
                    })
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CacheValidation {
    pub path: PathBuf,
    pub descriptor: Option<String>,
    pub ok: bool,
    pub reason: Option<String>,
    pub quarantined_to: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::{enumerate_bruteforce, DEFAULT_BUDGET};
    use crate::constructions::build;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = AutCache::new(dir.path());
        let e = build(&"q8".parse().unwrap()).unwrap();
        let auts = enumerate_bruteforce(&e.group, DEFAULT_BUDGET).unwrap();
        let path = cache.store("q8", BRUTEFORCE_VERSION, &auts).unwrap();
        let back = cache.load(&e.group, "q8", BRUTEFORCE_VERSION, 1).unwrap().unwrap();
        let perms = |v: &[Automorphism]| v.iter().map(|a| a.perm().to_vec()).collect::<Vec<_>>();
        assert_eq!(perms(&back), perms(&auts));
        assert_eq!(cache.list().unwrap().len(), 1);

        let mut bytes = fs::read(&path).unwrap();
        let last = bytes.len() - 2;
        bytes[last] ^= 1;
        fs::write(&path, bytes).unwrap();
        assert!(matches!(
            cache.load(&e.group, "q8", BRUTEFORCE_VERSION, 1),
            Err(Error::CorruptCache { .. })
        ));
        assert!(!path.exists());
        assert_eq!(cache.clear().unwrap(), 1);
    }
}
