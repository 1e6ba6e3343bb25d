use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn twisted(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twisted"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");

    let empty = twisted(&cache, &["cache", "list", "--format", "json"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty).trim(), "[]");

    let run = twisted(&cache, &["verify", "theorem-a", "--n", "2", "--p", "3"]);
    assert_eq!(run.status.code(), Some(0), "{}", stdout(&run));

    let listed = twisted(&cache, &["cache", "list", "--format", "json"]);
    let entries: serde_json::Value = serde_json::from_slice(&listed.stdout).unwrap();
    let entries = entries.as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["header"]["descriptor"], "theorem_a:n=2,p=3");
    assert_eq!(entries[0]["header"]["count"], 34992);

    let ok = twisted(&cache, &["cache", "validate"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));

    let cleared = twisted(&cache, &["cache", "clear"]);
    assert_eq!(cleared.status.code(), Some(0));
    let after = twisted(&cache, &["cache", "list", "--format", "json"]);
    assert_eq!(stdout(&after).trim(), "[]");
}

#[test]
fn bit_flipped_entry_is_quarantined() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path();
    let run = twisted(cache, &["automorphisms", "--group", "q8"]);
    assert_eq!(run.status.code(), Some(0));
    let entry = fs::read_dir(cache)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "aut"))
        .expect("cache entry written");
    let mut bytes = fs::read(&entry).unwrap();
    let last = bytes.len() - 2;
    bytes[last] ^= 0x01;
    fs::write(&entry, bytes).unwrap();

    let v = twisted(cache, &["cache", "validate"]);
    assert_eq!(v.status.code(), Some(3), "{}", stdout(&v));
    assert!(!entry.exists());
    let quarantined = fs::read_dir(cache)
        .unwrap()
        .any(|e| e.unwrap().path().to_string_lossy().ends_with(".quarantined"));
    assert!(quarantined);
}

#[test]
fn json_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "theorem-a",
        "--n",
        "3",
        "--p",
        "3",
        "--mode",
        "sampled",
        "--samples",
        "200",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    let a = twisted(dir.path(), &args);
    let b = twisted(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["seed"], 9);
    assert_eq!(r["sample_size"], 200);
    assert!(r.get("wall_time").is_none());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    assert_eq!(twisted(c, &["verify", "no-such-check"]).status.code(), Some(2));
    assert_eq!(
        twisted(c, &["info", "--group", "theorem_a:n=2,p=2"]).status.code(),
        Some(2)
    );
    assert_eq!(twisted(c, &["frobnicate"]).status.code(), Some(2));
    let tiny = twisted(c, &["verify", "theorem-a", "--budget", "10"]);
    assert_eq!(tiny.status.code(), Some(3), "{}", stdout(&tiny));
    let incomplete = twisted(c, &["automorphisms", "--group", "sym:4", "--budget", "5", "--no-cache"]);
    assert_eq!(incomplete.status.code(), Some(3));
}

#[test]
fn twisted_subcommand_reports_q8() {
    let dir = tempfile::tempdir().unwrap();
    let o = twisted(dir.path(), &["twisted", "--group", "q8", "--aut", "named:q8_phi"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("{1, -i}") && text.contains("not a subgroup"), "{text}");

    let j = twisted(
        dir.path(),
        &[
            "twisted",
            "--group",
            "heisenberg:3",
            "--aut",
            "named:heisenberg_phi",
            "--format",
            "json",
        ],
    );
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["displacement_size"], 3);
    assert_eq!(v["is_subgroup"], false);
}

#[test]
fn automorphism_images_are_parsed() {
    let dir = tempfile::tempdir().unwrap();
    let ok = twisted(
        dir.path(),
        &["twisted", "--group", "sym:3", "--aut", "images:(12);(132)"],
    );
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let bad = twisted(
        dir.path(),
        &["twisted", "--group", "sym:3", "--aut", "images:(12);(12)"],
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn csv_output_has_a_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = twisted(dir.path(), &["verify", "counterexamples", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["check_id", "parameters", "status", "kind", "name", "value"]
    );
    assert!(rdr.records().count() > 10);
}

#[test]
fn help_names_every_check_with_its_claim() {
    let dir = tempfile::tempdir().unwrap();
    let o = twisted(dir.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for id in twisted_core::verify::CheckId::ALL {
        assert!(text.contains(id.as_str()) && text.contains(id.claim()), "{id}");
    }
}
