mod common;

use std::fs;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};
use tempfile::TempDir;

fn run(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rlpsi").chain(args.iter().copied());
    let code = rlpsi::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

struct Example {
    _dir: TempDir,
    text: PathBuf,
    index: PathBuf,
}

fn example() -> Example {
    let dir = TempDir::new().unwrap();
    let text = dir.path().join("example.txt");
    let index = dir.path().join("example.idx");
    fs::write(&text, common::EXAMPLE_TEXT).unwrap();
    let (code, out, err) = run(&["build", p(&text), p(&index), "--d", "2", "--convention", "rotation"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("n=45"), "{out}");
    assert!(out.contains("r'=13"), "{out}");
    Example { _dir: dir, text, index }
}

fn stat(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from {out}"))
        .to_string()
}

#[test]
fn query_reproduces_worked_example() {
    let e = example();
    let (code, out, _) = run(&["query", p(&e.index), "--op", "psi", "--pos", "15"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "psi=35 coords=(10,1)");
    let (code, out, _) = run(&["query", p(&e.index), "--op", "psi", "--coords", "4,3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "psi=35 coords=(10,1)");
}

#[test]
fn iterated_query_cycles() {
    let e = example();
    let (code, out, _) = run(&["query", p(&e.index), "--pos", "15", "--steps", "45"]);
    assert_eq!(code, 0);
    let positions: Vec<usize> = out
        .lines()
        .map(|l| l.split_whitespace().next().unwrap()["psi=".len()..].parse().unwrap())
        .collect();
    assert_eq!(positions.len(), 45);
    assert_eq!(*positions.last().unwrap(), 15);
    let mut sorted = positions.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..45).collect::<Vec<_>>());
}

#[test]
fn other_operations() {
    let e = example();
    let (code, lf, _) = run(&["query", p(&e.index), "--op", "lf", "--pos", "35"]);
    assert_eq!(code, 0);
    assert!(lf.starts_with("lf=15 "), "{lf}");
    for op in ["phi", "phi-inv"] {
        let (code, _, err) = run(&["query", p(&e.index), "--op", op, "--pos", "3"]);
        assert_eq!(code, 2, "{err}");
        let (code, out, err) = run(&["query", p(&e.index), "--op", op, "--pos", "3", "--text", p(&e.text)]);
        assert_eq!(code, 0, "{err}");
        assert!(out.starts_with(&format!("{op}=")));
    }
    // φ then φ⁻¹ returns to the start.
    let (_, out, _) = run(&["query", p(&e.index), "--op", "phi", "--pos", "3", "--text", p(&e.text)]);
    let mid = out.split_whitespace().next().unwrap()["phi=".len()..].to_string();
    let (_, back, _) = run(&["query", p(&e.index), "--op", "phi-inv", "--pos", &mid, "--text", p(&e.text)]);
    assert!(back.starts_with("phi-inv=3 "), "{back}");
}

#[test]
fn query_errors_are_usage_errors() {
    let e = example();
    for args in [
        vec!["query", p(&e.index), "--pos", "45"],
        vec!["query", p(&e.index), "--coords", "4,5"],
        vec!["query", p(&e.index), "--coords", "13,0"],
        vec!["query", p(&e.index)],
        vec!["query", "/nonexistent/file.idx", "--pos", "0"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn verify_and_corruption() {
    let e = example();
    let (code, out, _) = run(&["verify", p(&e.index), p(&e.text)]);
    assert_eq!(code, 0, "{out}");
    assert!(out.trim_end().ends_with("PASS"));

    let mut bytes = fs::read(&e.index).unwrap();
    bytes[60] ^= 1;
    fs::write(&e.index, &bytes).unwrap();
    let (code, _, err) = run(&["verify", p(&e.index), p(&e.text)]);
    assert_eq!(code, 1);
    assert!(err.contains("checksum"), "{err}");
    let (code, _, _) = run(&["query", p(&e.index), "--pos", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn verify_against_wrong_text_fails() {
    let e = example();
    let other = e.text.with_extension("other");
    let mut t = common::EXAMPLE_TEXT.to_vec();
    t.swap(3, 4);
    fs::write(&other, t).unwrap();
    let (code, _, _) = run(&["verify", p(&e.index), p(&other)]);
    assert_eq!(code, 1);
}

#[test]
fn stats_report() {
    let e = example();
    let (code, out, _) = run(&["stats", p(&e.index), "--machine", "--strict"]);
    assert_eq!(code, 0);
    assert_eq!(stat(&out, "n"), "45");
    assert_eq!(stat(&out, "sigma"), "5");
    assert_eq!(stat(&out, "r"), "13");
    assert_eq!(stat(&out, "r_prime"), "13");
    assert_eq!(stat(&out, "bfl_bits"), "26");
    assert_eq!(stat(&out, "convention"), "rotation");
    let probes: usize = stat(&out, "max_probes").parse().unwrap();
    assert!(probes <= 4);
    let (code, human, _) = run(&["stats", p(&e.index)]);
    assert_eq!(code, 0);
    assert!(human.lines().any(|l| l.starts_with("r_prime") && l.ends_with("13")));
}

#[test]
fn single_byte_text() {
    let dir = TempDir::new().unwrap();
    let text = dir.path().join("one");
    let index = dir.path().join("one.idx");
    fs::write(&text, b"x").unwrap();
    let (code, out, _) = run(&["build", p(&text), p(&index)]);
    assert_eq!(code, 0);
    assert!(out.contains("n=1 "), "{out}");
    let (code, out, _) = run(&["query", p(&index), "--pos", "0", "--steps", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["psi=0 coords=(0,0)"; 3]);
    assert_eq!(run(&["verify", p(&index), p(&text)]).0, 0);

    fs::write(&text, b"").unwrap();
    assert_eq!(run(&["build", p(&text), p(&index)]).0, 2);
    assert_eq!(run(&["build", p(&text), p(&index), "--d", "1"]).0, 2);
}

#[test]
fn sentinel_build() {
    let dir = TempDir::new().unwrap();
    let text = dir.path().join("t");
    let index = dir.path().join("t.idx");
    fs::write(&text, b"mississippi").unwrap();
    let (code, out, _) = run(&["build", p(&text), p(&index), "--append-sentinel", "--d", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("n=12 sigma=5"), "{out}");
    let (code, out, _) = run(&["stats", p(&index), "--machine"]);
    assert_eq!(code, 0);
    assert_eq!(stat(&out, "sentinel"), "true");
    assert_eq!(run(&["verify", p(&index), p(&text)]).0, 0);
}

#[test]
fn bench_reports_probe_bound() {
    let e = example();
    let (code, out, _) = run(&["bench", p(&e.index), "--queries", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("queries=0"));
    let (code, out, _) = run(&["bench", p(&e.index), "--queries", "5000", "--seed", "9"]);
    assert_eq!(code, 0);
    for name in ["psi", "lf"] {
        let line = out.lines().find(|l| l.starts_with(&format!("{name}:"))).unwrap();
        let probes: usize = line
            .split_whitespace()
            .find_map(|f| f.strip_prefix("max_probes="))
            .unwrap()
            .parse()
            .unwrap();
        assert!(probes <= 4, "{line}");
    }
}

#[test]
fn one_mebibyte_random_text() {
    let dir = TempDir::new().unwrap();
    let text = dir.path().join("random.bin");
    let index = dir.path().join("random.idx");
    let mut bytes = vec![0u8; 1 << 20];
    StdRng::seed_from_u64(1).fill_bytes(&mut bytes);
    // Keep 250 distinct bytes so the sentinel fits.
    for b in &mut bytes {
        *b %= 250;
    }
    fs::write(&text, &bytes).unwrap();
    let (code, _, err) = run(&["build", p(&text), p(&index), "--append-sentinel", "--d", "4"]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = run(&["verify", p(&index), p(&text)]);
    assert_eq!(code, 0, "{out}");
}
