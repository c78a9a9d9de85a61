//! End-to-end tests of the weil-atlas binary: output determinism, exit
//! codes, the pair file workflows, and re-ingestion of emitted catalogs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use weil_atlas::catalog::CatalogShard;
use weil_core::weil::{is_weil_poly, PrimePower};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weil-atlas"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_pair(name: &str, q: u64, rank: usize, f: &[i64]) -> PathBuf {
    let path = tmp(name);
    let f: Vec<String> = f.iter().map(|x| x.to_string()).collect();
    std::fs::write(
        &path,
        format!(
            "{{\"q\": {q}, \"rank\": {rank}, \"F\": [{}]}}\n",
            f.join(", ")
        ),
    )
    .unwrap();
    path
}

fn write_map(name: &str, src: &Path, dst: &Path, matrix: &[i64]) -> PathBuf {
    let path = tmp(name);
    let src = std::fs::read_to_string(src).unwrap();
    let dst = std::fs::read_to_string(dst).unwrap();
    let m: Vec<String> = matrix.iter().map(|x| x.to_string()).collect();
    std::fs::write(
        &path,
        format!(
            "{{\"source\": {}, \"target\": {}, \"matrix\": [{}]}}\n",
            src.trim(),
            dst.trim(),
            m.join(", ")
        ),
    )
    .unwrap();
    path
}

#[test]
fn enumerate_output_is_deterministic() {
    for args in [
        vec!["enumerate", "--q", "3", "--degree", "4"],
        vec!["enumerate", "--q", "5", "--degree", "2", "--format", "csv"],
        vec!["order-info", "1.5.1", "1.5.3", "--format", "json"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "reruns differ for {:?}", args);
    }
}

#[test]
fn csv_has_header_and_all_rows() {
    let out = run(&["enumerate", "--q", "5", "--degree", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "label,q,degree,coefficients,irreducible,real,rational,ordinary"
    );
    assert_eq!(lines.count(), 9);

    let filtered = run(&[
        "enumerate",
        "--q",
        "5",
        "--degree",
        "2",
        "--format",
        "csv",
        "--filter",
        "ordinary",
    ]);
    assert_eq!(stdout(&filtered).lines().count(), 1 + 8);
}

#[test]
fn shards_merge_to_the_whole_catalog() {
    let whole: CatalogShard =
        serde_json::from_str(&stdout(&run(&["enumerate", "--q", "3", "--degree", "4"]))).unwrap();
    assert!(whole.complete);
    let mut merged = Vec::new();
    for i in 1..=4 {
        let shard_arg = format!("{i}/4");
        let part: CatalogShard = serde_json::from_str(&stdout(&run(&[
            "enumerate",
            "--q",
            "3",
            "--degree",
            "4",
            "--shard",
            &shard_arg,
        ])))
        .unwrap();
        assert!(!part.complete);
        merged.extend(part.records);
    }
    let whole_labels: Vec<&str> = whole.records.iter().map(|r| r.label.as_str()).collect();
    let merged_labels: Vec<&str> = merged.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(whole_labels, merged_labels);
}

#[test]
fn emitted_records_reingest_as_weil_polynomials() {
    let shard: CatalogShard =
        serde_json::from_str(&stdout(&run(&["enumerate", "--q", "9", "--degree", "2"]))).unwrap();
    let pp = PrimePower::from_u64(9).unwrap();
    assert!(!shard.records.is_empty());
    for rec in &shard.records {
        let p = rec.poly().unwrap();
        assert!(is_weil_poly(&p, &pp).unwrap(), "label {}", rec.label);
        assert_eq!(rec.degree, p.deg());
    }
}

#[test]
fn order_info_reports_invariants() {
    let out = run(&["order-info", "1.5.1", "1.5.3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rank: 4"));
    assert!(text.contains("index: 4"));
    assert!(text.contains("gorenstein: yes"));

    let bad = run(&["order-info", "1.25.5", "0.25.s"]);
    assert!(bad.status.success());
    let text = stdout(&bad);
    assert!(text.contains("augmented by: 5"));
    assert!(text.contains("socle dimension: 2"));
    assert!(text.contains("gorenstein: no"));

    let good = run(&["order-info", "1.25.1", "0.25.s"]);
    assert!(stdout(&good).contains("gorenstein: yes"));
}

#[test]
fn exit_codes_separate_failure_kinds() {
    // 0: success.
    let src = write_pair("ok_pair.json", 5, 2, &[0, -5, 1, 1]);
    assert_eq!(
        run(&["pair", "check", src.to_str().unwrap()]).status.code(),
        Some(0)
    );

    // 2: validation failures.
    let ident = write_pair("bad_pair.json", 5, 2, &[1, 0, 0, 1]);
    let out = run(&["pair", "check", ident.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).starts_with("invalid:"));
    assert_eq!(run(&["order-info", "1.4.m4"]).status.code(), Some(2));
    assert_eq!(run(&["count-elliptic", "6"]).status.code(), Some(2));

    // 3: malformed inputs and usage errors.
    let garbled = tmp("garbled.json");
    std::fs::write(&garbled, "{ not json").unwrap();
    assert_eq!(
        run(&["pair", "check", garbled.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    let short = write_pair("short_pair.json", 5, 2, &[0, -5, 1]);
    assert_eq!(
        run(&["pair", "check", short.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["order-info", "zzz"]).status.code(), Some(3));
    assert_eq!(run(&["enumerate", "--q", "3"]).status.code(), Some(3));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(
        run(&["pair", "check", tmp("missing.json").to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );

    // 4: resource caps.
    let capped = bin()
        .args(["enumerate", "--q", "3", "--degree", "4"])
        .env("WEIL_ATLAS_DEGREE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(4));
    let raised = bin()
        .args(["enumerate", "--q", "3", "--degree", "4"])
        .env("WEIL_ATLAS_DEGREE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
}

#[test]
fn pair_check_reports_support_and_ordinarity() {
    let src = write_pair("check_pair.json", 5, 2, &[0, -5, 1, 1]);
    let out = run(&["pair", "check", src.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "valid, ordinary, support 1.5.m1");

    // x^2 - 5 over q = 5 is a real class: fine by default, rejected when
    // the prime-field restriction is requested.
    let real = write_pair("real_pair.json", 5, 2, &[0, 5, 1, 0]);
    assert_eq!(
        run(&["pair", "check", real.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let restricted = run(&["pair", "check", real.to_str().unwrap(), "--p-restricted"]);
    assert_eq!(restricted.status.code(), Some(2));
}

#[test]
fn dual_is_an_involution_on_pair_files() {
    let src = write_pair("dual_src.json", 5, 2, &[0, -5, 1, 1]);
    let once = tmp("dual_once.json");
    let twice = tmp("dual_twice.json");
    assert!(run(&[
        "pair",
        "dual",
        src.to_str().unwrap(),
        "--out",
        once.to_str().unwrap()
    ])
    .status
    .success());
    assert!(run(&[
        "pair",
        "dual",
        once.to_str().unwrap(),
        "--out",
        twice.to_str().unwrap()
    ])
    .status
    .success());

    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&once).unwrap()).unwrap();
    assert_eq!(v["F"], serde_json::json!([1, 5, -1, 0]));
    let back: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&twice).unwrap()).unwrap();
    assert_eq!(back["F"], serde_json::json!([0, -5, 1, 1]));
}

#[test]
fn hom_and_degree_workflows() {
    let src = write_pair("hom_src.json", 5, 2, &[0, -5, 1, 1]);
    let out = run(&["pair", "hom", src.to_str().unwrap(), src.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rank"], serde_json::json!(2));
    assert_eq!(v["basis"].as_array().unwrap().len(), 2);

    let doubling = write_map("map_double.json", &src, &src, &[2, 0, 0, 2]);
    let out = run(&["pair", "degree", doubling.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");

    let frob = write_map("map_frob.json", &src, &src, &[0, -5, 1, 1]);
    assert_eq!(
        stdout(&run(&["pair", "degree", frob.to_str().unwrap()])).trim(),
        "5"
    );

    let zero = write_map("map_zero.json", &src, &src, &[0, 0, 0, 0]);
    assert_eq!(
        stdout(&run(&["pair", "degree", zero.to_str().unwrap()])).trim(),
        "infinite"
    );

    let not_a_map = write_map("map_bad.json", &src, &src, &[1, 0, 0, 0]);
    assert_eq!(
        run(&["pair", "degree", not_a_map.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn count_elliptic_matches_known_values() {
    for (p, expect) in [(2u64, 5usize), (3, 7), (5, 9)] {
        let out = run(&["count-elliptic", &p.to_string()]);
        assert!(out.status.success());
        assert_eq!(stdout(&out).trim(), expect.to_string(), "p = {p}");
    }
}
