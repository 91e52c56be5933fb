use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tkcert::io::parse_edge_list;
use tkcert::{validate, Certificate};

fn tkcert(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tkcert"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn generated_graph_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&tkcert(d, &["gen", "polarity", "--q", "11", "--out", "g.txt"])), 0);
    let find = tkcert(
        d,
        &[
            "find", "--graph", "g.txt", "--mode", "drc", "--out", "c.json", "--report", "r.json",
        ],
    );
    assert_eq!(code(&find), 0, "{}", String::from_utf8_lossy(&find.stderr));
    let v = tkcert(
        d,
        &[
            "verify",
            "--graph",
            "g.txt",
            "--cert",
            "c.json",
            "--exact-internal",
            "3",
        ],
    );
    assert_eq!(code(&v), 0);
    assert!(String::from_utf8_lossy(&v.stdout).starts_with("valid ell="));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["mode"], "drc");
    assert!(report["stages"].as_array().unwrap().len() >= 3);
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("g.txt"), "4 3\n0 1\n1 2\n2 3\n").unwrap();
    fs::write(
        d.join("c.json"),
        r#"{"cores":[0,3],"paths":[{"u":0,"v":3,"seq":[0,3]}]}"#,
    )
    .unwrap();
    let out = tkcert(
        d,
        &["--format", "json", "verify", "--graph", "g.txt", "--cert", "c.json"],
    );
    assert_eq!(code(&out), 1);
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["valid"], false);
    assert_eq!(rep["violations"][0]["kind"], "not-an-edge");
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.txt"), "3 1\n0 7\n").unwrap();
    assert_eq!(code(&tkcert(d, &["find", "--graph", "bad.txt"])), 1);
    assert_eq!(code(&tkcert(d, &["find", "--graph", "missing.txt"])), 1);
    assert_eq!(code(&tkcert(d, &["gen", "polarity", "--q", "6"])), 1);
    fs::write(d.join("g.txt"), "2 1\n0 1\n").unwrap();
    assert_eq!(code(&tkcert(d, &["find", "--graph", "g.txt", "--mode", "fast"])), 1);
    assert_eq!(
        code(&tkcert(d, &["find", "--graph", "g.txt", "--params", r#"{"eps1": 2}"#])),
        1
    );
}

#[test]
fn hopeless_embedding_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("g.txt"), "2 1\n0 1\n").unwrap();
    let out = tkcert(d, &["find", "--graph", "g.txt", "--mode", "drc"]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reduce_only_writes_the_reduced_graph() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    tkcert(d, &["gen", "gq", "--q", "3", "--out", "g.txt"]);
    let out = tkcert(d, &["find", "--graph", "g.txt", "--mode", "reduce-only"]);
    assert_eq!(code(&out), 0);
    let h = parse_edge_list(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(h.m() > 0);
}

#[test]
fn bench_certificates_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = tkcert(
        d,
        &[
            "bench",
            "--family",
            "gq",
            "--range",
            "2..3",
            "--seeds",
            "0,1",
            "--cert-dir",
            "certs",
        ],
    );
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let (q, seed, valid) = (f[1], f[9], f[10]);
        let g = tkcert::generators::gq_incidence(q.parse().unwrap()).unwrap();
        let text = fs::read_to_string(d.join("certs").join(format!("gq-{q}-{seed}.json"))).unwrap();
        let cert = Certificate::from_json(&text).unwrap();
        assert_eq!(validate(&g, &cert, None).valid, valid == "true");
    }
}

#[test]
fn empty_seed_list_gives_a_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = tkcert(dir.path(), &["bench", "--family", "kdd", "--range", "2", "--seeds", ""]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn expander_certify_refuses_large_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    tkcert(d, &["gen", "gq", "--q", "3", "--out", "g.txt"]);
    assert_eq!(code(&tkcert(d, &["expander", "--graph", "g.txt", "--certify"])), 1);
    tkcert(d, &["gen", "kdd", "--d", "3", "--out", "k.txt"]);
    let out = tkcert(
        d,
        &[
            "--format",
            "json",
            "expander",
            "--graph",
            "k.txt",
            "--certify",
            "--report",
            "r.json",
        ],
    );
    assert_eq!(code(&out), 0);
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(rep["certified"], true);
    assert_eq!(rep["delta"], 3);
}

#[test]
fn drc_stats_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    tkcert(d, &["gen", "polarity", "--q", "13", "--out", "g.txt"]);
    let out = tkcert(
        d,
        &[
            "--format", "json", "drc", "--graph", "g.txt", "--trials", "25", "--stats", "s.json",
        ],
    );
    assert_eq!(code(&out), 0);
    let stats: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
    assert_eq!(stats["w_samples"].as_array().unwrap().len(), 25);
    let cert = Certificate::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let g = tkcert::generators::polarity_graph(13).unwrap();
    assert!(validate(&g, &cert, Some(3)).valid);
}
