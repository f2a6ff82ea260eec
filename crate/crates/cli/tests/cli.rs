use std::path::PathBuf;
use std::process::Command;

use ample_homology::{product, KGraphSkeleton};
use ample_homology_cli::schema::{parse_instance, read_instance, Instance};
use ample_homology_cli::{run, EXIT_FINDINGS, EXIT_OK, EXIT_RANK, EXIT_SCHEMA};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut argv = vec!["ample-homology"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    let o = Outcome {
        code,
        stdout: String::from_utf8(out).expect("UTF-8 output"),
        stderr: String::from_utf8(err).expect("UTF-8 errors"),
    };
    for text in [&o.stdout, &o.stderr] {
        assert!(
            text.lines().all(|l| l == l.trim_end()),
            "trailing whitespace in {text:?}"
        );
    }
    o
}

fn kgraph(path: &str) -> KGraphSkeleton {
    match read_instance(path).unwrap() {
        Instance::KGraph(s) => s,
        other => panic!("{other:?}"),
    }
}

#[test]
fn homology_of_the_example_graph() {
    let o = cli(&["homology", &data("ex_5223.json")]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(
        o.stdout,
        "{\"k\":1,\"homology\":[{\"rank\":0,\"torsion\":[2,2]},{\"rank\":0,\"torsion\":[]}],\"notes\":[]}\n"
    );
    assert!(o.stderr.is_empty());
}

#[test]
fn text_mode() {
    let o = cli(&["--text", "homology", &data("ex_5223.json")]);
    assert_eq!(o.stdout, "H_0 = Z_2 (+) Z_2\nH_1 = 0\n");
    let o = cli(&["cubical", &data("ex_5223.json"), "--text"]);
    assert_eq!(o.stdout, "H_0 = Z\nH_1 = Z^11\n");
}

#[test]
fn single_vertex_reports_the_cross_check() {
    let o = cli(&["single-vertex", "--edges", "3,5"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.starts_with(
        "{\"k\":2,\"homology\":[{\"rank\":0,\"torsion\":[2]},{\"rank\":0,\"torsion\":[2]},{\"rank\":0,\"torsion\":[]}]"
    ));
    assert!(o
        .stdout
        .contains("cross-check: agrees with the homology of D^Λ"));
    let o = cli(&["single-vertex", "--edges", "1,3"]);
    assert_eq!(o.code, EXIT_FINDINGS);
    assert!(o.stderr.contains("\"error\":\"hypothesis\""));
}

#[test]
fn rank_gate() {
    let o = cli(&["ktheory", &data("ex_k3.json")]);
    assert_eq!(o.code, EXIT_RANK);
    assert!(o.stdout.is_empty());
    assert!(
        o.stderr.starts_with("{\"error\":\"rank_gate\""),
        "{}",
        o.stderr
    );
    let o = cli(&["ktheory", &data("ex_k3.json"), "--allow-conjectural"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o
        .stdout
        .contains("\"method\":\"conjectural-k≥3\",\"hk_status\":\"conjectural\""));
    assert_eq!(cli(&["cubical", &data("ex_35.json")]).code, EXIT_RANK);
}

#[test]
fn ktheory_key_order() {
    let o = cli(&["ktheory", &data("ex_35.json")]);
    assert_eq!(o.code, EXIT_OK);
    let keys = [
        "\"k\":",
        "\"homology\":",
        "\"ktheory\":",
        "\"k0\":",
        "\"k1\":",
        "\"method\":",
        "\"notes\":",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| o.stdout.find(k).expect(k)).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{}", o.stdout);
    assert!(o
        .stdout
        .contains("\"k0\":{\"rank\":0,\"torsion\":[2]},\"k1\":{\"rank\":0,\"torsion\":[2]}"));
}

#[test]
fn validation_findings() {
    let o = cli(&["validate", &data("source.json")]);
    assert_eq!(o.code, EXIT_FINDINGS);
    assert!(o.stdout.contains("\"valid\":false"));
    assert!(o.stderr.contains("\"kind\":\"source\""));
    assert_eq!(cli(&["homology", &data("source.json")]).code, EXIT_FINDINGS);
    assert_eq!(
        cli(&["validate", &data("noncommuting.json")]).code,
        EXIT_FINDINGS
    );
    let o = cli(&["validate", &data("not_bijective.json")]);
    assert_eq!(o.code, EXIT_FINDINGS);
    assert!(o.stdout.contains("k-graph"));
    let o = cli(&["validate", &data("ex_5223.json")]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(
        o.stdout,
        "{\"kind\":\"kgraph\",\"k\":1,\"valid\":true,\"findings\":[]}\n"
    );
}

#[test]
fn allowed_sources_compute_with_a_note() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, r#"{"kind":"kgraph","k":1,"vertices":["a","b"],"matrices":[[1,1,0,0]],"allow_sources":true}"#)
        .unwrap();
    let o = cli(&["homology", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(!o.stdout.contains("\"notes\":[]"));
}

#[test]
fn schema_errors() {
    let o = cli(&["homology", &data("bad_shape.json")]);
    assert_eq!(o.code, EXIT_SCHEMA);
    assert!(
        o.stderr.contains("line 3, field `matrices[0]`"),
        "{}",
        o.stderr
    );
    let o = cli(&["homology", &data("missing.json")]);
    assert_eq!(o.code, EXIT_SCHEMA);
    assert!(o.stderr.starts_with("{\"error\":\"io\""));
    assert_eq!(cli(&["ktheory", &data("cycle6.json")]).code, EXIT_SCHEMA);
    assert_eq!(
        cli(&["kunneth", &data("cycle6.json"), &data("o2.json")]).code,
        EXIT_SCHEMA
    );
    assert_eq!(cli(&["frobnicate"]).code, EXIT_SCHEMA);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
}

#[test]
fn product_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let out = out.to_str().unwrap();
    let o = cli(&[
        "product",
        &data("ex_5223.json"),
        &data("ex_35.json"),
        "-o",
        out,
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.lines().all(|l| l == l.trim_end()));
    let expected = product(&kgraph(&data("ex_5223.json")), &kgraph(&data("ex_35.json")));
    assert_eq!(
        parse_instance(&text, out).unwrap(),
        Instance::KGraph(expected)
    );
    assert_eq!(cli(&["homology", out]).code, EXIT_OK);
}

#[test]
fn kunneth_agrees_with_products() {
    for (a, b) in [
        ("ex_5223.json", "o2.json"),
        ("ex_5223.json", "ex_35.json"),
        ("cycle6.json", "cycle6.json"),
    ] {
        let o = cli(&["kunneth", &data(a), &data(b)]);
        assert_eq!(o.code, EXIT_OK, "{a} x {b}: {}", o.stderr);
        assert!(o.stdout.contains("agrees with the direct computation"));
    }
}

#[test]
fn hk_report_json() {
    let o = cli(&["hk-report", &data("ex_5223.json")]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("\"psi_discrepancies\":[0,1]"));
    assert!(o
        .stdout
        .contains("\"categorical\":[{\"rank\":1,\"torsion\":[]},{\"rank\":11,\"torsion\":[]}]"));
}

#[test]
fn check_is_deterministic() {
    let first = cli(&["check", "--seed", "11", "--cases", "3"]);
    assert_eq!(first.code, EXIT_OK, "{}", first.stdout);
    assert!(first
        .stdout
        .starts_with("{\"seed\":11,\"passed\":true,\"suites\":["));
    assert_eq!(
        first.stdout,
        cli(&["check", "--seed", "11", "--cases", "3"]).stdout
    );
    assert_ne!(
        first.stdout,
        cli(&["check", "--seed", "12", "--cases", "3"]).stdout
    );
}

#[test]
fn seed_variable_overrides_the_flag() {
    let bin = env!("CARGO_BIN_EXE_ample-homology");
    let with_env = Command::new(bin)
        .args(["check", "--seed", "9", "--cases", "2"])
        .env("HOMOLOGY_SEED", "5")
        .output()
        .unwrap();
    let plain = Command::new(bin)
        .args(["check", "--seed", "5", "--cases", "2"])
        .env_remove("HOMOLOGY_SEED")
        .output()
        .unwrap();
    assert!(with_env.status.success());
    assert_eq!(with_env.stdout, plain.stdout);
    assert!(String::from_utf8_lossy(&plain.stdout).starts_with("{\"seed\":5,"));
    let bad = Command::new(bin)
        .args(["check", "--cases", "1"])
        .env("HOMOLOGY_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_SCHEMA));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ample-homology");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["homology", &data("ex_5223.json")]), Some(EXIT_OK));
    assert_eq!(
        status(&["validate", &data("source.json")]),
        Some(EXIT_FINDINGS)
    );
    assert_eq!(
        status(&["homology", &data("bad_shape.json")]),
        Some(EXIT_SCHEMA)
    );
    assert_eq!(status(&["ktheory", &data("ex_k3.json")]), Some(EXIT_RANK));
}
