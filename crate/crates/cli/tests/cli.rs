use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn manifest(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const EX_FIELD: &str = "2^6/1011011";

#[test]
fn gold_five_uniformity_listing() {
    let v = json(&cdiff(&[
        "uniformity",
        "--field",
        EX_FIELD,
        "--fn",
        "x^5",
        "--c",
        "all",
    ]));
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 64);
    let mut ones: Vec<&str> = Vec::new();
    for r in results {
        let c = r["c"].as_str().unwrap();
        let u = r["uniformity"].as_u64().unwrap();
        match (c, u) {
            ("g^0", 4) => {}
            (_, 1) => ones.push(c),
            (_, 5) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
    assert_eq!(ones, ["0", "g^21", "g^42"]);
    assert_eq!(v["field"], EX_FIELD);
}

#[test]
fn identity_summary() {
    let v = json(&cdiff(&["summary", "--field", "2^4", "--fn", "x"]));
    assert_eq!(v["permutation"], true);
    assert_eq!(v["pcn_c_set"].as_array().unwrap().len(), 15);
    assert!(!v["pcn_c_set"].as_array().unwrap().contains(&Value::from("g^0")));
}

#[test]
fn gold_five_boomerang() {
    let v = json(&cdiff(&["bct", "--field", EX_FIELD, "--fn", "x^5"]));
    assert_eq!(v["boomerang_uniformity"], 4);
    let w = json(&cdiff(&["walsh", "--field", EX_FIELD, "--fn", "x^5"]));
    assert_eq!(w["nonlinearity"], 24);
}

#[test]
fn cddt_rows_sum_to_field_order() {
    let v = json(&cdiff(&["cddt", "--field", "3^2", "--fn", "x^2", "--c", "-1"]));
    for row in v["table"].as_array().unwrap() {
        assert_eq!(
            row.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum::<u64>(),
            9
        );
    }
    let csv = stdout(&cdiff(&[
        "cddt", "--field", "3^2", "--fn", "x^2", "--c", "-1", "--format", "csv",
    ]));
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.starts_with("a,0,g^0,"));
}

#[test]
fn optimal_scan_finds_fourteen_values() {
    let o = cdiff(&[
        "scan",
        "--field",
        EX_FIELD,
        "--fn",
        "x^5 + Tr[2](v*x^5)",
        "--grid",
        "v=all;tr2!=1",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (v, max, per_c, bu, nl) = (col("v"), col("max_cdu"), col("per_c"), col("bu"), col("nl"));
    let base = json(&cdiff(&["uniformity", "--field", EX_FIELD, "--fn", "x^5"]));
    let base: Vec<u64> = base["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["uniformity"].as_u64().unwrap())
        .collect();
    let mut found = Vec::new();
    let mut rows = 0;
    for line in lines {
        rows += 1;
        let cols: Vec<&str> = line.split(',').collect();
        let us: Vec<u64> = cols[per_c].split(' ').map(|s| s.parse().unwrap()).collect();
        assert_eq!((cols[bu], cols[nl]), ("4", "24"));
        if cols[max] == "4" {
            found.push(cols[v].trim_start_matches("g^").parse::<u32>().unwrap());
            for (c, (&h, &f)) in us.iter().zip(&base).enumerate() {
                if c != 1 && f == 5 {
                    assert_eq!(h, 4);
                }
            }
        } else {
            assert_eq!(us, base);
        }
    }
    assert_eq!(rows, 48);
    found.sort();
    assert_eq!(found, [11, 21, 22, 23, 25, 29, 37, 42, 43, 44, 46, 50, 53, 58]);
}

#[test]
fn single_point_scan_matches_summary() {
    let o = cdiff(&[
        "scan",
        "--field",
        "2^4",
        "--fn",
        "x^3 + u*Tr[1](x^3)",
        "--grid",
        "u={g^5}",
    ]);
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let s = json(&cdiff(&["summary", "--field", "2^4", "--fn", "x^3 + g^5*Tr[1](x^3)"]));
    let row = &rows[0];
    assert_eq!(row["permutation"], s["permutation"]);
    assert_eq!(row["differential_uniformity"], s["differential_uniformity"]);
    assert_eq!(row["boomerang_uniformity"], s["boomerang_uniformity"]);
    assert_eq!(row["nonlinearity"], s["nonlinearity"]);
    let per_c: Vec<&Value> = s["c_uniformity"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| &c["uniformity"])
        .collect();
    assert_eq!(row["per_c"].as_array().unwrap().iter().collect::<Vec<_>>(), per_c);
}

#[test]
fn h2_style_scan_is_pcn() {
    let v = json(&cdiff(&[
        "scan",
        "--field",
        "2^4",
        "--fn",
        "x + u*Tr[1](x)",
        "--grid",
        "u=sub1;nonzero",
    ]));
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["pcn_count"], 15);
    }
}

#[test]
fn grid_cap_is_enforced() {
    let o = cdiff(&[
        "scan",
        "--field",
        "2^6",
        "--fn",
        "x^5 + u*Tr[1](v*x)",
        "--grid",
        "u=all&v=all",
        "--grid-cap",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_stable_across_thread_counts() {
    let args = [
        "scan",
        "--field",
        EX_FIELD,
        "--fn",
        "x^5 + Tr[2](v*x^5)",
        "--grid",
        "v=sub2",
        "--format",
        "csv",
    ];
    let one = cdiff(&[&["--threads", "1"], &args[..]].concat());
    let four = cdiff(&[&["--threads", "4"], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let u1 = cdiff(&["uniformity", "--field", "3^3", "--fn", "x^5", "--threads", "1"]);
    let u3 = cdiff(&["uniformity", "--field", "3^3", "--fn", "x^5", "--threads", "3"]);
    assert_eq!(u1.stdout, u3.stdout);
}

#[test]
fn switch_file_runs_the_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let path = manifest(
        &dir,
        "h.json",
        r#"{"base": "x^5", "terms": [{"u": "1", "f": "Tr[2](g^11*x^5)", "m": 2}]}"#,
    );
    let v = json(&cdiff(&[
        "uniformity",
        "--field",
        EX_FIELD,
        "--switch-file",
        &path,
        "--c",
        "0,g^21,g^1",
    ]));
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    for r in results {
        let applicable = r["criterion"]["applicable"].as_bool().unwrap();
        assert_eq!(applicable, r["c"] != "g^1");
        if applicable {
            assert_eq!(r["criterion"]["witness"].is_null(), r["uniformity"] == 1);
        }
    }
}

#[test]
fn bad_inputs_exit_two() {
    assert_eq!(
        cdiff(&["uniformity", "--field", "6^2", "--fn", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cdiff(&["uniformity", "--field", "2^4", "--fn", "x +"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cdiff(&[
            "uniformity",
            "--field",
            "2^4",
            "--fn",
            "x",
            "--c",
            "g^99999999999999999999"
        ])
        .status
        .code(),
        Some(2)
    );
    let o = cdiff(&["walsh", "--field", "2^4", "--fn", "x", "--c", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = manifest(&dir, "empty.json", "[]");
    let o = cdiff(&["verify", &path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn falsified_claim_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let path = manifest(
        &dir,
        "bad.json",
        r#"[{"entry": "claim", "field": "2^4", "params": {"function": "x^3", "expect": {"at": {"1": 1}}}}]"#,
    );
    let o = cdiff(&["verify", &path]);
    assert_eq!(o.status.code(), Some(1));
    let line: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(line["verdict"], "fail");
    let ce = &line["counterexamples"][0];
    assert_eq!(ce["c"], "g^0");
    assert_eq!(ce["measured"], 2);
}

#[test]
fn hypothesis_violation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = manifest(
        &dir,
        "gate.json",
        r#"[{"entry": "thm41", "field": "3^3", "params": {"variant": "Hk", "L": ["1"], "k": 1}}]"#,
    );
    let o = cdiff(&["verify", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"error\""));
}

#[test]
fn bundled_manifest_passes() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../manifests/paper_examples.json");
    let o = cdiff(&["verify", path.to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    let n = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .filter(|l| l.contains("\"entry\""))
        .count();
    assert_eq!(text.lines().count(), n);
    assert!(text.lines().all(|l| l.contains(r#""verdict":"pass""#)));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = cdiff(&["bct", "--field", "2^3", "--fn", "x^3", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["boomerang_uniformity"], 2);
}
