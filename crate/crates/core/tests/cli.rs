use cospacings::{AlternativeFamily, PowerTable, RngStream};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cospacings"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_values(path: &Path, values: &[f64]) {
    let mut s = String::from("# generated\n");
    for v in values {
        s.push_str(&format!("{v}\n"));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn equispaced_data_is_not_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("eq.txt");
    write_values(
        &data,
        &(1..=100).map(|i| i as f64 / 101.0).collect::<Vec<_>>(),
    );
    let out = run(&[
        "test",
        data.to_str().unwrap(),
        "--stat",
        "greenwood",
        "--reps",
        "2000",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports[0]["decision"], "fail_to_reject");
    assert_eq!(reports[0]["spec"], "greenwood");
}

#[test]
fn light_tailed_data_is_rejected_by_co_greenwood() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("beta.txt");
    write_values(
        &data,
        &AlternativeFamily::Beta(2.5).sample(100, RngStream::new(2024, 0)),
    );
    let out = run(&[
        "test",
        data.to_str().unwrap(),
        "--stat",
        "greenwood:co",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 3);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("greenwood:co,"));
    assert!(row.contains(",reject,"));
}

#[test]
fn malformed_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing here\n\n").unwrap();
    assert_eq!(code(&run(&["test", empty.to_str().unwrap()])), 1);

    let junk = dir.path().join("junk.txt");
    std::fs::write(&junk, "0.1\nzero point two\n").unwrap();
    assert_eq!(code(&run(&["test", junk.to_str().unwrap()])), 1);

    let outside = dir.path().join("outside.txt");
    std::fs::write(&outside, "0.1\n1.5\n0.3\n").unwrap();
    let out = run(&["test", outside.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--null"));

    assert_eq!(
        code(&run(&[
            "test",
            dir.path().join("missing").to_str().unwrap()
        ])),
        1
    );
}

#[test]
fn null_transform_accepts_out_of_range_and_calibrates() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("a.txt");
    write_values(
        &data,
        &AlternativeFamily::A(1.5).sample(200, RngStream::new(77, 0)),
    );
    let out = run(&[
        "test",
        data.to_str().unwrap(),
        "--null",
        "A:1.5",
        "--reps",
        "2000",
    ]);
    assert_eq!(code(&out), 0);

    let outside = dir.path().join("outside.txt");
    std::fs::write(&outside, "-0.5\n0.2\n0.4\n0.9\n2\n").unwrap();
    let out = run(&[
        "test",
        outside.to_str().unwrap(),
        "--null",
        "uniform",
        "--stat",
        "rao",
        "--reps",
        "500",
    ]);
    assert!([0, 3].contains(&code(&out)));
}

#[test]
fn invalid_configuration_exits_2() {
    assert_eq!(
        code(&run(&[
            "critical-values",
            "--n",
            "10",
            "--stat",
            "greenwood:sideways"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "power", "--family", "gamma:2", "--n", "10", "--stat", "rao"
        ])),
        2
    );
    assert_eq!(code(&run(&["power", "--family", "A:1.5", "--n", "10"])), 2);
    assert_eq!(
        code(&run(&[
            "critical-values",
            "--n",
            "10",
            "--stat",
            "rao:m=3:disjoint"
        ])),
        2
    );
    assert_eq!(code(&run(&["efficacy", "--perturbation", "zigzag"])), 2);
    assert_eq!(code(&run(&["efficacy", "--stat", "rao:max"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"alternatives": ["A:1.5"], "sample_sizes": [10]}"#).unwrap();
    assert_eq!(code(&run(&["power", "--config", cfg.to_str().unwrap()])), 2);
    std::fs::write(
        &cfg,
        r#"{"alternatives": ["A:1.5"], "sample_sizes": [10], "statistics": ["greenwood"],
            "alpha": 1.5, "replications": 10, "master_seed": 1}"#,
    )
    .unwrap();
    assert_eq!(code(&run(&["power", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn single_replication_power_cells_are_binary() {
    let out = run(&[
        "power",
        "--family",
        "B:1.5",
        "--family",
        "beta:0.5",
        "--n",
        "10",
        "--n",
        "30",
        "--stat",
        "greenwood",
        "--stat",
        "moran:co",
        "--reps",
        "1",
        "--null-reps",
        "1000",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alternative,n,G,L*"));
    let mut rows = 0;
    for line in lines {
        rows += 1;
        for cell in line.split(',').skip(2) {
            assert!(cell == "0" || cell == "1", "{line}");
        }
    }
    assert_eq!(rows, 4);
}

fn small_power(dir: &Path, name: &str, workers: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let out = run(&[
        "power",
        "--family",
        "A:1.5",
        "--family",
        "beta:2.5",
        "--n",
        "10",
        "--n",
        "20",
        "--stat",
        "greenwood",
        "--stat",
        "greenwood:co",
        "--stat",
        "rao:max",
        "--stat",
        "entropy:co:m=2:overlap",
        "--reps",
        "400",
        "--null-reps",
        "2000",
        "--seed",
        "9",
        "--workers",
        workers,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn seeded_power_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = small_power(dir.path(), "a.csv", "1");
    let b = small_power(dir.path(), "b.csv", "3");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read(PowerTable::sidecar_path(&a)).unwrap(),
        std::fs::read(PowerTable::sidecar_path(&b)).unwrap()
    );
}

#[test]
fn csv_and_sidecar_round_trip_to_json_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = small_power(dir.path(), "t.csv", "2");
    let from_csv = PowerTable::read_csv(&csv).unwrap();
    let json = dir.path().join("t.json");
    let out = run(&[
        "power",
        "--family",
        "A:1.5",
        "--family",
        "beta:2.5",
        "--n",
        "10",
        "--n",
        "20",
        "--stat",
        "greenwood",
        "--stat",
        "greenwood:co",
        "--stat",
        "rao:max",
        "--stat",
        "entropy:co:m=2:overlap",
        "--reps",
        "400",
        "--null-reps",
        "2000",
        "--seed",
        "9",
        "--format",
        "json",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let from_json: PowerTable =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(from_csv, from_json);
    assert_eq!(from_csv.columns, ["G", "G*", "Rmax", "E*(m=2;overlap)"]);
}

#[test]
fn help_documents_every_grammar_production() {
    for sub in [
        vec!["--help"],
        vec!["test", "--help"],
        vec!["power", "--help"],
    ] {
        let out = run(&sub);
        assert_eq!(code(&out), 0);
        let text = String::from_utf8(out.stdout).unwrap();
        for token in [
            "greenwood",
            "moran",
            "rao",
            "entropy",
            ":co",
            ":max",
            ":m=<int>",
            ":disjoint",
            ":overlap",
            "uniform",
            "A:<k>",
            "B:<k>",
            "C:<k>",
            "beta:<k>",
            "linear",
            "cos[:<int>]",
            "Exit codes",
        ] {
            assert!(text.contains(token), "`{token}` missing from {sub:?} help");
        }
    }
}

#[test]
fn efficacy_and_hellinger_emit_records() {
    let out = run(&[
        "efficacy",
        "--perturbation",
        "linear",
        "--perturbation",
        "cos:2",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 8);
    for r in records {
        for key in ["h", "family_or_l", "value", "quadrature_error"] {
            assert!(r.get(key).is_some(), "{key} missing in {r}");
        }
    }
    let greenwood_linear = records
        .iter()
        .find(|r| r["h"] == "greenwood" && r["family_or_l"] == "linear")
        .unwrap();
    assert!((greenwood_linear["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(greenwood_linear["argmax"], true);

    let out = run(&["hellinger", "--family", "A:1.5", "--family", "B:1.5"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["family_or_l"], "A:1.5");
    assert!(v[0]["gap"].as_f64().unwrap() > 1e-4);
    assert!(v[1]["gap"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn lemma_checks_report_passes() {
    let out = run(&[
        "lemma-checks",
        "--reps",
        "5000",
        "--family",
        "A:1.5",
        "--family",
        "B:1.5",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["null_equality"].as_array().unwrap().len(), 4);
    assert_eq!(v["fold_inequality"][0]["relation"], "strict");
    assert_eq!(v["fold_inequality"][1]["relation"], "equal");
}

#[test]
fn critical_value_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cv.json");
    let args = [
        "critical-values",
        "--n",
        "15",
        "--stat",
        "moran",
        "--stat",
        "moran:co",
        "--reps",
        "3000",
        "--format",
        "csv",
        "--cv-cache",
        cache.to_str().unwrap(),
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let stored = std::fs::read_to_string(&cache).unwrap();
    let entries: Value = serde_json::from_str(&stored).unwrap();
    assert_eq!(entries["entries"].as_object().unwrap().len(), 1);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), stored);
}
