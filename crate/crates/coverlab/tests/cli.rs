use std::path::Path;
use std::process::{Command, Output};

fn coverlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coverlab")).args(args).output().expect("spawn coverlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sample_round_trips_through_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let cover = dir.path().join("cover.json");
    let o = coverlab(&["sample", "--graph", "family:complete:4", "-n", "5", "--seed", "3", "-o", cover.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let g = coverlab::format::load_graph(&cover).unwrap();
    assert_eq!(g.vertex_count(), 20);
    assert_eq!(g.regular_degree(), Some(3));

    let o = coverlab(&["spectrum", "--graph", cover.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn sampling_is_deterministic_across_runs() {
    let args = ["sample", "--graph", "family:petersen", "-n", "4", "--seed", "9"];
    assert_eq!(coverlab(&args).stdout, coverlab(&args).stdout);
}

#[test]
fn malformed_graph_reports_line_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        "{\n  \"vertices\": 2,\n  \"edges\": [\n    {\"id\": 0, \"tail\": 0, \"head\": 1, \"inv\": 1},\n    {\"id\": 1, \"tail\": 1, \"head\": 7, \"inv\": 0}\n  ]\n}\n",
    )
    .unwrap();
    let o = coverlab(&["tangle-scan", "--graph", p.to_str().unwrap(), "--nu", "2", "--r", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));
}

#[test]
fn parity_mismatch_is_a_config_error() {
    let o = coverlab(&["sample", "--graph", "family:bouquet:0:1", "-n", "3", "--half-loop", "matching"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn magnify_check_on_petersen() {
    let o = coverlab(&["magnify-check", "--graph", "family:petersen", "--R", "1", "--gamma", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], true);
}

#[test]
fn verify_lemmas_small() {
    let o = coverlab(&["verify-lemmas", "--max-n", "6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(!out.is_empty() && out.lines().all(|l| l.starts_with("PASS")), "{out}");
}

#[test]
fn walk_census_writes_csv_and_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("census.csv");
    let cat = dir.path().join("catalog.json");
    let o = coverlab(&[
        "walk-census",
        "--graph",
        "family:complete:4",
        "--max-k",
        "4",
        "--csv",
        csv.to_str().unwrap(),
        "--catalog",
        cat.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut total = 0u64;
    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    for rec in rdr.deserialize::<coverlab::report::CensusRow>() {
        let r = rec.unwrap();
        if r.k == 4 {
            total += r.count;
        }
    }
    let g = coverlab::format::family("complete:4").unwrap();
    assert_eq!(total, coverlab::core::walks::snbc_count(&g, 4).unwrap());
    let catalog: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cat).unwrap()).unwrap();
    assert!(catalog.as_object().is_some_and(|m| m.contains_key("0")));
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn experiment_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"base": "family:complete:4", "model": {"model": "permutation", "half_loop": null, "parity": "any"},
            "degrees": [4, 8], "trials": 20, "epsilon": 0.05, "seed": 7}"#,
    );
    let prefix = dir.path().join("run");
    let o = coverlab(&["experiment", "--config", cfg.to_str().unwrap(), "--out", prefix.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json = std::fs::read_to_string(prefix.with_extension("json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn experiment_config_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"base": "family:complete:4", "degrees": []}"#);
    let o = coverlab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let cfg = write_config(
        dir.path(),
        r#"{"base": "family:cycle:4", "model": {"model": "permutation", "half_loop": null, "parity": "any"},
            "degrees": [2], "trials": 0, "epsilon": 0.1, "seed": 1}"#,
    );
    let o = coverlab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let cfg = write_config(
        dir.path(),
        r#"{"base": "family:complete:4", "model": {"model": "permutation", "half_loop": null, "parity": "any"},
            "degrees": [4, 6], "trials": 2, "epsilon": 0.1, "seed": 1,
            "magnifier": {"r": 1, "gamma": 0.1, "mode": "exhaustive"}}"#,
    );
    let o = coverlab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("sampled"), "{}", stderr(&o));
}
