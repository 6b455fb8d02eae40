use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn transent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = transent(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn make_fixtures(dir: &Path, extra: &[&str]) -> String {
    let dir = dir.to_str().unwrap();
    let mut args = vec!["make-fixtures", "--output", dir];
    args.extend_from_slice(extra);
    ok(&args);
    format!("{dir}/config.toml")
}

fn report(json: &str) -> serde_json::Value {
    serde_json::from_str(json).expect("valid JSON report")
}

fn metric_mean(report: &serde_json::Value, name: &str) -> f64 {
    report["metrics"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["name"] == name)
        .unwrap()["mean"]
        .as_f64()
        .unwrap()
}

#[test]
fn fixtures_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    make_fixtures(a.path(), &[]);
    make_fixtures(b.path(), &[]);
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 12);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn tiny_fixtures_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = transent(&[
        "make-fixtures",
        "--output",
        dir.path().to_str().unwrap(),
        "--words",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[config]"));
}

#[test]
fn noiseless_manifest_gives_perfect_alignment() {
    let dir = tempfile::tempdir().unwrap();
    let config = make_fixtures(dir.path(), &["--noise", "0"]);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["params"]["noise"], 0.0);
    let r = report(&ok(&["eval-align", "--config", &config]));
    assert_eq!(r["experiment"], "eval-align");
    assert_eq!(metric_mean(&r, "p@1"), 1.0);
    assert_eq!(r["versions"]["transent-cli"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = transent(&["eval-everything"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn translate_lists_k_neighbors_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let config = make_fixtures(dir.path(), &[]);
    let matrix = dir.path().join("w.mat");
    let matrix = matrix.to_str().unwrap();
    ok(&["fit-align", "--config", &config, "--matrix", matrix]);
    let text = ok(&[
        "translate",
        "--config",
        &config,
        "--matrix",
        matrix,
        "--token",
        "syn_w0003",
        "--k",
        "5",
    ]);
    let lines: Vec<(&str, f64)> = text
        .lines()
        .map(|l| {
            let (t, s) = l.split_once('\t').unwrap();
            (t, s.parse().unwrap())
        })
        .collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0].0, "en_w0003");
    assert!(lines.windows(2).all(|w| w[0].1 >= w[1].1));
}

#[test]
fn every_subcommand_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = make_fixtures(dir.path(), &["--noise", "0.3"]);
    for cmd in ["eval-align", "eval-binary", "eval-anew", "eval-reviews"] {
        let first = ok(&[cmd, "--config", &config]);
        assert_eq!(first, ok(&[cmd, "--config", &config]), "{cmd}");
    }
    let out = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    for round in ["a", "b"] {
        ok(&[
            "fit-align",
            "--config",
            &config,
            "--matrix",
            &out(&format!("{round}.mat")),
            "--output",
            &out(&format!("{round}.json")),
        ]);
        ok(&[
            "featurize",
            "--config",
            &config,
            "--output",
            &out(&format!("{round}.jsonl")),
        ]);
    }
    for ext in ["mat", "json", "jsonl"] {
        assert_eq!(
            fs::read(out(&format!("a.{ext}"))).unwrap(),
            fs::read(out(&format!("b.{ext}"))).unwrap(),
            "{ext}"
        );
    }
}

#[test]
fn set_overrides_flow_into_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = make_fixtures(dir.path(), &[]);
    let r = report(&ok(&[
        "eval-binary",
        "--config",
        &config,
        "--set",
        "binary.run_count=3",
        "--set",
        "seed=5",
    ]));
    assert_eq!(r["seed"], 5);
    assert_eq!(r["config"]["binary"]["run_count"], 3);
    assert_eq!(r["metrics"][0]["runs"].as_array().unwrap().len(), 3);
}

#[test]
fn predictions_csv_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = make_fixtures(dir.path(), &[]);
    let csv = dir.path().join("pred.csv");
    let json = dir.path().join("report.json");
    let stdout = ok(&[
        "eval-anew",
        "--config",
        &config,
        "--output",
        json.to_str().unwrap(),
        "--predictions",
        csv.to_str().unwrap(),
    ]);
    assert!(stdout.is_empty());
    let r = report(&fs::read_to_string(json).unwrap());
    assert_eq!(r["experiment"], "eval-anew");
    let csv = fs::read_to_string(csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("run,token,gold,predicted"));
    assert!(lines.count() > 0);
}

#[test]
fn errors_name_the_module() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.toml");
    let out = transent(&["eval-align", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.starts_with("error[io]") && stderr.contains("absent.toml"),
        "{stderr}"
    );
    assert!(out.stdout.is_empty());

    let config = make_fixtures(dir.path(), &[]);
    let out = transent(&[
        "eval-align",
        "--config",
        &config,
        "--set",
        "alignment.folds=3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.starts_with("error[config]") && stderr.contains("folds"),
        "{stderr}"
    );
    assert!(out.stdout.is_empty());
}
