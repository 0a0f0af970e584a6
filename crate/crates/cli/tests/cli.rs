//! End-to-end tests of the fairlens binary: exit codes, file outputs,
//! manifests, defaults resolution, and the full pipeline wiring.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fairlens_core::data_model::{write_landmarks, LandmarkSchema};
use fairlens_core::synthetic;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fairlens")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env_remove("FAIRLENS_CONFIG")
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Writes a landmark fixture plus a synthetic human label channel keyed to
/// face geometry (so trained models correlate with it).
fn write_fixture(dir: &Path, n: usize) -> (PathBuf, PathBuf) {
    let faces = synthetic::fixture_faces(n);
    let landmarks = dir.join("landmarks.csv");
    write_landmarks(&landmarks, &faces, &LandmarkSchema::default()).unwrap();

    let labels = dir.join("human.csv");
    let mut body = String::from("id,label\n");
    for (i, face) in faces.iter().enumerate() {
        // deterministic pseudo-human labels, loosely geometry-linked
        let wide = face.points[16].x - face.points[0].x > 100.0;
        let label = u8::from(wide || i % 3 == 0);
        body.push_str(&format!("{},{}\n", face.id, label));
    }
    std::fs::write(&labels, body).unwrap();
    (landmarks, labels)
}

#[test]
fn annotate_attractiveness_happy_path_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (landmarks, _) = write_fixture(dir.path(), 12);
    let out = dir.path().join("scores.csv");
    let result = run_in(
        dir.path(),
        &[
            "annotate-attractiveness",
            "--landmarks",
            landmarks.to_str().unwrap(),
            "--delta",
            "0.19",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert_ok(&result);

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "id,frontal,gr_score,sym_score,neo_score,gr_label,s_label,nc_label"
    );
    assert_eq!(lines.count(), 12);

    let manifest_path = dir.path().join("scores.csv.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["command"], "annotate-attractiveness");
    assert_eq!(manifest["config"]["delta"], 0.19);
    assert!(manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|o| o.as_str().unwrap().ends_with("scores.csv")));
    assert!(manifest["inputs"].as_object().unwrap().len() == 1);
}

#[test]
fn missing_required_flag_exits_2_with_usage() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["annotate-attractiveness"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage"), "stderr: {stderr}");
}

#[test]
fn unknown_flag_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["sweep", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "annotate-attractiveness",
            "--landmarks",
            "nope.csv",
            "--out",
            "x.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

fn sha(path: &Path) -> String {
    use sha2::Digest;
    format!("{:x}", sha2::Sha256::digest(std::fs::read(path).unwrap()))
}

/// Runs the whole pipeline in `dir` and returns the paths of the
/// deterministic outputs.
fn run_pipeline(dir: &Path, threads: &str) -> Vec<PathBuf> {
    let (landmarks, human) = write_fixture(dir, 80);
    let landmarks = landmarks.to_str().unwrap();
    let human_s = human.to_str().unwrap();

    let scores = dir.join("scores.csv");
    let features = dir.join("features.csv");
    assert_ok(&run_in(
        dir,
        &[
            "--threads",
            threads,
            "annotate-attractiveness",
            "--landmarks",
            landmarks,
            "--beta",
            "50",
            "--out",
            scores.to_str().unwrap(),
            "--features-out",
            features.to_str().unwrap(),
        ],
    ));

    // one model per label channel
    let mut pred_files = Vec::new();
    for (name, labels, col) in [
        ("h", human_s, "label"),
        ("gr", scores.to_str().unwrap(), "gr_label"),
        ("s", scores.to_str().unwrap(), "s_label"),
    ] {
        let model = dir.join(format!("model_{name}.json"));
        assert_ok(&run_in(
            dir,
            &[
                "--threads",
                threads,
                "--quiet",
                "train",
                "--features",
                features.to_str().unwrap(),
                "--labels",
                labels,
                "--labels-col",
                col,
                "--lr",
                "0.1",
                "--epochs",
                "300",
                "--out",
                model.to_str().unwrap(),
            ],
        ));
        let preds = dir.join(format!("preds_{name}.csv"));
        assert_ok(&run_in(
            dir,
            &[
                "predict",
                "--model",
                model.to_str().unwrap(),
                "--features",
                features.to_str().unwrap(),
                "--out",
                preds.to_str().unwrap(),
            ],
        ));
        pred_files.push(preds);
    }

    let cands = dir.join("cands.csv");
    let mut sweep_args: Vec<String> = vec!["--threads".into(), threads.into(), "sweep".into()];
    for p in &pred_files {
        sweep_args.push("--preds".into());
        sweep_args.push(p.to_str().unwrap().into());
    }
    sweep_args.extend([
        "--truth".into(),
        human_s.to_string(),
        "--groups".into(),
        landmarks.to_string(),
        "--group-col".into(),
        "sensitive".into(),
        "--metric".into(),
        "eoo".into(),
        "--step".into(),
        "0.25".into(),
        "--out".into(),
        cands.to_str().unwrap().into(),
    ]);
    let args: Vec<&str> = sweep_args.iter().map(String::as_str).collect();
    assert_ok(&run_in(dir, &args));

    let frontier = dir.join("frontier.csv");
    let topk = dir.join("topk.csv");
    let svg = dir.join("plot.svg");
    assert_ok(&run_in(
        dir,
        &[
            "pareto",
            "--candidates",
            cands.to_str().unwrap(),
            "--k",
            "3",
            "--out",
            frontier.to_str().unwrap(),
            "--topk",
            topk.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
            "--hline",
            "0.2",
        ],
    ));

    let report = dir.join("report.json");
    assert_ok(&run_in(
        dir,
        &[
            "report",
            "--candidates",
            cands.to_str().unwrap(),
            "--frontier",
            frontier.to_str().unwrap(),
            "--out",
            report.to_str().unwrap(),
        ],
    ));

    let mut outputs = vec![scores, features, cands, frontier, topk, svg, report];
    outputs.extend(pred_files);
    outputs
}

#[test]
fn full_pipeline_one_hot_rows_match_individual_evaluations() {
    let dir = tempfile::tempdir().unwrap();
    let outputs = run_pipeline(dir.path(), "2");
    let cands_path = dir.path().join("cands.csv");
    let cands = fairlens_core::ensemble::read_candidates_csv(&cands_path).unwrap();
    assert_eq!(cands.len(), 5usize.pow(3) - 1);

    // evaluate each base model individually through the CLI
    for (i, name) in ["h", "gr", "s"].iter().enumerate() {
        let report_path = dir.path().join(format!("eval_{name}.json"));
        assert_ok(&run_in(
            dir.path(),
            &[
                "evaluate",
                "--pred",
                dir.path()
                    .join(format!("preds_{name}.csv"))
                    .to_str()
                    .unwrap(),
                "--truth",
                dir.path().join("human.csv").to_str().unwrap(),
                "--groups",
                dir.path().join("landmarks.csv").to_str().unwrap(),
                "--group-col",
                "sensitive",
                "--out",
                report_path.to_str().unwrap(),
            ],
        ));
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();

        let one_hot = cands
            .iter()
            .find(|c| c.weights.one_hot_index() == Some(i) && c.weights.alphas()[i] == 1.0)
            .expect("grid contains the one-hot vector");
        assert_eq!(
            Some(one_hot.accuracy),
            report["accuracy_overall"].as_f64(),
            "model {name}"
        );
        assert_eq!(one_hot.gap, report["delta_eoo"].as_f64(), "model {name}");
    }

    // frontier rows are a subset of the sweep rows
    let frontier =
        fairlens_core::ensemble::read_candidates_csv(&dir.path().join("frontier.csv")).unwrap();
    assert!(!frontier.is_empty());
    for point in &frontier {
        assert!(cands.iter().any(|c| c == point));
    }

    // the SVG plots every defined candidate and every frontier point
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    let defined = cands.iter().filter(|c| c.gap.is_some()).count();
    assert_eq!(svg.matches("class=\"candidate\"").count(), defined);
    assert_eq!(svg.matches("class=\"frontier\"").count(), frontier.len());

    // every output has a manifest next to it or is listed in one
    let mut listed: Vec<String> = Vec::new();
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        if path.to_string_lossy().ends_with(".manifest.json") {
            let m: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
            for o in m["outputs"].as_array().unwrap() {
                listed.push(o.as_str().unwrap().to_string());
            }
        }
    }
    for output in &outputs {
        let name = output.file_name().unwrap().to_string_lossy();
        assert!(
            listed.iter().any(|o| o.ends_with(name.as_ref())),
            "{name} not referenced by any manifest"
        );
    }
}

#[test]
fn pipeline_does_not_mutate_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let (landmarks, human) = write_fixture(dir.path(), 20);
    let before = (sha(&landmarks), sha(&human));
    let out = dir.path().join("scores.csv");
    assert_ok(&run_in(
        dir.path(),
        &[
            "annotate-attractiveness",
            "--landmarks",
            landmarks.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
    ));
    assert_eq!(before, (sha(&landmarks), sha(&human)));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let (landmarks, _) = write_fixture(dir.path(), 10);
    let config = dir.path().join("defaults.json");
    std::fs::write(&config, r#"{"delta": 0.21, "beta": 50.0}"#).unwrap();

    let out = dir.path().join("scores.csv");
    let result = Command::new(bin())
        .args([
            "annotate-attractiveness",
            "--landmarks",
            landmarks.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .current_dir(dir.path())
        .env("FAIRLENS_CONFIG", &config)
        .output()
        .unwrap();
    assert_ok(&result);
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("scores.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["config"]["delta"], 0.21);
    assert_eq!(manifest["config"]["beta"], 50.0);

    // explicit flag beats the config file
    let result = Command::new(bin())
        .args([
            "annotate-attractiveness",
            "--landmarks",
            landmarks.to_str().unwrap(),
            "--delta",
            "0.17",
            "--out",
            out.to_str().unwrap(),
        ])
        .current_dir(dir.path())
        .env("FAIRLENS_CONFIG", &config)
        .output()
        .unwrap();
    assert_ok(&result);
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("scores.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["config"]["delta"], 0.17);
}
