//! Drives the `milstab` binary and checks its files against direct library calls.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use milstab_core::evaluation::pareto_frontier;
use milstab_core::mildata::{generate_synthetic, load_dataset, SynthConfig};
use milstab_core::stability::{pairwise_matrix, positiveness_histogram};
use milstab_core::{InstanceLabeling, Measure, StabilityReport};
use tempfile::TempDir;

fn milstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn synth_json() -> serde_json::Value {
    serde_json::json!({
        "n_pos_bags": 8, "n_neg_bags": 8, "inst_per_bag": 4, "d": 3,
        "witness_fraction": 0.25, "cluster_separation": 4.0, "seed": 3
    })
}

fn write_config(dir: &TempDir, classifiers: serde_json::Value, repetitions: usize) -> PathBuf {
    let cfg = serde_json::json!({
        "data": {"synthetic": synth_json()},
        "split": {"random": {"test_fraction": 0.25, "seed": 2}},
        "classifiers": classifiers,
        "repetitions": repetitions,
        "seed": 11
    });
    let path = dir.path().join("cfg.json");
    fs::write(&path, cfg.to_string()).unwrap();
    path
}

/// Runs a three-classifier experiment and returns `(dir, report path, report)`.
fn run_small() -> (TempDir, PathBuf, StabilityReport) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        serde_json::json!([
            {"kind": "mi_svm"},
            {"kind": "simple_nm"},
            {"name": "boost", "kind": "milboost", "rounds": 10}
        ]),
        4,
    );
    let out = dir.path().join("report.json");
    let o = milstab(&["run", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = StabilityReport::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    (dir, out, report)
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn labelings(report: &StabilityReport, name: &str) -> Vec<InstanceLabeling> {
    report
        .classifier(name)
        .unwrap()
        .replicates
        .iter()
        .filter_map(|r| Some(InstanceLabeling::new(r.index, r.instance_labels.clone()?).unwrap()))
        .collect()
}

#[test]
fn run_prints_one_summary_line_per_classifier() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, serde_json::json!([{"kind": "simple_1nn"}, {"kind": "mi_nm"}]), 3);
    let out = dir.path().join("r.json");
    let o = milstab(&["run", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("simple_1nn\t") && lines[0].contains("S+="));
    assert!(lines[1].starts_with("mi_nm\t") && lines[1].contains("auc="));
}

#[test]
fn single_repetition_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, serde_json::json!([{"kind": "mi_svm"}]), 1);
    let o = milstab(&["run", "--config", p(&cfg), "--out", p(&dir.path().join("r.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("R >= 2"), "{}", stderr(&o));
}

#[test]
fn unknown_classifier_kind_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, serde_json::json!([{"kind": "mi_forest"}]), 2);
    let o = milstab(&["run", "--config", p(&cfg), "--out", p(&dir.path().join("r.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_replicate_failing_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // A penalty this large zeroes every weight, which MILES reports as an error.
    let cfg = write_config(
        &dir,
        serde_json::json!([{"kind": "simple_nm"}, {"kind": "miles", "lambda": 1e9}]),
        2,
    );
    let out = dir.path().join("r.json");
    let o = milstab(&["run", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("miles"));
    // The report is still written so the surviving classifiers can be inspected.
    let report = StabilityReport::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.classifier("miles").unwrap().all_failed());
    assert!(!report.classifier("simple_nm").unwrap().all_failed());
}

#[test]
fn unknown_flag_is_rejected() {
    let o = milstab(&["inspect", "--data", "x.csv", "--verbose"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pareto_csv_matches_library_frontier() {
    let (dir, report_path, report) = run_small();
    for (flag, measure) in [("s+", Measure::PositiveAgreement), ("s", Measure::Agreement)] {
        let csv_path = dir.path().join(format!("pareto_{flag}.csv"));
        let o = milstab(&["pareto", "--report", p(&report_path), "--csv", p(&csv_path), "--measure", flag]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let rows = read_csv(&csv_path);
        assert_eq!(rows.len(), report.classifiers.len() + 1);

        let points = report.pareto_points(measure);
        let frontier = pareto_frontier(&points).unwrap();
        for (i, (row, point)) in rows.iter().zip(&points).enumerate() {
            assert_eq!(row[0], point.id);
            assert_eq!(row[1].parse::<f64>().unwrap(), point.auc);
            assert_eq!(row[2].parse::<f64>().unwrap(), point.stability);
            assert_eq!(row[4] == "1", frontier.is_on_frontier(i));
        }
        let baseline = rows.last().unwrap();
        assert_eq!(baseline[0], "all_positive");
        assert_eq!(baseline[1].parse::<f64>().unwrap(), 0.5);
        assert_eq!(baseline[2].parse::<f64>().unwrap(), 1.0);
    }
}

#[test]
fn pareto_defaults_to_positive_agreement() {
    let (_dir, report_path, _) = run_small();
    let o = milstab(&["pareto", "--report", p(&report_path)]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.lines().next().unwrap().contains("S+"));
}

#[test]
fn matrix_csv_matches_recomputed_matrices() {
    let (dir, report_path, report) = run_small();
    let out = dir.path().join("m.csv");
    let o = milstab(&["matrix", "--report", p(&report_path), "--classifier", "boost", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = read_csv(&out);
    let labs = labelings(&report, "boost");
    let r = labs.len();
    assert_eq!(rows.len(), 2 * r);
    for (block, measure) in [(0, Measure::Agreement), (1, Measure::PositiveAgreement)] {
        let m = pairwise_matrix(&labs, measure).unwrap();
        for i in 0..r {
            let row = &rows[block * r + i];
            assert_eq!(row[0], if block == 0 { "S" } else { "S+" });
            assert_eq!(row[1], i.to_string());
            let values: Vec<f64> = row[2..].iter().map(|v| v.parse().unwrap()).collect();
            assert_eq!(values, m.values[i]);
        }
    }
}

#[test]
fn unknown_classifier_lists_available_names() {
    let (dir, report_path, _) = run_small();
    let out = dir.path().join("m.csv");
    let o = milstab(&["matrix", "--report", p(&report_path), "--classifier", "nope", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for name in ["mi_svm", "simple_nm", "boost"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn histogram_csv_matches_library() {
    let (dir, report_path, report) = run_small();
    let out = dir.path().join("h.csv");
    let o = milstab(&["histogram", "--report", p(&report_path), "--classifier", "mi_svm", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = read_csv(&out);
    let pos = positiveness_histogram(&labelings(&report, "mi_svm")).unwrap();

    let inst: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "instance").collect();
    let bins: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "bin").collect();
    assert_eq!(inst.len(), report.test_instance_count());
    assert_eq!(bins.len(), report.repetitions + 1);
    for (row, &c) in inst.iter().zip(&pos.counts) {
        assert_eq!(row[3].parse::<usize>().unwrap(), c);
    }
    for (k, (row, &n)) in bins.iter().zip(&pos.histogram).enumerate() {
        assert_eq!(row[1], k.to_string());
        assert_eq!(row[3].parse::<usize>().unwrap(), n);
    }
    assert_eq!(report.classifier("mi_svm").unwrap().positiveness.as_ref().unwrap(), &pos);
}

#[test]
fn histogram_for_one_bag() {
    let (dir, report_path, report) = run_small();
    let (bag, range) = report.bag_offsets()[1].clone();
    let out = dir.path().join("h.csv");
    let o = milstab(&[
        "histogram", "--report", p(&report_path), "--classifier", "simple_nm", "--out", p(&out), "--bag", &bag,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = read_csv(&out);
    let inst: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "instance").collect();
    assert_eq!(inst.len(), range.len());
    assert!(inst.iter().all(|r| r[2] == bag));
    let total: usize = rows.iter().filter(|r| r[0] == "bin").map(|r| r[3].parse::<usize>().unwrap()).sum();
    assert_eq!(total, range.len());

    let o = milstab(&[
        "histogram", "--report", p(&report_path), "--classifier", "simple_nm", "--out", p(&out), "--bag", "nope",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn synth_writes_the_generated_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("synth.json");
    fs::write(&cfg_path, synth_json().to_string()).unwrap();
    let data = dir.path().join("d.csv");
    let labels = dir.path().join("l.csv");
    let o = milstab(&["synth", "--config", p(&cfg_path), "--out", p(&data), "--labels-out", p(&labels)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let cfg: SynthConfig = serde_json::from_value(synth_json()).unwrap();
    let expected = generate_synthetic(&cfg).unwrap();
    let loaded = load_dataset(&data).unwrap();
    assert_eq!(loaded.bags, expected.dataset.bags);
    let rows = read_csv(&labels);
    let flat: Vec<bool> = expected.instance_labels.iter().flatten().copied().collect();
    assert_eq!(rows.len(), flat.len());
    for (row, &z) in rows.iter().zip(&flat) {
        assert_eq!(row[2] == "1", z);
    }
}

#[test]
fn inspect_summarizes_musk1() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/musk1.csv");
    let o = milstab(&["inspect", "--data", p(&path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let line = stdout.lines().nth(1).unwrap();
    assert_eq!(line, "musk1\t47+, 45-\t476\t2 to 40\t166");
}

#[test]
fn inspect_missing_file_is_an_input_error() {
    let o = milstab(&["inspect", "--data", "/nonexistent/data.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_paths_resolve_relative_to_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg: SynthConfig = serde_json::from_value(synth_json()).unwrap();
    let sub = dir.path().join("data");
    fs::create_dir(&sub).unwrap();
    let mut f = fs::File::create(sub.join("toy.csv")).unwrap();
    milstab_core::mildata::write_dataset(&generate_synthetic(&cfg).unwrap().dataset, &mut f).unwrap();
    let config = serde_json::json!({
        "data": {"csv": "data/toy.csv"},
        "split": {"random": {"seed": 1}},
        "classifiers": [{"kind": "simple_nm"}],
        "repetitions": 2,
        "seed": 1
    });
    let cfg_path = dir.path().join("c.json");
    fs::write(&cfg_path, config.to_string()).unwrap();
    let out = dir.path().join("r.json");
    let o = milstab(&["run", "--config", p(&cfg_path), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = StabilityReport::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.dataset, "toy");
}
