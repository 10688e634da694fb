//! End-to-end runs of the `dqgan` binary, including the determinism gate:
//! identical seeds must yield byte-identical CSV artifacts in both modes.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

fn run_binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dqgan"))
        .args(args)
        .output()
        .expect("failed to launch dqgan binary")
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config");
    std::fs::write(&path, body).unwrap();
    path
}

fn read_artifacts(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name().to_string_lossy().to_string();
        if name.ends_with(".csv") || name == "config_resolved" {
            out.insert(name, std::fs::read(entry.path()).unwrap());
        }
    }
    out
}

fn exact_config(out_dir: &Path) -> String {
    format!(
        "mode=exact\narchitecture=1-1|1-1\ndataset=data_line\nn=20\ns=4\nv=5\n\
         r_t=6\nseed=11\nhistogram_epochs=3,6\nsample_count=20\nout_dir={}\n",
        out_dir.display()
    )
}

fn circuit_config(out_dir: &Path) -> String {
    format!(
        "mode=circuit\narchitecture=1-1+|1-1+\ndataset=data_line\nn=20\ns=4\nv=5\n\
         r_t=4\nr_d=2\nseed=11\nselection=equally_spaced\nhistogram_epochs=2\n\
         sample_count=20\nout_dir={}\n",
        out_dir.display()
    )
}

#[test]
fn criterion_9_byte_identical_reruns() {
    for (label, config_fn) in [
        ("exact", exact_config as fn(&Path) -> String),
        ("circuit", circuit_config as fn(&Path) -> String),
    ] {
        let mut artifact_sets = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let config = write_config(dir.path(), &config_fn(dir.path()));
            let output = run_binary(&["run", config.to_str().unwrap()]);
            assert!(
                output.status.success(),
                "{label} run failed: {}",
                String::from_utf8_lossy(&output.stderr)
            );
            let mut artifacts = read_artifacts(dir.path());
            // The output directory differs between the two runs; strip it
            // from the echo before comparing.
            artifacts.remove("config_resolved");
            artifact_sets.push(artifacts);
        }
        assert_eq!(
            artifact_sets[0].keys().collect::<Vec<_>>(),
            artifact_sets[1].keys().collect::<Vec<_>>(),
            "{label}: artifact sets differ"
        );
        for (name, bytes) in &artifact_sets[0] {
            assert_eq!(
                bytes, &artifact_sets[1][name],
                "{label}: {name} differs between identically seeded runs"
            );
        }
        assert!(artifact_sets[0].contains_key("training.csv"));
    }
    println!("criterion 9 (byte-identical CSVs for equal seeds, both modes): pass");
}

#[test]
fn training_csv_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &exact_config(dir.path()));
    let output = run_binary(&["run", config.to_str().unwrap()]);
    assert!(output.status.success());

    let text = std::fs::read_to_string(dir.path().join("training.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "step_times_epsilon,costFunctionDis,costFunctionGen,costFunctionTest"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        for f in fields {
            let value: f64 = f.parse().unwrap();
            assert!(value.is_finite());
        }
    }

    for name in [
        "statistics_epoch3_training.csv",
        "statistics_epoch3_validation.csv",
        "statistics_epoch6_training.csv",
        "statistics_epoch6_validation.csv",
    ] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "indexData,countOut");
        assert_eq!(lines.count(), 20, "{name}");
    }

    // The two partitions of one epoch's histogram sum to sample_count.
    let count_sum = |name: &str| -> usize {
        std::fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap())
            .sum()
    };
    assert_eq!(
        count_sum("statistics_epoch3_training.csv") + count_sum("statistics_epoch3_validation.csv"),
        20
    );
}

#[test]
fn zero_epoch_run_emits_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &exact_config(dir.path()));
    let output = run_binary(&["run", config.to_str().unwrap(), "--set", "r_t=0", "--set", "histogram_epochs="]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("training.csv")).unwrap();
    assert_eq!(
        text,
        "step_times_epsilon,costFunctionDis,costFunctionGen,costFunctionTest\n"
    );
}

#[test]
fn malformed_config_fails_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "seed=1\nbroken line\n");
    let output = run_binary(&["run", config.to_str().unwrap()]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn seam_mismatch_fails_naming_both_widths() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "architecture=1-2|1-1\n");
    let output = run_binary(&["run", config.to_str().unwrap()]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("output width 2") && stderr.contains("input width 1"),
        "stderr: {stderr}"
    );
}

#[test]
fn bloch_export_writes_ball_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &exact_config(dir.path()));
    let output = run_binary(&[
        "bloch",
        config.to_str().unwrap(),
        "--epoch",
        "2",
        "--set",
        "histogram_epochs=",
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("bloch_epoch2.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,y,z");
    let mut rows = 0;
    for line in lines {
        let coords: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(coords.len(), 3);
        let r2: f64 = coords.iter().map(|c| c * c).sum();
        assert!(r2 <= 1.0 + 1e-9, "outside Bloch ball: {line}");
        rows += 1;
    }
    assert_eq!(rows, 20);
}
