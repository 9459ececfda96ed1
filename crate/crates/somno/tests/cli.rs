use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use somno::checkpoint::encode_checkpoint;
use somno_core::model::{init_model, ModelConfig};
use somno_core::rng::derive_seed;

fn somno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_somno"))
        .args(args)
        .env_remove("SOMNO_SEED")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) {
    let out = somno(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: PathBuf) -> Vec<u8> {
    std::fs::read(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn synth(dir: &Path, name: &str, seed: &str) -> PathBuf {
    let out = dir.join(name);
    ok(&[
        "synth",
        "--out",
        s(&out),
        "--subjects",
        "3",
        "--per-class",
        "8",
        "--seed",
        seed,
    ]);
    out.join("synth.edd")
}

#[test]
fn synth_and_train_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = synth(dir.path(), "a", "5");
    let b = synth(dir.path(), "b", "5");
    assert_eq!(read(a.clone()), read(b));
    assert_eq!(
        read(dir.path().join("a/synth_events.csv")),
        read(dir.path().join("b/synth_events.csv"))
    );
    assert_ne!(read(a.clone()), read(synth(dir.path(), "c", "6")));
    for name in ["m1.ckpt", "m2.ckpt"] {
        let ckpt = dir.path().join(name);
        ok(&[
            "train",
            "--data",
            s(&a),
            "--out",
            s(&ckpt),
            "--epochs",
            "2",
            "--batch",
            "16",
            "--seed",
            "3",
        ]);
    }
    assert_eq!(read(dir.path().join("m1.ckpt")), read(dir.path().join("m2.ckpt")));
    let loss = String::from_utf8(read(dir.path().join("m1_loss.csv"))).unwrap();
    assert_eq!(loss.lines().count(), 3);
}

#[test]
fn zero_epochs_saves_the_initialization() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path(), "d", "1");
    let ckpt = dir.path().join("init.ckpt");
    ok(&[
        "train",
        "--data",
        s(&data),
        "--out",
        s(&ckpt),
        "--epochs",
        "0",
        "--seed",
        "9",
    ]);
    let config = ModelConfig::default().with_seed(derive_seed(9, &[1]));
    let want = encode_checkpoint(&config, &init_model(&config).unwrap());
    assert_eq!(read(ckpt), want);
}

#[test]
fn eval_outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path(), "d", "2");
    for (name, jobs) in [("j1", "1"), ("j3", "3")] {
        let out = dir.path().join(name);
        ok(&[
            "eval",
            "--data",
            s(&data),
            "--out",
            s(&out),
            "--repeats",
            "1",
            "--epochs",
            "2",
            "--batch",
            "16",
            "--jobs",
            jobs,
        ]);
    }
    for file in [
        "accuracy.csv",
        "summary.json",
        "accuracy_curve.csv",
        "accuracy.svg",
    ] {
        assert_eq!(
            read(dir.path().join("j1").join(file)),
            read(dir.path().join("j3").join(file)),
            "{file}"
        );
    }
    let csv = String::from_utf8(read(dir.path().join("j1/accuracy.csv"))).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
}

#[test]
fn baselines_and_ablation_run() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path(), "d", "3");
    let out = dir.path().join("base");
    ok(&["baseline", "--data", s(&data), "--out", s(&out)]);
    let csv = String::from_utf8(read(out.join("baselines.csv"))).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4 * 3);
    let summary: serde_json::Value = serde_json::from_slice(&read(out.join("summary.json"))).unwrap();
    assert_eq!(summary["ttests"].as_array().unwrap().len(), 6);
    let out = dir.path().join("lda");
    ok(&["eval", "--data", s(&data), "--out", s(&out), "--method", "lda"]);
    let out = dir.path().join("abl");
    ok(&[
        "ablate",
        "--data",
        s(&data),
        "--out",
        s(&out),
        "--variants",
        "full,no-batchnorm",
        "--repeats",
        "1",
        "--epochs",
        "1",
        "--batch",
        "16",
    ]);
    let curves = String::from_utf8(read(out.join("ablation_curves.csv"))).unwrap();
    assert_eq!(curves.lines().count(), 1 + 2);
    assert!(out.join("ablation.svg").exists());
}

#[test]
fn explain_writes_one_row_per_position() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path(), "d", "4");
    let ckpt = dir.path().join("m.ckpt");
    ok(&[
        "train",
        "--data",
        s(&data),
        "--out",
        s(&ckpt),
        "--epochs",
        "1",
        "--batch",
        "16",
    ]);
    let out = dir.path().join("ex");
    ok(&[
        "explain",
        "--data",
        s(&data),
        "--ckpt",
        s(&ckpt),
        "--subject",
        "2",
        "--sample",
        "5",
        "--out",
        s(&out),
    ]);
    let text = String::from_utf8(read(out.join("explanation.csv"))).unwrap();
    let head = text.lines().next().unwrap();
    let prob = |key: &str| -> f64 {
        let field = head.split(',').find_map(|f| f.strip_prefix(key)).unwrap();
        field.parse().unwrap()
    };
    assert!((prob("p_alert=") + prob("p_drowsy=") - 1.0).abs() < 1e-12);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 384);
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert!((0.0..=1.0).contains(&v[2]) && (0.0..=1.0).contains(&v[3]));
    }
    assert!(out.join("explanation.svg").exists());
    let bad = somno(&[
        "explain",
        "--data",
        s(&data),
        "--ckpt",
        s(&ckpt),
        "--subject",
        "2",
        "--sample",
        "99",
        "--out",
        s(&out),
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn bands_sees_a_pure_alpha_tone() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tone.csv");
    let mut row = String::from("subject_id,label\n1,alert");
    for t in 0..384 {
        let v = 20.0 * (std::f64::consts::TAU * 10.0 * t as f64 / 128.0).sin();
        row.push_str(&format!(",{v}"));
    }
    std::fs::write(&csv, row + "\n").unwrap();
    let out = dir.path().join("bands.csv");
    ok(&["bands", "--data", s(&csv), "--out", s(&out)]);
    let text = String::from_utf8(read(out)).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let values: Vec<&str> = lines.next().unwrap().split(',').collect();
    let alpha = header.iter().position(|h| *h == "alpha").unwrap();
    assert!(values[alpha].parse::<f64>().unwrap() > 0.9);
}

#[test]
fn convert_round_trips_through_edd() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path(), "d", "8");
    let csv = dir.path().join("d.csv");
    let edd = dir.path().join("back.edd");
    ok(&["convert", "--input", s(&data), "--output", s(&csv)]);
    ok(&["convert", "--input", s(&csv), "--output", s(&edd)]);
    assert_eq!(read(data), read(edd));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path(), "d", "1");
    let out = dir.path().join("o");
    assert_eq!(
        somno(&["eval", "--data", s(&data), "--out", s(&out), "--method", "svm"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(somno(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(somno(&["--help"]).status.code(), Some(0));
    let missing = dir.path().join("missing.edd");
    let r = somno(&["bands", "--data", s(&missing), "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).starts_with("error:"));
    let garbage = dir.path().join("garbage.edd");
    std::fs::write(&garbage, b"nonsense").unwrap();
    assert_eq!(
        somno(&["bands", "--data", s(&garbage), "--out", s(&out)])
            .status
            .code(),
        Some(2)
    );
    let odd = dir.path().join("data.txt");
    assert_eq!(
        somno(&["convert", "--input", s(&data), "--output", s(&odd)])
            .status
            .code(),
        Some(1)
    );
}
