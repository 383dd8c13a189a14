use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ccm_causal::formats::{write_fasta, FastaRecord};
use ccm_causal::pipeline::{random_nucleotides, synthetic_cohort};
use ccm_causal_core::rng::seeded;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ccm-causal"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn infer_single_model() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pair.txt", "0 1 1 0 1 0 0 0 1 1 1 0\n1,1,0,1,0,0,1,0,1,1,0,0\n");
    let o = run(dir.path(), &["infer", "pair.txt", "--model", "lz-p"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<_> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1);
    let v: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(v["model"], "LZ-P");
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["model", "direction", "score_xy", "score_yx", "strength"]);
    assert!(["x->y", "y->x", "undecided"].contains(&v["direction"].as_str().unwrap()));
}

#[test]
fn infer_all_models_by_default() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pair.txt", "0 1 1 0 1 0 0 0 1 1 1 0\n1 1 0 1 0 0 1 0 1 1 0 0\n");
    let o = run(dir.path(), &["infer", "pair.txt"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn infer_discretizes_real_lines() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "real.txt", "0.1 0.8 0.9 0.2 0.3 0.7\n-5 4 3 -2 -1 2.5\n");
    write(dir.path(), "ok.txt", "0.1 0.8 0.9 0.2 0.3 0.7\n-5 4 -3 -2 1 2.5\n");
    let o = run(dir.path(), &["infer", "ok.txt", "--discretize", "2", "--model", "lz-p"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1);
    // the real lines bin to identical sequences, which the models refuse
    let o = run(dir.path(), &["infer", "real.txt", "--discretize", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("identical sequences"));
    // without binning the values are not integers
    let o = run(dir.path(), &["infer", "real.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_lines_fail_with_message() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "same.txt", "0 1 1 2\n0 1 1 2\n");
    let o = run(dir.path(), &["infer", "same.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("identical sequences"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["--version"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &[]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["infer", "p.txt", "--models", "gzip"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["simulate", "--out", "b.csv", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["simulate", "--out", "b.csv", "--noise", "0"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["infer", "missing.txt"]).status.code(), Some(2));
}

#[test]
fn simulate_is_byte_identical_across_runs_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["simulate", "--phis", "0.8", "--trials", "5", "--seed", "7"];
    let mut outputs = Vec::new();
    for (i, jobs) in ["1", "1", "4"].iter().enumerate() {
        let (b, e) = (format!("b{i}.csv"), format!("e{i}.json"));
        let mut args = base.to_vec();
        args.extend(["--out", &b, "--eval-out", &e, "--jobs", jobs]);
        let o = run(dir.path(), &args);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push((fs::read(dir.path().join(&b)).unwrap(), fs::read(dir.path().join(&e)).unwrap()));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));

    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# ccm-causal ") && header.contains("config=") && header.contains("seed=7"));
    assert!(!header.contains("jobs"));
    assert_eq!(lines.next().unwrap(), "phi,trial,truth,model,direction,score_xy,score_yx,strength");
    assert_eq!(lines.count(), 5 * 3);
}

#[test]
fn simulate_then_eval_report_agree() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "simulate",
            "--phis",
            "0.3,0.6",
            "--trials",
            "6",
            "--seed",
            "3",
            "--models",
            "lz-p",
            "--out",
            "b.csv",
            "--eval-out",
            "e.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(dir.path(), &["eval-report", "b.csv", "--coin-seed", "3", "--csv-out", "curve.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let from_report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let from_sim: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("e.json")).unwrap()).unwrap();
    assert_eq!(from_report["results"], from_sim["results"]);
    assert_eq!(from_report["results"].as_array().unwrap().len(), 2);
    let curve = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert_eq!(data_lines(&curve)[0], "model,phi,n,rate,accuracy");
    assert_eq!(data_lines(&curve).len(), 1 + 2 * 20);
}

#[test]
fn simulate_default_grid_has_twenty_phis() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["simulate", "--trials", "1", "--n", "60", "--models", "lz-p", "--out", "b.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(data_lines(&csv).len(), 1 + 20);
}

fn genome_fixture(dir: &Path, members: u32) -> String {
    let reference = random_nucleotides(400, &mut seeded(5));
    let cohort = synthetic_cohort(&reference, members, 6, 8).unwrap();
    write(dir, "ref.fa", &write_fasta(&[FastaRecord { id: "ref".into(), sequence: reference.clone() }], 60));
    write(dir, "cohort.fa", &write_fasta(&cohort, 60));
    let manifest: String = std::iter::once("sequence_id,group\n".to_owned())
        .chain(
            cohort
                .iter()
                .enumerate()
                .map(|(i, r)| format!("{},{}\n", r.id, if i % 2 == 0 { "north" } else { "south" })),
        )
        .collect();
    write(dir, "groups.csv", &manifest);
    reference
}

#[test]
fn genome_one_record_cohort() {
    let dir = tempfile::tempdir().unwrap();
    genome_fixture(dir.path(), 1);
    let o = run(
        dir.path(),
        &[
            "genome",
            "--reference",
            "ref.fa",
            "--cohort",
            "cohort.fa",
            "--model",
            "lz-p",
            "--records-out",
            "rec.csv",
            "--proportions-out",
            "prop.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rec = fs::read_to_string(dir.path().join("rec.csv")).unwrap();
    let rows = data_lines(&rec);
    assert_eq!(rows[0], "reference_id,sequence_id,group,model,direction,score_xy,score_yx,strength");
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("ref,mut0000,all,LZ-P,"));
}

#[test]
fn genome_rejects_ambiguous_member_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let reference = genome_fixture(dir.path(), 4);
    let mut cohort = fs::read_to_string(dir.path().join("cohort.fa")).unwrap();
    cohort.push_str(">bad\nACGTNACGT\n");
    cohort.push_str(&format!(">copy\n{reference}\n"));
    write(dir.path(), "cohort.fa", &cohort);
    let mut manifest = fs::read_to_string(dir.path().join("groups.csv")).unwrap();
    manifest.push_str("bad,north\ncopy,south\n");
    write(dir.path(), "groups.csv", &manifest);
    let o = run(
        dir.path(),
        &[
            "genome",
            "--reference",
            "ref.fa",
            "--cohort",
            "cohort.fa",
            "--manifest",
            "groups.csv",
            "--records-out",
            "rec.csv",
            "--proportions-out",
            "prop.csv",
            "--rejects-out",
            "rej.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rej = fs::read_to_string(dir.path().join("rej.csv")).unwrap();
    let rows = data_lines(&rej);
    assert_eq!(rows[0], "sequence_id,reason");
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("bad,") && rows[1].contains("ambiguous"));
    assert!(rows[2].starts_with("copy,"));
    let rec = fs::read_to_string(dir.path().join("rec.csv")).unwrap();
    assert_eq!(data_lines(&rec).len(), 1 + 4 * 3);
    let prop = fs::read_to_string(dir.path().join("prop.csv")).unwrap();
    let rows = data_lines(&prop);
    assert_eq!(rows[0], "group,model,n,expected,proportion");
    assert_eq!(rows.len(), 1 + 2 * 3);
    assert!(rows[1].starts_with("north,ETC-P,2,"));
}

#[test]
fn genome_ambiguous_reference_fails() {
    let dir = tempfile::tempdir().unwrap();
    genome_fixture(dir.path(), 2);
    write(dir.path(), "ref.fa", ">ref\nACGTRACGT\n");
    let o = run(
        dir.path(),
        &[
            "genome",
            "--reference",
            "ref.fa",
            "--cohort",
            "cohort.fa",
            "--records-out",
            "rec.csv",
            "--proportions-out",
            "prop.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ambiguous"));
    write(dir.path(), "ref.fa", ">r1\nACGT\n>r2\nACGA\n");
    let o = run(
        dir.path(),
        &[
            "genome",
            "--reference",
            "ref.fa",
            "--cohort",
            "cohort.fa",
            "--records-out",
            "rec.csv",
            "--proportions-out",
            "prop.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn candidates_outputs_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    genome_fixture(dir.path(), 12);
    fs::rename(dir.path().join("ref.fa"), dir.path().join("b.fa")).unwrap();
    let other = random_nucleotides(400, &mut seeded(6));
    write(dir.path(), "a.fa", &format!(">other\n{other}\n"));
    let mut outputs = Vec::new();
    for jobs in ["1", "3"] {
        let o = run(
            dir.path(),
            &[
                "candidates",
                "--candidate-a",
                "a.fa",
                "--candidate-b",
                "b.fa",
                "--cohort",
                "cohort.fa",
                "--strengths-out",
                "s.csv",
                "--stats-out",
                "t.json",
                "--iterations",
                "300",
                "--seed",
                "4",
                "--jobs",
                jobs,
            ],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push((fs::read(dir.path().join("s.csv")).unwrap(), fs::read(dir.path().join("t.json")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let s = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(data_lines(&s)[0], "sequence_id,group,model,strength_a,strength_b");
    assert_eq!(data_lines(&s).len(), 1 + 12 * 3);
    let t: serde_json::Value = serde_json::from_slice(&outputs[0].1).unwrap();
    let stats = t["results"].as_array().unwrap();
    assert_eq!(stats.len(), 3);
    for key in ["model", "diff", "ci_low", "ci_high", "trim", "iterations", "confidence"] {
        assert!(stats[0].get(key).is_some(), "missing {key}");
    }

    let o = run(
        dir.path(),
        &[
            "candidates",
            "--candidate-a",
            "b.fa",
            "--candidate-b",
            "b.fa",
            "--cohort",
            "cohort.fa",
            "--strengths-out",
            "s.csv",
            "--stats-out",
            "t.json",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}
