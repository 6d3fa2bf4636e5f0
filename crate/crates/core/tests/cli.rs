use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use seqsem::cli::format_sig;
use seqsem::{partition_function, sample_ensemble, EnergyParams, SecondaryStructure};

fn seqsem(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_seqsem"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.unwrap_or("").as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn partition_prints_one_line_matching_the_library() {
    let o = seqsem(&["partition"], Some("((....))\n"));
    assert!(o.status.success(), "{}", stderr(&o));
    let p = EnergyParams::default_set();
    let s = seqsem::parse_dot_bracket("((....))").unwrap();
    assert_eq!(
        stdout(&o),
        format!("{}\n", format_sig(partition_function(&p, &s).log_q().ln()))
    );
}

#[test]
fn sample_is_deterministic_and_thread_independent() {
    let args = ["sample", "--seed", "7", "-n", "50"];
    let a = seqsem(&args, Some("((((....))))..((...))\n"));
    let b = seqsem(&args, Some("((((....))))..((...))\n"));
    let c = seqsem(
        &["--threads", "1", "sample", "--seed", "7", "-n", "50"],
        Some("((((....))))..((...))\n"),
    );
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let p = EnergyParams::default_set();
    let s = seqsem::parse_dot_bracket("((((....))))..((...))").unwrap();
    let want = sample_ensemble(&p, &s, 50, 7);
    let lines: Vec<String> = stdout(&a).lines().map(String::from).collect();
    assert_eq!(lines.len(), 100);
    for (k, d) in want.iter().enumerate() {
        assert_eq!(
            lines[2 * k],
            format!(
                ">sample_{} energy={} log_prob={}",
                k + 1,
                d.energy,
                format_sig(d.log_prob)
            )
        );
        assert_eq!(lines[2 * k + 1], d.sequence.to_string());
    }
}

#[test]
fn jsonl_samples_carry_the_schema() {
    let o = seqsem(
        &["sample", "--seed", "1", "-n", "3", "--format", "jsonl"],
        Some("(((...)))"),
    );
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["schema"], "seqsem/1");
    assert_eq!(lines[0]["rng"], "chacha8-stream-per-draw");
    assert_eq!(
        lines[0]["params_sha256"],
        EnergyParams::default_set().checksum()
    );
    assert_eq!(lines[1]["sequence"].as_str().unwrap().len(), 9);
    let sum: f64 = lines[1]["stepwise_logs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .sum();
    assert!((sum - lines[1]["log_prob"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_2() {
    // Sampling without a seed is a usage error, never a silent default.
    assert_eq!(
        seqsem(&["sample", "-n", "3"], Some("(...)")).status.code(),
        Some(2)
    );
    assert_eq!(
        seqsem(&["heatmap", "-n", "3"], Some("(...)")).status.code(),
        Some(2)
    );
    assert_eq!(
        seqsem(&["signature", "-n", "3"], Some("(...)"))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(seqsem(&["bogus"], None).status.code(), Some(2));
    assert_eq!(
        seqsem(&["--temperature", "-300", "partition"], Some("(...)"))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(seqsem(&["--help"], None).status.code(), Some(0));
}

#[test]
fn input_errors_exit_1_with_position() {
    let o = seqsem(&["partition"], Some("((..x.))\n"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("column 5"), "{}", stderr(&o));

    let o = seqsem(&["fold"], Some(">a\nACGU\n>b\nACGZ\n"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.db", "((....))\n");
    let o = seqsem(&["eval", &s], Some(">short\nGGAAC\n"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("length"));

    let o = seqsem(&["partition", "/nonexistent/structure.db"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exact_heatmap_of_open_chain_is_zero() {
    let o = seqsem(&["heatmap", "--exact", "--window", "2"], Some("......\n"));
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    for (i, line) in text.lines().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 6);
        for (j, cell) in cells.iter().enumerate() {
            if j == i || j == i + 1 {
                assert_eq!(*cell, "0");
            } else {
                assert_eq!(*cell, "");
            }
        }
    }
}

#[test]
fn heatmap_files_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.db", "((((....))))\n");
    let csv = dir.path().join("h.csv");
    let pgm = dir.path().join("h.pgm");
    let o = seqsem(
        &[
            "heatmap",
            &s,
            "-n",
            "2000",
            "--seed",
            "3",
            "--window",
            "3",
            "--out",
            csv.to_str().unwrap(),
            "--pgm",
            pgm.to_str().unwrap(),
            "--threshold",
            "0.0",
        ],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("widest\t"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 12);
    assert!(std::fs::read_to_string(&pgm)
        .unwrap()
        .starts_with("P2\n12 12\n255\n"));
}

#[test]
fn json_documents_are_attributable() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.toml", EnergyParams::default_source());
    for args in [
        vec!["--json", "partition"],
        vec![
            "--json",
            "--params",
            &params,
            "pattern",
            "--interval",
            "3",
            "6",
            "--pattern",
            "GAAA",
        ],
        vec![
            "--json",
            "random-structures",
            "--length",
            "12",
            "-n",
            "3",
            "--seed",
            "5",
        ],
    ] {
        let o = seqsem(&args, Some("((....))"));
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(doc["schema"], "seqsem/1");
        assert_eq!(doc["params_sha256"], EnergyParams::default_set().checksum());
    }
}

#[test]
fn pattern_matches_the_library() {
    let o = seqsem(
        &[
            "pattern",
            "--interval",
            "3",
            "6",
            "--pattern",
            "GAAA",
            "--samples",
            "500",
            "--seed",
            "2",
            "--top",
            "3",
        ],
        Some("((....))"),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let p = EnergyParams::default_set();
    let s = seqsem::parse_dot_bracket("((....))").unwrap();
    let c = seqsem::PatternConstraint::interval(
        8,
        3,
        6,
        &"GAAA".parse::<seqsem::Sequence>().unwrap().bases().to_vec(),
    )
    .unwrap();
    let prob = seqsem::pattern_probability(&p, &s, &c).unwrap();
    let text = stdout(&o);
    assert!(text.contains(&format!("probability\t{}", format_sig(prob))));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn fold_seqpf_eval_and_mi() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = write(dir.path(), "seqs.fa", ">x\nGGGGAAACCCC\n>y\nAAAAAAAAAAA\n");
    let o = seqsem(&["fold", &fasta], None);
    assert!(o.status.success());
    let p = EnergyParams::default_set();
    let x: seqsem::Sequence = "GGGGAAACCCC".parse().unwrap();
    let f = seqsem::mfe_fold(&p, &x);
    assert!(stdout(&o).starts_with(&format!(
        ">x\nGGGGAAACCCC\n{} ({})\n",
        f.structure, f.energy
    )));
    assert!(stdout(&o).ends_with(">y\nAAAAAAAAAAA\n........... (0.00)\n"));

    let o = seqsem(&["seqpf", &fasta], None);
    let want = seqsem::mccaskill_partition(&p, &x).log_q.ln();
    assert!(stdout(&o).starts_with(&format!("x\t{}\n", format_sig(want))));
    assert!(stdout(&o).ends_with("y\t0\n"));

    let s = write(dir.path(), "s.db", "((((...))))\n");
    let o = seqsem(&["eval", &s, &fasta], None);
    assert!(o.status.success());
    assert!(
        stdout(&o).ends_with("y\tAAAAAAAAAAA\tinf\n"),
        "{}",
        stdout(&o)
    );

    let o = seqsem(&["mi", &s, &fasta, "--find-triple", "0.05"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("y\t0\t"));
    assert!(text.ends_with("triple\tnone\n"));
}

#[test]
fn signature_report() {
    let o = seqsem(
        &[
            "--json",
            "signature",
            "-n",
            "200",
            "--seed",
            "4",
            "--baselines",
            "2",
        ],
        Some("..((((((....))))))..\n"),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["baselines"].as_array().unwrap().len(), 2);
    let ifr = doc["target"]["ifr"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&ifr));
    assert_eq!(doc["target"]["delta_eta"].as_array().unwrap().len(), 200);
    let spectrum_total: u64 = doc["target"]["spectrum"]["all"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(spectrum_total, 200);
    let again = seqsem(
        &[
            "--json",
            "signature",
            "-n",
            "200",
            "--seed",
            "4",
            "--baselines",
            "2",
        ],
        Some("..((((((....))))))..\n"),
    );
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn random_structures_are_reproducible_and_valid() {
    let a = seqsem(
        &[
            "random-structures",
            "--length",
            "30",
            "-n",
            "20",
            "--seed",
            "9",
        ],
        None,
    );
    let b = seqsem(
        &[
            "random-structures",
            "--length",
            "30",
            "-n",
            "20",
            "--seed",
            "9",
        ],
        None,
    );
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines() {
        assert_eq!(seqsem::parse_dot_bracket(line).unwrap().len(), 30);
    }
    let o = seqsem(
        &[
            "random-structures",
            "--length",
            "8",
            "--seed",
            "1",
            "--format",
            "pair-list",
        ],
        None,
    );
    let s: SecondaryStructure = seqsem::structure::parse_pair_list(&stdout(&o)).unwrap();
    assert_eq!(s.len(), 8);
}

#[test]
fn temperature_changes_results() {
    let base = seqsem(&["partition"], Some("((((....))))"));
    let hot = seqsem(&["--temperature", "60", "partition"], Some("((((....))))"));
    assert!(hot.status.success());
    assert_ne!(base.stdout, hot.stdout);
}
