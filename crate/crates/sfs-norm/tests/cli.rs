use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sfs_norm::{cmd_norm, CliConfig, OutputFormat};
use sfs_norm_core::search::{FamilyRow, NormReport};
use sfs_norm_core::seifert::Notation;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sfs-norm"));
    c.env_remove("SFS_NORM_MU_WINDOW");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn family(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("families").join(name)
}

#[test]
fn n_genus_values() {
    let o = run(&["n-genus", "46", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "5\n");
    assert_eq!(stdout(&run(&["n-genus", "8", "1"])), "4\n");
    assert_eq!(stdout(&run(&["n-genus", "-46", "-7"])), "5\n");
}

#[test]
fn n_genus_explain_lists_digits() {
    let out = stdout(&run(&["n-genus", "46", "39", "--explain"]));
    assert!(out.contains("digits      [6, 1, 1, 3]"), "{out}");
    assert!(out.contains("reflect"), "{out}");
    assert!(out.ends_with("N           5\n"), "{out}");
}

#[test]
fn n_genus_rejects_common_factors() {
    let o = run(&["n-genus", "6", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not coprime"));
    assert!(o.stdout.is_empty());
}

#[test]
fn norm_text_and_json_agree_with_the_library() {
    let p = "S2((2,-1),(3,1),(8,1))";
    let o = run(&["norm", p, "--format", "json"]);
    assert!(o.status.success());
    let report: NormReport = serde_json::from_slice(&o.stdout).unwrap();
    let config = CliConfig { output_format: OutputFormat::Json, ..CliConfig::default() };
    let direct = sfs_norm::norm_report(p, None, &config).unwrap();
    assert_eq!(report, direct);
    assert_eq!(stdout(&o), cmd_norm(p, None, &config).unwrap());
    assert_eq!(report.classes.len(), 1);
    assert_eq!((report.classes[0].min_genus, report.classes[0].norm), (3, 1));

    let text = stdout(&run(&["norm", p]));
    assert!(text.contains("V13"), "{text}");
    assert!(text.contains("horizontal ((2,-1),(3,1),(6,1))"), "{text}");
}

#[test]
fn json_round_trips_for_every_case() {
    for p in ["S2((2,-1),(2,1),(6,1))", "S2((3,2),(5,2),(7,4))", "S2((2,-1),(3,1),(4,1))", "S2((3,1),(5,1),(7,1))"] {
        let config = CliConfig::default();
        let report = sfs_norm::norm_report(p, None, &config).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: NormReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report, "{p}");
    }
}

#[test]
fn norm_prism_three_rows() {
    let o = run(&["norm", "S2((2,-1),(2,1),(6,1))", "--format", "csv"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "canonical_form,class,e1,e2,e3,min_genus,norm,witness_kind,gap,exhaustive");
    assert_eq!(lines.len(), 4);
    let norms: Vec<&str> = lines[1..].iter().map(|l| l.rsplit(',').nth(3).unwrap()).collect();
    assert_eq!(norms, ["0", "2", "2"]);
}

#[test]
fn norm_errors_use_documented_exit_codes() {
    let o = run(&["norm", "S2((2,-1),(3,1),(-1,6))"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["norm", "S2((2,-1),(3,1)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 16"));
    let o = run(&["norm", "S2((2,1),(2,-1),(3,0))"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["norm", "S2((3,1),(3,1),(3,-2))"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("horizontal incompressible"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["norm"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn convert_between_notations() {
    let p = "S2((2,-1),(3,1),(8,1))";
    assert_eq!(stdout(&run(&["convert", p, "orlik"])), "[-1; (2,1),(3,1),(8,1)]\n");
    assert_eq!(stdout(&run(&["convert", p, "hatcher"])), "M(+0,0; -1/2, 1/3, 1/8)\n");
    assert_eq!(stdout(&run(&["convert", "[-1; (2,1),(3,1),(8,1)]", "martelli"])), "S2((2,-1),(3,1),(8,1))\n");
    assert_eq!(stdout(&run(&["convert", "M(+0,0; -1/2, 1/3, 1/8)", "martelli"])), "S2((2,-1),(3,1),(8,1))\n");
    let o = run(&["convert", p, "seifert"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn notation_flag_overrides_detection() {
    let o = run(&["--notation", "orlik", "convert", "S2((2,-1),(3,1),(8,1))", "martelli"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--notation", "hatcher", "convert", "M(+0,0; -1/2, 1/3, 1/8)", "orlik"]);
    assert_eq!(stdout(&o), "[-1; (2,1),(3,1),(8,1)]\n");
}

#[test]
fn mu_window_from_environment() {
    let p = "S2((2,-1),(2,1),(6,1))";
    let o = bin().args(["norm", p, "--format", "json"]).env("SFS_NORM_MU_WINDOW", "2").output().unwrap();
    let report: NormReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!report.exhaustive());
    let o = run(&["norm", p, "--format", "json", "--mu-window", "2"]);
    let flagged: NormReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(flagged, report);
    let o = run(&["norm", p, "--mu-window", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(["norm", p]).env("SFS_NORM_MU_WINDOW", "lots").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scan_family_two_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let o = run(&["scan", family("family_4_2.fam").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for (n, r) in (7..=12).zip(&rows) {
        assert_eq!(&r[1], "V23");
        assert_eq!(r[5].parse::<i64>().unwrap(), n);
        assert_eq!(&r[8], "2");
        assert_eq!(&r[9], "true");
    }
}

#[test]
fn scan_logs_constraint_violations() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("f.fam");
    std::fs::write(&spec, "S2((2,-1),(3,1),(2n,1)) | n=2..6 | n > 3\n").unwrap();
    let o = run(&["scan", spec.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows: Vec<FamilyRow> = serde_json::from_value(v["rows"].clone()).unwrap();
    assert_eq!(rows.iter().map(|r| r.instance.as_str()).collect::<Vec<_>>(), ["n=4", "n=5", "n=6"]);
    assert!(rows.iter().all(|r| r.gap == Some(2)));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("skipped n=2") && err.contains("skipped n=3"), "{err}");
}

#[test]
fn scan_empty_grid_prints_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("empty.fam");
    std::fs::write(&spec, "# nothing\nS2((2,-1),(3,1),(2n,1)) | n=5..4\n").unwrap();
    let o = run(&["scan", spec.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "canonical_form,class,e1,e2,e3,min_genus,norm,witness_kind,gap,exhaustive\n");
}

#[test]
fn scan_reports_spec_errors_by_line() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.fam");
    std::fs::write(&spec, "# ok\nS2((2,-1),(3,1),(2n,1)) | n=1..3\nS2((2,-1),(3,1),(2n,1) | n=1..3\n").unwrap();
    let o = run(&["scan", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = run(&["scan", dir.path().join("missing.fam").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn library_and_binary_agree_on_conversion() {
    let p = "M(+0,0; 3/4, -2/7, 1/3)";
    let direct = sfs_norm::cmd_convert(p, None, Notation::Orlik).unwrap();
    assert_eq!(stdout(&run(&["convert", p, "orlik"])), direct);
}
