use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bmie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmie")).args(args).env("BMIE_THREADS", "2").output().expect("spawn bmie")
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    p.to_string_lossy().into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let args = ["simulate", "--M", "40", "--nrep", "6", "--families", "g0,g1,g3,g4", "--seed", "11", "--out"];
    for dir in [&a, &b] {
        let mut full = args.to_vec();
        full.push(dir.to_str().unwrap());
        let out = bmie(&full);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["simulate_cells.csv", "simulate_table.csv", "simulate.json"] {
        assert_eq!(read(&a, name), read(&b, name), "{name} differs");
    }

    let c = tmp.path().join("c");
    let out = bmie(&["rerun", a.join("manifest.json").to_str().unwrap(), "--out", c.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(&a, "simulate_cells.csv"), read(&c, "simulate_cells.csv"));
}

#[test]
fn different_seeds_differ() {
    let tmp = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for seed in ["1", "2"] {
        let dir = tmp.path().join(seed);
        let out = bmie(&[
            "simulate",
            "--M",
            "30",
            "--nrep",
            "4",
            "--families",
            "g3",
            "--seed",
            seed,
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        tables.push(read(&dir, "simulate_cells.csv"));
    }
    assert_ne!(tables[0], tables[1]);
}

#[test]
fn curves_limits() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bmie(&["curves", "--M", "50", "--tau", "2", "--C-grid", "0,inf", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = rows(&read(tmp.path(), "curves.csv"));
    assert_eq!(r.len(), 2);
    let f = |row: &Vec<String>, i: usize| row[i].parse::<f64>().unwrap();
    // C = 0: half length, full threshold ratio
    assert!((f(&r[0], 2) - 0.5).abs() < 1e-12);
    assert!((f(&r[0], 4) - 1.0).abs() < 1e-12);
    // C = inf: classical Sidak family
    assert!((f(&r[1], 2) - 1.0).abs() < 1e-12);
    assert!((f(&r[1], 3) - 0.9).abs() < 1e-9);
    assert_eq!(f(&r[1], 4), 0.0);
}

#[test]
fn tsv_format_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bmie(&["curves", "--M", "5", "--C-grid", "1", "--format", "tsv", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = read(tmp.path(), "curves.tsv");
    assert!(text.starts_with("tau\tc\tbrel\tbfwcr\tbtr\n"));
    let manifest: serde_json::Value = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["subcommand"], "curves");
    assert_eq!(manifest["format"], "tsv");
    assert_eq!(manifest["config"]["m"], 5);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"m": 7, "tau": "1", "c_grid": "2"}"#).unwrap();
    let out_dir = tmp.path().join("o");
    let out = bmie(&["curves", "--config", cfg.to_str().unwrap(), "--tau", "3", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: serde_json::Value = serde_json::from_str(&read(&out_dir, "manifest.json")).unwrap();
    assert_eq!(manifest["config"]["m"], 7);
    assert_eq!(manifest["config"]["tau"], "3");
    assert_eq!(manifest["config"]["c_grid"], "2");
}

#[test]
fn optimize_single_unit() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bmie(&[
        "optimize",
        "--M",
        "1",
        "--sigma-spec",
        "1.5",
        "--tau",
        "2",
        "--C-grid",
        "inf",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let alloc = rows(&read(tmp.path(), "allocation.csv"));
    assert_eq!(alloc.len(), 1);
    let alpha: f64 = alloc[0][5].parse().unwrap();
    assert!((alpha - 0.1).abs() < 1e-8, "alpha {alpha}");
}

#[test]
fn batting_and_genes_fixtures() {
    let tmp = tempfile::tempdir().unwrap();
    let b = tmp.path().join("b");
    let out =
        bmie(&["batting", "--input", &fixture("batting_synthetic.csv"), "--period", "2", "--out", b.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = rows(&read(&b, "batting_summary.csv"));
    assert_eq!(s.len(), 1);
    let bfwcr: f64 = s[0][5].parse().unwrap();
    assert!((bfwcr - 0.9).abs() < 1e-6);

    let g = tmp.path().join("g");
    let out =
        bmie(&["genes", "--input", &fixture("expression_4genes.csv"), "--group1", "3", "--out", g.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(rows(&read(&g, "genes_intervals.csv")).len(), 4);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().to_str().unwrap();
    let code = |args: &[&str]| bmie(args).status.code().unwrap();
    assert_eq!(code(&["curves", "--bogus"]), 2);
    assert_eq!(code(&["curves", "--q", "1.5", "--out", o]), 2);
    assert_eq!(code(&["curves", "--C-grid", "x", "--out", o]), 2);
    assert_eq!(code(&["genes", "--input", &fixture("expression_4genes.csv"), "--out", o]), 2);
    assert_eq!(code(&["batting", "--input", "/definitely/not/here.csv", "--out", o]), 3);

    let ragged = tmp.path().join("ragged.csv");
    std::fs::write(&ragged, "gene,a,b,c,d\ng1,1,2,3,4\ng2,1,2\n").unwrap();
    assert_eq!(code(&["genes", "--input", ragged.to_str().unwrap(), "--group1", "2", "--out", o]), 3);

    assert_eq!(code(&["optimize", "--M", "10", "--C-grid", "0", "--out", o]), 4);
}
