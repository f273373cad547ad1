use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn spingp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spingp")).args(args).output().expect("binary runs")
}

fn with_config(dir: &TempDir, name: &str, toml: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, toml).unwrap();
    path
}

fn run(sub: &str, config: Option<&Path>, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--out", out.to_str().unwrap()];
    if let Some(c) = config {
        args.extend(["--config", c.to_str().unwrap()]);
    }
    args.extend(extra);
    spingp(&args)
}

fn summary(out: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap()
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn default_derivation_passes_and_lists_hubbard_commutators() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = run("verify-derivation", None, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("commutators.txt")).unwrap();
    assert!(text.contains("{2*t} a(2,0) + {2*t} a(4,0)"), "{text}");
    assert!(text.contains("{-U[3]}"), "{text}");
    let s = summary(&out);
    assert_eq!(s["passed"], true);
    assert_eq!(s["statistics_linear_equal"], true);
    assert!(s["oracle_max_deviation"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn three_site_ring_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(&dir, "c.toml", "[derivation]\nsites = 3\n");
    assert_eq!(run("verify-derivation", Some(&cfg), &dir.path().join("o"), &[]).status.code(), Some(2));
}

#[test]
fn injected_fault_fails_with_term_level_diff() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(&dir, "c.toml", "[derivation]\nfault_injection_site = 2\n");
    let out = dir.path().join("o");
    let o = run("verify-derivation", Some(&cfg), &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("xxz_operator_eom at site 2") && err.contains("{-delta} a(2)"), "{err}");
    let csv = fs::read_to_string(out.join("derivation.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("xxz_operator_eom,2,false,")));
}

#[test]
fn unknown_keys_and_bad_usage_exit_two() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(&dir, "c.toml", "[simulation]\nfamly = \"gp\"\n");
    assert_eq!(run("simulate", Some(&cfg), &dir.path().join("o"), &[]).status.code(), Some(2));
    assert_eq!(spingp(&["simulate", "--bogus"]).status.code(), Some(2));
    let missing = dir.path().join("missing.toml");
    assert_eq!(run("study", Some(&missing), &dir.path().join("o"), &[]).status.code(), Some(2));
    assert_eq!(run("study", None, &dir.path().join("o"), &["--threads", "0"]).status.code(), Some(2));
}

#[test]
fn soliton_simulation_reports_small_profile_drift() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(&dir, "c.toml", "[simulation]\nfamily = \"gp\"\nreduced_gauge = true\n");
    let out = dir.path().join("o");
    assert_eq!(run("simulate", Some(&cfg), &out, &[]).status.code(), Some(0));
    assert!(summary(&out)["amplitude_profile_drift"].as_f64().unwrap() < 1e-6);
}

#[test]
fn zero_lattice_profile_stays_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(
        &dir,
        "c.toml",
        "[simulation]\nfamily = \"xxz-lattice\"\nsites = 16\nt_end = 0.5\nsnapshot_interval = 0.25\n\
         [simulation.initial]\nkind = \"zero\"\n",
    );
    let out = dir.path().join("o");
    assert_eq!(run("simulate", Some(&cfg), &out, &[]).status.code(), Some(0));
    let r = rows(&out.join("trajectory.csv"));
    assert_eq!(r.len(), 3 * 16);
    assert!(r.iter().all(|row| row[3] == 0.0 && row[4] == 0.0));
}

#[test]
fn coupled_run_with_empty_partner_is_linear() {
    let dir = TempDir::new().unwrap();
    // plane wave e^{ikξ} on a 2π ring: iħφ̇ = (−4t + 2tk²)φ
    let cfg = with_config(
        &dir,
        "c.toml",
        "[simulation]\nfamily = \"coupled-gp\"\npoints = 32\nlength = 6.283185307179586\nt_end = 0.5\ndt = 0.01\n\
         [simulation.hubbard]\nt = 0.4\nu = 3.0\nhbar = 1.0\n\
         [simulation.initial]\nkind = \"plane-wave\"\namplitude = 1.0\nwavenumber = 2.0\n",
    );
    let out = dir.path().join("o");
    assert_eq!(run("simulate", Some(&cfg), &out, &[]).status.code(), Some(0));
    let w: f64 = -4.0 * 0.4 + 2.0 * 0.4 * 4.0;
    for row in rows(&out.join("field.csv")) {
        let phase = 2.0 * row[0] - w * 0.5;
        assert!((row[1] - phase.cos()).abs() < 1e-12 && (row[2] - phase.sin()).abs() < 1e-12);
    }
    assert!(rows(&out.join("field_1.csv")).iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
}

#[test]
fn blow_up_exits_one_and_keeps_last_good_snapshot() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(
        &dir,
        "c.toml",
        "[simulation]\nfamily = \"xxz-lattice\"\nsites = 8\ndt = 5.0\nt_end = 10000.0\nsnapshot_interval = 50.0\n\
         [simulation.initial]\nkind = \"uniform\"\nre = 0.5\n",
    );
    let out = dir.path().join("o");
    let o = run("simulate", Some(&cfg), &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let s = summary(&out);
    assert!(s["status"].as_str().unwrap().starts_with("stopped"));
    let r = rows(&out.join("trajectory.csv"));
    assert!(!r.is_empty() && r.iter().all(|row| row.iter().all(|v| v.is_finite())));
}

#[test]
fn file_profile_is_loaded() {
    let dir = TempDir::new().unwrap();
    let mut data = String::from("re,im\n");
    for m in 0..16 {
        data.push_str(&format!("{},{}\n", 0.1 * m as f64, -0.05 * m as f64));
    }
    fs::write(dir.path().join("init.csv"), data).unwrap();
    let cfg = with_config(
        &dir,
        "c.toml",
        "[simulation]\nfamily = \"gp\"\npoints = 16\nlength = 4.0\nt_end = 0.01\n\
         [simulation.initial]\nkind = \"file\"\npath = \"init.csv\"\n",
    );
    let out = dir.path().join("o");
    assert_eq!(run("simulate", Some(&cfg), &out, &[]).status.code(), Some(0));
    let first: Vec<Vec<f64>> = rows(&out.join("snapshots.csv")).into_iter().take(16).collect();
    assert!((first[5][3] - 0.5).abs() < 1e-15 && (first[5][4] + 0.25).abs() < 1e-15);
    let short = with_config(&dir, "d.toml", &fs::read_to_string(&cfg).unwrap().replace("points = 16", "points = 32"));
    assert_eq!(run("simulate", Some(&short), &out, &[]).status.code(), Some(2));
}

#[test]
fn truncation_study_default_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(&dir, "c.toml", "[study]\nkind = \"truncation\"\n");
    let out = dir.path().join("o");
    assert_eq!(run("study", Some(&cfg), &out, &[]).status.code(), Some(0));
    let s = summary(&out);
    assert!((s["slope"].as_f64().unwrap() - 1.0).abs() <= 0.3);
}

#[test]
fn empty_sweep_exits_two() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(&dir, "c.toml", "[study.continuum_limit]\nsites = []\n");
    assert_eq!(run("study", Some(&cfg), &dir.path().join("o"), &[]).status.code(), Some(2));
}

#[test]
fn band_violation_exits_one() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(&dir, "c.toml", "[study]\nkind = \"truncation\"\nexpected_slope = 3.0\n");
    assert_eq!(run("study", Some(&cfg), &dir.path().join("o"), &[]).status.code(), Some(1));
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let cfg = with_config(
        &dir,
        "c.toml",
        "[study]\nkind = \"continuum-limit\"\n[study.continuum_limit]\nsites = [16, 32, 64]\nt_end = 0.1\n",
    );
    let csv = |threads: &str, tag: &str| {
        let out = dir.path().join(tag);
        run("study", Some(&cfg), &out, &["--threads", threads]);
        fs::read(out.join("convergence.csv")).unwrap()
    };
    let a = csv("1", "a");
    assert_eq!(a, csv("1", "b"));
    assert_eq!(a, csv("4", "c"));
}

#[test]
fn dry_run_computes_nothing() {
    let dir = TempDir::new().unwrap();
    for sub in ["verify-derivation", "simulate", "study"] {
        let out = dir.path().join(sub);
        let o = run(sub, None, &out, &["--dry-run"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&o.stdout).starts_with("plan: "));
        assert!(!out.exists());
    }
    let cfg = with_config(&dir, "c.toml", "[study.truncation]\nspins = [1.0]\n[study]\nkind = \"truncation\"\n");
    assert_eq!(run("study", Some(&cfg), &dir.path().join("x"), &["--dry-run"]).status.code(), Some(2));
}
