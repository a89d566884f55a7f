use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.toml"))
}

fn bisar(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bisar")).current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = bisar(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    bisar(dir, args).status.code().unwrap()
}

fn hdr(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".hdr.toml");
    PathBuf::from(s)
}

/// Simulates, focuses and plots the tandem desk scene; returns every
/// produced file's bytes.
fn tandem_pipeline(dir: &Path, threads: &str) -> Vec<Vec<u8>> {
    let cfg = scenario("tandem");
    let cfg = cfg.to_str().unwrap();
    ok(dir, &["--threads", threads, "simulate", "--config", cfg, "--desk", "--out", "t.raw"]);
    ok(dir, &["--threads", threads, "focus", "t.raw", "--out", "t.img", "--report", "t.report.toml"]);
    ok(dir, &["--threads", threads, "plot", "t.img", "--report", "t.report.toml", "--out", "t.pgm"]);
    ["t.raw", "t.img", "t.report.toml", "t.pgm"]
        .iter()
        .flat_map(|f| {
            let p = dir.join(f);
            let mut v = vec![fs::read(&p).unwrap()];
            if f.ends_with(".raw") || f.ends_with(".img") {
                v.push(fs::read(hdr(&p)).unwrap());
            }
            v
        })
        .collect()
}

#[test]
fn outputs_are_identical_across_runs_and_thread_counts() {
    let (a, b, c) = (TempDir::new().unwrap(), TempDir::new().unwrap(), TempDir::new().unwrap());
    let one = tandem_pipeline(a.path(), "1");
    let again = tandem_pipeline(b.path(), "1");
    let four = tandem_pipeline(c.path(), "4");
    assert_eq!(one.len(), 6);
    assert!(one == again, "repeated run differs");
    assert!(one == four, "thread count changes the output");
}

#[test]
fn raw_header_echoes_the_radar_parameters() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["simulate", "--config", scenario("tandem").to_str().unwrap(), "--out", "t.raw"]);
    let h: toml::Value = toml::from_str(&fs::read_to_string(hdr(&dir.path().join("t.raw"))).unwrap()).unwrap();
    let radar = &h["scenario"]["radar"];
    assert_eq!(radar["prf"].as_float(), Some(2500.0));
    assert_eq!(radar["f0"].as_float(), Some(5.16e9));
    assert_eq!(radar["bandwidth"].as_float(), Some(40e6));
    let n = h["n_azimuth"].as_integer().unwrap() * h["n_range"].as_integer().unwrap();
    assert_eq!(fs::metadata(dir.path().join("t.raw")).unwrap().len() as i64, 8 * n);
}

#[test]
fn gc_stage_one_report_shows_the_azimuth_scaling() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["simulate", "--config", scenario("spaceborne-gc").to_str().unwrap(), "--desk", "--out", "g.raw"]);
    ok(d, &["focus", "g.raw", "--stage1-only", "--out", "g1.img", "--report", "g1.toml"]);
    ok(d, &["analyze", "g1.img", "--out", "again.toml"]);
    let text = fs::read_to_string(d.join("g1.toml")).unwrap();
    assert_eq!(text, fs::read_to_string(d.join("again.toml")).unwrap());
    let r: toml::Value = toml::from_str(&text).unwrap();
    let cell = r["azimuth_cell"].as_float().unwrap();
    let offset = r["offsets"]
        .as_array()
        .unwrap()
        .iter()
        .find(|o| o["to"].as_str() == Some("PT15"))
        .unwrap();
    let sep = offset["azimuth"].as_float().unwrap();
    assert!((sep - 3966.0).abs() < cell, "{sep}");
    assert_eq!(r["processor"].as_str(), Some("gc-stage1"));
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let gc = scenario("spaceborne-gc");
    let gc = gc.to_str().unwrap();

    // usage and configuration errors
    assert_eq!(code(d, &["no-such-command"]), 2);
    assert_eq!(code(d, &["focus", "x.raw", "--blocks", "0x1"]), 2);
    let empty = fs::read_to_string(scenario("tandem")).unwrap();
    let cut = empty.find("[[targets]]").unwrap();
    fs::write(d.join("empty.toml"), &empty[..cut]).unwrap();
    assert_eq!(code(d, &["simulate", "--config", "empty.toml"]), 2);
    assert_eq!(code(d, &["validate-lbf", "--config", gc, "--sweep", "a2="]), 2);

    // the tandem processor refuses a general bistatic scene unless forced
    ok(d, &["simulate", "--config", gc, "--desk", "--out", "g.raw"]);
    assert_eq!(code(d, &["focus", "g.raw", "--mode", "tandem"]), 3);
    assert_eq!(code(d, &["focus", "g.raw", "--mode", "ti"]), 3);
    assert_eq!(code(d, &["focus", "g.raw", "--mode", "tandem", "--force", "--out", "f.img"]), 0);

    // missing and corrupt files
    assert_eq!(code(d, &["focus", "missing.raw"]), 5);
    ok(d, &["focus", "g.raw", "--out", "g.img"]);
    let h = hdr(&d.join("g.img"));
    fs::write(&h, fs::read_to_string(&h).unwrap().replace("n_range", "n_rnage")).unwrap();
    assert_eq!(code(d, &["plot", "g.img"]), 5);
}

#[test]
fn lbf_sweep_reports_a_monotone_trend() {
    let dir = TempDir::new().unwrap();
    let cfg = scenario("airborne-gc");
    ok(dir.path(), &["validate-lbf", "--config", cfg.to_str().unwrap(), "--desk", "--a0", "0", "--sweep", "a2=1,2,3", "--out", "s.toml"]);
    let r: toml::Value = toml::from_str(&fs::read_to_string(dir.path().join("s.toml")).unwrap()).unwrap();
    assert_eq!(r["trend"].as_str(), Some("PASS"));
    assert_eq!(r["rms_phase_error"].as_array().unwrap().len(), 3);
}
