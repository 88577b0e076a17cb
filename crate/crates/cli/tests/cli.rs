use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use num_bigint::BigInt;
use serde_json::Value;

fn nilgrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilgrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_cache(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilgrowth"))
        .env("NILGROWTH_CACHE_DIR", dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_gamma_reports_exponent_22() {
    let o = nilgrowth(&["solve", "--group", "gamma"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "exponent 22"), "{}", stdout(&o));
}

#[test]
fn phi_json_round_trips_exact_values() {
    let o = nilgrowth(&["growth", "--group", "heisenberg", "--mode", "phi", "--n-max", "64", "--out", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    let slope = v["fit"]["slope"].as_f64().unwrap();
    assert!((slope - 6.0).abs() < 0.2, "{slope}");
    let series = v["series"].as_array().unwrap();
    assert_eq!(series.len(), 5);
    for p in series {
        let n = p[0].as_u64().unwrap();
        let value: BigInt = p[1].as_str().unwrap().parse().unwrap();
        assert_eq!(value.to_string(), p[1].as_str().unwrap());
        assert!(value >= BigInt::from(n).pow(6));
    }
}

#[test]
fn growth_csv_is_long_format() {
    let o = nilgrowth(&["growth", "--group", "z", "--mode", "word", "--n-max", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("series,n,value"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows, ["word,1,3", "word,2,5", "word,3,7", "word,4,9", "word,5,11"]);
}

#[test]
fn exhaustive_detection_for_integers() {
    let o = nilgrowth(&["detect", "--group", "z", "--n", "5", "--moduli", "11", "--exhaustive"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("detected: true"), "{text}");
    assert!(text.contains("method: exhaustive"), "{text}");
    let o = nilgrowth(&["detect", "--group", "z", "--n", "5", "--moduli", "10", "--exhaustive"]);
    assert!(stdout(&o).contains("detected: false"));
}

#[test]
fn rejected_moduli_name_the_constraint() {
    let o = nilgrowth(&["detect", "--group", "heisenberg", "--n", "1", "--moduli", "3,3,9"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("must divide"), "{}", stderr(&o));
}

#[test]
fn parse_error_points_at_position() {
    let o = nilgrowth(&["solve", "--group", "u(3"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("position 3"), "{err}");
    assert!(err.contains("     ^"), "{err}");
}

#[test]
fn oversized_ball_is_refused_with_a_hint() {
    let o = nilgrowth(&["ball", "--group", "gamma", "--radius", "10", "--limit", "1000"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("resource limit"), "{err}");
    assert!(err.contains("certify"), "{err}");
}

#[test]
fn ball_csv_has_a_row_per_element() {
    let o = nilgrowth(&["ball", "--group", "heisenberg", "--radius", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("e12,e23,e13,length"));
    assert_eq!(lines.count(), 29);
}

#[test]
fn config_run_hits_the_cache_on_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[run]\ncommand = \"solve\"\ngroup = \"gamma\"\nout = \"json\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let first = with_cache(&cache, &["run", "--config", cfg]);
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(stderr(&first).contains("cache miss"));
    let second = with_cache(&cache, &["run", "--config", cfg]);
    assert!(second.status.success());
    assert!(stderr(&second).contains("cache hit"));
    assert_eq!(first.stdout, second.stdout);

    // the same group spelled differently shares the entry
    let alias = dir.path().join("alias.toml");
    fs::write(
        &alias,
        "[run]\ncommand = \"solve\"\ngroup = \"unipotent(5) erase (1,5),(1,4)\"\nout = \"json\"\n",
    )
    .unwrap();
    let third = with_cache(&cache, &["run", "--config", alias.to_str().unwrap()]);
    assert!(stderr(&third).contains("cache hit"), "{}", stderr(&third));

    let entries: Vec<_> = fs::read_dir(&cache).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let entry = entries[0].as_ref().unwrap().path();
    let manifest: Value = serde_json::from_slice(&fs::read(entry.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["group"], "unipotent(5) erase (1,4),(1,5)");
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn corrupted_cache_entry_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[run]\ncommand = \"solve\"\ngroup = \"z\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert!(with_cache(dir.path(), &["run", "--config", cfg]).status.success());
    let entry = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.is_dir())
        .unwrap();
    fs::write(entry.join("result.txt"), "tampered").unwrap();
    let o = with_cache(dir.path(), &["run", "--config", cfg]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("checksum"), "{}", stderr(&o));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[run]\ncommand = \"solve\"\ngroup = \"z\"\nradius = 3\n").unwrap();
    let o = with_cache(dir.path(), &["run", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("radius"), "{}", stderr(&o));
}

#[test]
fn plots_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for p in [&a, &b] {
        let o = nilgrowth(&[
            "growth", "--group", "heisenberg", "--mode", "compare", "--n-max", "16",
            "--plot", p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (x, y) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(x.starts_with(b"<svg"));
    assert_eq!(x, y);
}

#[test]
fn single_point_plot_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("one.svg");
    let o = nilgrowth(&[
        "growth", "--group", "z", "--mode", "phi", "--n-min", "4", "--n-max", "4",
        "--plot", p.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("at least 2"), "{}", stderr(&o));
    assert!(!p.exists());
}

#[test]
fn output_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out").join("series.json");
    let o = nilgrowth(&["series", "--group", "u4", "--out", "json", "--output", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&fs::read(&p).unwrap()).unwrap();
    assert_eq!(v["class"], 3);
    assert_eq!(v["bass_degree"], 10);
}

#[test]
fn report_passes() {
    let o = nilgrowth(&["report"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().last().unwrap().ends_with("checks passed"));
}
