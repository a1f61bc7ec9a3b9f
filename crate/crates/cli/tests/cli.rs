use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use atlas_cli::report::from_json;

fn atlas(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atlas"))
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn log_value(dir: &Path, stem: &str, key: &str) -> u64 {
    let text = fs::read_to_string(dir.join(format!("{stem}.log"))).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().parse().unwrap()))
        .unwrap()
}

#[test]
fn twelve_point_designs_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o = atlas(a.path(), &["designs", "--degrees", "12"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        code(&atlas(
            b.path(),
            &["designs", "--degrees", "12", "--threads", "3"]
        )),
        0
    );
    for ext in ["csv", "json", "md"] {
        let x = fs::read(a.path().join(format!("designs.{ext}"))).unwrap();
        let y = fs::read(b.path().join(format!("designs.{ext}"))).unwrap();
        assert_eq!(x, y, "designs.{ext} differs between runs");
    }
    let report = from_json(&fs::read_to_string(a.path().join("designs.json")).unwrap()).unwrap();
    let row = report.row("5-(12,6,6)").unwrap();
    assert_eq!((row.blocks, row.count), (Some(792), 1));
    assert_eq!(row.aut_orders, ["95040"]);
    assert!(report.is_exact());
}

#[test]
fn second_run_hits_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["designs", "--degrees", "11", "--format", "csv"];
    assert_eq!(code(&atlas(dir.path(), &args)), 0);
    let first = fs::read(dir.path().join("designs.csv")).unwrap();
    assert!(log_value(dir.path(), "designs", "cache_misses") > 0);
    assert_eq!(code(&atlas(dir.path(), &args)), 0);
    assert_eq!(log_value(dir.path(), "designs", "cache_misses"), 0);
    assert!(log_value(dir.path(), "designs", "cache_hits") > 0);
    assert_eq!(fs::read(dir.path().join("designs.csv")).unwrap(), first);
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["designs", "--degrees", "11", "--format", "csv"];
    assert_eq!(code(&atlas(dir.path(), &args)), 0);
    let first = fs::read(dir.path().join("designs.csv")).unwrap();
    let mut broken = 0;
    for sub in fs::read_dir(dir.path().join("cache")).unwrap() {
        for e in fs::read_dir(sub.unwrap().path()).unwrap() {
            fs::write(e.unwrap().path(), "{ not json").unwrap();
            broken += 1;
        }
    }
    assert!(broken > 0);
    let o = atlas(dir.path(), &args);
    assert_eq!(code(&o), 0);
    assert_eq!(log_value(dir.path(), "designs", "cache_discarded"), broken);
    assert_eq!(fs::read(dir.path().join("designs.csv")).unwrap(), first);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "degrees = [11]\nmin_t = 4\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(
        code(&atlas(
            dir.path(),
            &["designs", "--config", c, "--format", "json"]
        )),
        0
    );
    let only_file =
        from_json(&fs::read_to_string(dir.path().join("designs.json")).unwrap()).unwrap();
    assert_eq!(
        only_file
            .rows
            .iter()
            .map(|r| r.parameters.as_str())
            .collect::<Vec<_>>(),
        ["4-(11,4,1)", "4-(11,5,1)", "4-(11,5,6)"]
    );
    assert_eq!(
        code(&atlas(
            dir.path(),
            &["designs", "--config", c, "--format", "json", "--min-t", "2"]
        )),
        0
    );
    let overridden =
        from_json(&fs::read_to_string(dir.path().join("designs.json")).unwrap()).unwrap();
    assert_eq!(overridden.rows.len(), 4);
    assert!(overridden.row("3-(11,3,1)").is_some());
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "degrees = [11]\nmax_blocks = 3\n").unwrap();
    let o = atlas(dir.path(), &["designs", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn degree_that_is_not_an_index_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&atlas(dir.path(), &["srg", "--degrees", "7"])), 1);
}

#[test]
fn srg_small_degrees() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&atlas(
            dir.path(),
            &["srg", "--degrees", "11,12", "--format", "csv"]
        )),
        0
    );
    let text = fs::read_to_string(dir.path().join("srg.csv")).unwrap();
    assert_eq!(text.lines().count(), 1, "header only: {text}");
    assert_eq!(
        code(&atlas(
            dir.path(),
            &["srg", "--degrees", "144", "--format", "json"]
        )),
        0
    );
    let r = from_json(&fs::read_to_string(dir.path().join("srg.json")).unwrap()).unwrap();
    assert_eq!(r.rows.len(), 2);
}

#[test]
fn row_filter_on_fifty_five_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = atlas(
        dir.path(),
        &[
            "designs",
            "--degrees",
            "55",
            "--row",
            "k=3",
            "--min-omega1-order",
            "4",
            "--format",
            "json",
        ],
    );
    assert_eq!(code(&o), 0);
    let r = from_json(&fs::read_to_string(dir.path().join("designs.json")).unwrap()).unwrap();
    assert_eq!(r.rows.len(), 1);
    let row = &r.rows[0];
    assert_eq!(row.parameters, "2-(55,3,4)");
    assert_eq!((row.blocks, row.count), (Some(1980), 1));
    assert_eq!(row.aut_orders, ["7920"]);
    assert!(!r.notes.is_empty());
}

#[test]
fn tight_canon_cap_exits_with_budget_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = atlas(
        dir.path(),
        &["designs", "--degrees", "12", "--canon-max-nodes", "1"],
    );
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stdout));
    let md = fs::read_to_string(dir.path().join("designs.md")).unwrap();
    assert!(md.contains("unknown") && md.contains("warning:"), "{md}");
}

#[test]
fn subgroups_command_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = atlas(dir.path(), &["subgroups"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("subgroups.csv")).unwrap();
    assert_eq!(csv.lines().count(), 27);
    assert!(csv.lines().any(|l| l == "7920,1,1"));
}
