use std::process::Command;

use hinv_cli::Report;

fn hinv(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hinv"))
        .args(args)
        .env_remove("HINV_FORMAT")
        .output()
        .expect("binary runs")
}

#[test]
fn full_run_passes() {
    let out = hinv(&["verify", "all", "--n", "3", "--lmax", "3", "--samples", "20"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("0 fail, 0 skipped"), "{text}");
}

#[test]
fn json_is_byte_identical_for_fixed_seed() {
    let args = ["verify", "all", "--n", "3", "--lmax", "2", "--seed", "5", "--samples", "30", "--format", "json"];
    let a = hinv(&args);
    let b = hinv(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: Report = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report.config.seed, 5);
    assert!(report.checks.windows(2).all(|w| w[0].id < w[1].id));
}

#[test]
fn orbit_census_for_five_dimensions() {
    let out = hinv(&["verify", "orbits", "--n", "5", "--samples", "200", "--seed", "7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    let check = report.checks.iter().find(|c| c.id == "orbits/n5").unwrap();
    let dims: Vec<u64> = check.details["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["dimension"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 3, 5, 7, 9]);
    assert_eq!(report.summary.skipped, 7);
}

#[test]
fn independence_in_two_dimensions() {
    let out = hinv(&["verify", "independence", "--n", "2", "--lmax", "5", "--lambda", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    let check = report.checks.iter().find(|c| c.id.starts_with("independence/T2")).unwrap();
    assert_eq!(check.details["rank"], 6);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["verify", "nonsense"],
        vec!["verify", "all", "--n", "1"],
        vec!["verify", "all", "--lambda", "abc"],
        vec!["verify"],
        vec!["frobnicate"],
    ] {
        assert_eq!(hinv(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn environment_sets_format_and_flag_wins() {
    let run = |flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hinv"));
        cmd.args(["verify", "lemma-d"]).env("HINV_FORMAT", "json");
        if let Some(f) = flag {
            cmd.args(["--format", f]);
        }
        String::from_utf8(cmd.output().unwrap().stdout).unwrap()
    };
    assert!(run(None).starts_with('{'));
    assert!(run(Some("text")).starts_with("hinv "));
}

#[test]
fn out_flag_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = hinv(&["verify", "support", "--n", "4", "--lmax", "2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.summary.pass, 2);
}

#[test]
fn help_lists_defaults() {
    let out = hinv(&["verify", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["[default: 3]", "[default: 4]", "[default: formal]", "[default: 100]", "HINV_FORMAT"] {
        assert!(text.contains(needle), "missing {needle}");
    }
}
