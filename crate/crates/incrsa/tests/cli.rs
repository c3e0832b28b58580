use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn incrsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incrsa")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

/// Exports a built-in scenario into a temporary directory.
fn exported(name: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path: PathBuf = dir.path().join(format!("{name}.json"));
    let p = path.display().to_string();
    let o = incrsa(&["export-scenario", "--scenario", name, "--json", &p]);
    assert!(o.status.success(), "{}", stderr(&o));
    (dir, p)
}

#[test]
fn speak_gp_prints_sorted_table_with_optimum_marked() {
    let (_d, game) = exported("fig2");
    let o = incrsa(&["speak", "--game", &game, "--world", "R1", "--mode", "gp"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "utterance   probability\nred dress        0.5000 *\ndress            0.2500\nred object       0.2500\n"
    );
}

#[test]
fn speak_ip_top_row() {
    let (_d, game) = exported("fig2");
    let o = incrsa(&["speak", "--game", &game, "--world", "R1", "--mode", "ip"]);
    let out = stdout(&o);
    let top = out.lines().nth(1).unwrap();
    assert!(top.starts_with("dress") && top.contains("0.4286"), "{out}");
}

#[test]
fn json_output_has_full_precision() {
    let (d, game) = exported("fig2");
    let json = d.path().join("ip.json");
    let o = incrsa(&[
        "speak",
        "--game",
        &game,
        "--world",
        "R1",
        "--mode",
        "ip",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert!((v["dress"].as_f64().unwrap() - 3.0 / 7.0).abs() < 1e-12);
}

#[test]
fn unknown_world_exits_3() {
    let (_d, game) = exported("fig2");
    let o = incrsa(&["speak", "--game", &game, "--world", "R9"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("R9"));
}

#[test]
fn listen_word_tables() {
    let (_d, game) = exported("sedivy-tall");
    let o = incrsa(&["listen-word", "--game", &game, "--word", "tall"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("tall_cup           0.6000"), "{out}");
    assert!(out.contains("tall_pitcher       0.4000"), "{out}");

    let (_d, game) = exported("fig2");
    let out = stdout(&incrsa(&[
        "listen-word",
        "--game",
        &game,
        "--context",
        "",
        "--word",
        "red",
    ]));
    assert_eq!(
        out,
        "world  probability\nR1          0.3636\nR2          0.0000\nR3          0.6364\n"
    );
}

#[test]
fn invalid_continuation_exits_3_and_lists_valid_words() {
    let (_d, game) = exported("fig2");
    let o = incrsa(&["listen-word", "--game", &game, "--word", "object"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("dress, red"), "{}", stderr(&o));
}

#[test]
fn other_queries() {
    let (_d, game) = exported("fig2");
    let o = incrsa(&["listen", "--game", &game, "--utterance", "red object", "--literal"]);
    assert!(stdout(&o).contains("R1          0.5000"));
    let o = incrsa(&["speak-word", "--game", &game, "--world", "R1", "--context", "red"]);
    assert!(stdout(&o).starts_with("word    probability\ndress        0.6667 *\n"));
    let o = incrsa(&["unroll", "--game", &game, "--world", "R3"]);
    assert_eq!(stdout(&o), "red object\n");
}

#[test]
fn scenario_exit_codes() {
    let o = incrsa(&["scenario", "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = incrsa(&["scenario", "--scenario", "fig2"]);
    let rows = stdout(&o).lines().filter(|l| l.trim_start().starts_with("ok")).count();
    assert!(rows >= 12);

    assert_eq!(incrsa(&["scenario", "--scenario", "nosuch"]).status.code(), Some(2));
}

#[test]
fn invalid_game_file_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"worlds":[],"vocabulary":[],"utterances":[],"semantics":{"mode":"table","true_pairs":[]}}"#,
    )
    .unwrap();
    let o = incrsa(&["speak", "--game", path.to_str().unwrap(), "--world", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("worlds"));
}

#[test]
fn load_errors_exit_2() {
    assert_eq!(
        incrsa(&["speak", "--game", "/nonexistent.json", "--world", "R1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(incrsa(&["speak", "--world", "R1"]).status.code(), Some(2));
    assert_eq!(
        incrsa(&["tuna", "--corpus", "/nonexistent", "--domain", "people"])
            .status
            .code(),
        Some(2)
    );
    // the synthetic fixture has no people trials
    let o = incrsa(&[
        "tuna",
        "--fixture",
        &fixture("tuna_synthetic.json"),
        "--domain",
        "people",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tuna_fixture_summary_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let o = incrsa(&[
        "tuna",
        "--fixture",
        &fixture("tuna_synthetic.json"),
        "--domain",
        "furniture",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("trials=3 gp=1 ip=0\n"), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["trial_count"], 3);
    assert_eq!(v["trials"][0]["gp_optimal"][0], "colour:grey type:desk");
}

#[test]
fn tuna_corpus_run() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/tuna");
    let o = incrsa(&["tuna", "--corpus", root.to_str().unwrap(), "--domain", "furniture"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("trials=2 "));
    assert!(stderr(&o).contains("dropped 1 multi-target"));
    assert!(stderr(&o).contains("broken.xml"));
}

#[test]
fn output_is_deterministic() {
    let (_d, game) = exported("fig2");
    for args in [
        vec!["speak", "--game", &game, "--world", "R2", "--mode", "ip"],
        vec!["scenario", "--all"],
    ] {
        assert_eq!(incrsa(&args).stdout, incrsa(&args).stdout);
    }
}

#[test]
fn export_to_stdout_round_trips() {
    let o = incrsa(&["export-scenario", "--scenario", "english-dress"]);
    let game = incrsa::gamefile::load_game(&stdout(&o)).unwrap();
    assert_eq!(game.world_ids(), ["R1", "R2"]);
}
