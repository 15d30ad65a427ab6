use std::path::{Path, PathBuf};
use std::process::Command;
use std::{env, fs};

use serde_json::Value;

fn here(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = env::temp_dir().join(format!("escalade-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Exit status, standard output and standard error of one invocation.
fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("escalade").chain(args.iter().copied());
    let code = escalade::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = cli(&full);
    let value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, value)
}

#[test]
fn cyclic_zero_one_has_two_positional_equilibria() {
    let (code, out, _) = cli(&["enumerate", &here("examples/zero_one_cyclic.game")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("positional equilibria: 2 of 4\n"), "{out}");
    let (_, v) = json(&["enumerate", &here("examples/zero_one_cyclic.game")]);
    assert_eq!(v["count"], 2);
    let profiles: Vec<&Value> = v["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| &e["profile"])
        .collect();
    assert_eq!(
        profiles,
        [
            &serde_json::json!({"A": "a", "B": "c"}),
            &serde_json::json!({"A": "c", "B": "a"})
        ]
    );
}

#[test]
fn never_bid_is_rejected_with_its_deviation() {
    let args = [
        "check",
        &here("examples/dollar_auction_v100.game"),
        "--profile",
        &here("profiles/never_bid.profile"),
    ];
    let (code, out, _) = cli(&args);
    assert_eq!(code, 1);
    assert!(
        out.contains("at B: player 1 deviating to `c` gets 99-1*n > 1-1*n"),
        "{out}"
    );
    let (code, v) = json(&args);
    assert_eq!(code, 1);
    assert_eq!(v["report"]["ok"], false);
    let at_b = v["report"]["violations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["at"] == "B")
        .unwrap();
    assert_eq!(at_b["deviation_value"]["affine"], serde_json::json!({"a": 99, "b": -1}));
    assert_eq!(at_b["profile_value"]["affine"], serde_json::json!({"a": 1, "b": -1}));
}

#[test]
fn seven_rounds_solve_to_one_zero() {
    let (code, out, _) = cli(&["solve", &here("examples/zero_one_7.game")]);
    assert_eq!(code, 0);
    assert!(out.contains("outcome: (1, 0)\n"), "{out}");
    let (_, v) = json(&["solve", &here("examples/zero_one_7.game"), "--ties", "last"]);
    assert_eq!(v["outcome"], serde_json::json!([1, 0]));
}

#[test]
fn sequential_pennies_enumeration() {
    let (code, v) = json(&["enumerate", &here("examples/matching_pennies_seq.game")]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 2);
    let plays: Vec<(&str, &Value)> = v["play_lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| (l["play"].as_str().unwrap(), &l["outcome"]))
        .collect();
    let one_one = serde_json::json!([1, 1]);
    assert_eq!(plays, [("p f f", &one_one), ("f p p", &one_one)]);
    for p in ["profiles/pennies_first.profile", "profiles/pennies_second.profile"] {
        assert_eq!(
            cli(&[
                "check",
                &here("examples/matching_pennies_seq.game"),
                "--profile",
                &here(p)
            ])
            .0,
            0
        );
    }
}

#[test]
fn finite_zero_one_games_have_eight_profiles() {
    for (file, outcome) in [
        ("examples/zero_one_7.game", [1, 0]),
        ("examples/zero_one_6.game", [0, 1]),
    ] {
        let (code, v) = json(&["enumerate", &here(file)]);
        assert_eq!(code, 0);
        assert_eq!(v["count"], 8);
        let lines = v["play_lines"].as_array().unwrap();
        assert!(
            lines.iter().all(|l| l["outcome"] == serde_json::json!(outcome)),
            "{file}"
        );
    }
}

#[test]
fn cyclic_rejections() {
    let game = here("examples/zero_one_cyclic.game");
    let (code, v) = json(&["check", &game, "--profile", &here("profiles/ac_bc.profile")]);
    assert_eq!(code, 1);
    assert_eq!(v["report"]["divergent_from"], serde_json::json!(["A", "B"]));
    let (code, v) = json(&["check", &game, "--profile", &here("profiles/aa_ba.profile")]);
    assert_eq!(code, 1);
    let at_a = &v["report"]["violations"][0];
    assert_eq!((&at_a["at"], &at_a["action"]), (&Value::from("A"), &Value::from("c")));
    assert_eq!(at_a["deviation_value"]["utility"], 1);
    assert_eq!(at_a["profile_value"]["utility"], 0);
}

#[test]
fn unfolding_oscillates() {
    for depth in 1..=12 {
        let file = scratch(&format!("unfold{depth}.game"));
        let terminal = if depth % 2 == 1 { "1,0" } else { "0,1" };
        let args = [
            "--out",
            file.to_str().unwrap(),
            "unfold",
            &here("examples/zero_one_cyclic.game"),
        ];
        let (code, _, err) = cli(&[&args[..], &["--depth", &depth.to_string(), "--terminal", terminal]].concat());
        assert_eq!(code, 0, "{err}");
        let (_, v) = json(&["solve", file.to_str().unwrap()]);
        let expected = if depth % 2 == 1 { [1, 0] } else { [0, 1] };
        assert_eq!(v["outcome"], serde_json::json!(expected), "depth {depth}");
    }
}

#[test]
fn unfolding_agrees_with_the_corpus() {
    for (depth, file) in [(7, "examples/zero_one_7.game"), (6, "examples/zero_one_6.game")] {
        let terminal = if depth % 2 == 1 { "1,0" } else { "0,1" };
        for source in ["examples/zero_one_cyclic.game", "examples/zero_one_param.game"] {
            let (code, out, _) = cli(&[
                "unfold",
                &here(source),
                "--depth",
                &depth.to_string(),
                "--terminal",
                terminal,
            ]);
            assert_eq!(code, 0);
            assert_eq!(
                out,
                fs::read_to_string(here(file)).unwrap(),
                "{source} at depth {depth}"
            );
        }
    }
}

#[test]
fn auction_verdicts_match_truncation() {
    let (code, v) = json(&["auction", "--value", "100", "--max-stage", "40"]);
    assert_eq!(code, 0);
    let profiles = v["profiles"].as_array().unwrap();
    assert_eq!(profiles.len(), 8);
    let accepted: Vec<&Value> = profiles
        .iter()
        .filter(|p| p["equilibrium"] == true)
        .map(|p| &p["profile"])
        .collect();
    assert_eq!(
        accepted,
        [
            &serde_json::json!({"A0": "a", "B": "c", "A": "a"}),
            &serde_json::json!({"A0": "c", "B": "a", "A": "c"})
        ]
    );
    for p in profiles {
        let cut = &p["truncated_equilibrium"];
        assert!(cut.is_null() || *cut == p["equilibrium"], "{p}");
    }
    assert_eq!(v["never_bid"]["ok"], false);
}

#[test]
fn crossed_beliefs_escalate() {
    for (file, alice, bertrand) in [
        (
            "examples/zero_one_cyclic.game",
            "profiles/ac_ba.profile",
            "profiles/aa_bc.profile",
        ),
        (
            "examples/dollar_auction_v100.game",
            "profiles/alice_continues.profile",
            "profiles/bertrand_continues.profile",
        ),
    ] {
        assert_eq!(cli(&["check", &here(file), "--profile", &here(alice)]).0, 0);
        assert_eq!(cli(&["check", &here(file), "--profile", &here(bertrand)]).0, 0);
        let (code, v) = json(&[
            "--seed",
            "0",
            "simulate",
            &here(file),
            "--horizon",
            "100",
            "--policy",
            "fixed:1,0",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["escalation"]["verdict"], "escalates", "{file}");
        assert_eq!(v["trace"]["end"]["kind"], "horizon_hit");
    }
}

#[test]
fn uniform_beliefs_stop_half_the_time() {
    let args = [
        "--seed",
        "0",
        "simulate",
        &here("examples/zero_one_cyclic.game"),
        "--horizon",
        "1000",
        "--runs",
        "10000",
    ];
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["horizon_hits"], 0);
    let f = v["stopping_frequency"].as_f64().unwrap();
    assert!((f - 0.5).abs() <= 0.02, "{f}");
}

#[test]
fn simulate_writes_records() {
    let file = scratch("seed53.trace");
    let (code, out, _) = cli(&[
        "--seed",
        "53",
        "--out",
        file.to_str().unwrap(),
        "simulate",
        &here("examples/zero_one_cyclic.game"),
        "--horizon",
        "1000",
    ]);
    assert_eq!(code, 0);
    let records = fs::read_to_string(&file).unwrap();
    assert_eq!(records, fs::read_to_string(here("tests/data/seed53.trace")).unwrap());
    assert!(out.contains(&records));
}

#[test]
fn matrix_solutions() {
    for (file, mix, value) in [
        ("examples/rps.game", vec!["1/3"; 3], "1/2"),
        ("examples/rps_zero_sum.game", vec!["1/3"; 3], "0"),
        ("examples/matching_pennies.game", vec!["1/2"; 2], "1/2"),
    ] {
        let (code, v) = json(&["matrix", &here(file)]);
        assert_eq!(code, 0);
        assert_eq!(v["row"], serde_json::json!(mix));
        assert_eq!(v["column"], serde_json::json!(mix));
        assert_eq!(v["value"], value);
        assert_eq!(v["certified"], true);
    }
}

#[test]
fn export_is_stable_and_highlights() {
    let game = here("examples/zero_one_cyclic.game");
    let (code, plain, _) = cli(&["export", &game, "--dot"]);
    assert_eq!(code, 0);
    assert_eq!(plain, cli(&["export", &game, "--dot"]).1);
    assert!(!plain.contains("bold"));
    let (_, marked, _) = cli(&["export", &game, "--profile", &here("profiles/aa_bc.profile"), "--dot"]);
    assert_eq!(marked.matches("style=bold").count(), 2);
    let (code, _, err) = cli(&["export", &here("examples/rps.game"), "--dot"]);
    assert_eq!((code, err.trim()), (2, "error: matrix games have no graph to export"));
}

#[test]
fn json_is_byte_deterministic() {
    let runs: [&[&str]; 6] = [
        &["enumerate", "examples/zero_one_cyclic.game"],
        &["solve", "examples/matching_pennies_seq.game"],
        &["auction", "--value", "100", "--max-stage", "12"],
        &[
            "--seed",
            "9",
            "simulate",
            "examples/dollar_auction_v100.game",
            "--horizon",
            "30",
        ],
        &["matrix", "examples/rps.game"],
        &["export", "examples/zero_one_param.game", "--dot"],
    ];
    for args in runs {
        let args: Vec<String> = args
            .iter()
            .map(|a| {
                if a.starts_with("examples/") {
                    here(a)
                } else {
                    a.to_string()
                }
            })
            .collect();
        let mut full = vec!["--format".to_string(), "json".to_string()];
        full.extend(args);
        let full: Vec<&str> = full.iter().map(String::as_str).collect();
        let first = cli(&full);
        assert_eq!(first, cli(&full));
        assert!(serde_json::from_str::<Value>(&first.1).is_ok());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["bogus"]).0, 2);
    assert_eq!(cli(&["solve", "/nonexistent/file.game"]).0, 2);
    let broken = scratch("broken.game");
    fs::write(&broken, "finite { Alice { a -> leaf(1) } }\n").unwrap();
    let (code, _, err) = cli(&["solve", broken.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("1:29"), "{err}");
    assert_eq!(
        cli(&[
            "--format",
            "json",
            "simulate",
            &here("examples/zero_one_cyclic.game"),
            "--horizon",
            "5"
        ])
        .0,
        2
    );

    let wide = scratch("zero_one_40.game");
    let (code, _, _) = cli(&[
        "--out",
        wide.to_str().unwrap(),
        "unfold",
        &here("examples/zero_one_cyclic.game"),
        "--depth",
        "40",
        "--terminal",
        "0,1",
    ]);
    assert_eq!(code, 0);
    let (code, v) = json(&["--cap", "5", "enumerate", wide.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(v["count"], 5);
}

#[test]
fn help_documents_profile_files() {
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("KEY = ACTION"));
    for sub in [
        "solve",
        "enumerate",
        "check",
        "unfold",
        "auction",
        "simulate",
        "matrix",
        "export",
    ] {
        assert!(out.contains(sub), "{sub}");
    }
}

#[test]
fn binary_reports_exit_status() {
    let bin = env!("CARGO_BIN_EXE_escalade");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = status(&[
        "check",
        &here("examples/dollar_auction_v100.game"),
        "--profile",
        &here("profiles/never_bid.profile"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = status(&["solve", &here("examples/zero_one_7.game")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("outcome: (1, 0)"));
    assert_eq!(status(&["frobnicate"]).status.code(), Some(2));
}
