//! End-to-end tests of the binary: exit codes, canonical output, and the
//! documented command behaviors.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tugames"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn json(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(output)).expect("JSON stdout")
}

#[test]
fn eval_shapley_on_the_fixtures() {
    let cases = [
        ("ads_original.json", ["9", "36", "9"]),
        ("ads_internal_realloc.json", ["9", "30", "15"]),
        ("ads_synergy_realloc.json", ["7", "34", "13"]),
        ("ads_underreport.json", ["11", "35", "8"]),
    ];
    for (file, [d, s, e]) in cases {
        let out = run(&["eval", fixture(file).to_str().unwrap(), "--rule", "shapley", "--json"]);
        assert_eq!(code(&out), 0);
        let value = json(&out);
        assert_eq!(value["payoffs"]["d"], d, "{file}");
        assert_eq!(value["payoffs"]["s"], s, "{file}");
        assert_eq!(value["payoffs"]["e"], e, "{file}");
        assert_eq!(value["total"], "54");
    }
}

#[test]
fn eval_other_rules() {
    let file = fixture("ads_original.json");
    let path = file.to_str().unwrap();

    let out = run(&["eval", path, "--rule", "equal-division", "--json"]);
    let value = json(&out);
    for p in ["d", "s", "e"] {
        assert_eq!(value["payoffs"][p], "18");
    }

    // alpha = 1 reproduces Shapley
    let egal = run(&["eval", path, "--rule", "egalitarian-shapley", "--alpha", "1", "--json"]);
    let shap = run(&["eval", path, "--rule", "shapley", "--json"]);
    assert_eq!(json(&egal)["payoffs"], json(&shap)["payoffs"]);

    let egal_half =
        run(&["eval", path, "--rule", "egalitarian-shapley", "--alpha", "1/2", "--json"]);
    assert_eq!(json(&egal_half)["payoffs"]["d"], "27/2");

    let nuc = run(&["eval", path, "--rule", "nucleolus", "--json"]);
    let value = json(&nuc);
    assert_eq!(value["payoffs"]["d"], "19/2");
    assert_eq!(value["payoffs"]["s"], "73/2");
    assert_eq!(value["payoffs"]["e"], "8");

    let weighted = run(&[
        "eval", path, "--rule", "weighted-shapley", "--weights", "1,1,1", "--json",
    ]);
    assert_eq!(json(&weighted)["payoffs"], json(&shap)["payoffs"]);
}

#[test]
fn usage_errors_exit_two() {
    let path = fixture("ads_original.json");
    let path = path.to_str().unwrap();
    // unknown rule
    assert_eq!(code(&run(&["eval", path, "--rule", "banzhaf"])), 2);
    // the 2-player-only rule on a 3-player game
    assert_eq!(code(&run(&["eval", path, "--rule", "phi-two-player"])), 2);
    // missing file
    assert_eq!(code(&run(&["eval", "no-such-file.json", "--rule", "shapley"])), 2);
    // malformed file
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"players": ["a"], "worths": 7}"#).unwrap();
    assert_eq!(code(&run(&["eval", bad.to_str().unwrap(), "--rule", "shapley"])), 2);
    // clap-level misuse
    assert_eq!(code(&run(&["eval"])), 2);
    // weights on the wrong rule
    assert_eq!(code(&run(&["eval", path, "--rule", "shapley", "--weights", "1,2,3"])), 2);
}

#[test]
fn audit_exit_codes_follow_the_expectation_table() {
    // nucleolus fails R and CMarg, but that is expected: exit 0
    let out = run(&[
        "audit", "--rule", "nucleolus", "--samples", "120", "--seed", "0", "--players", "3",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let value = json(&out);
    assert_eq!(value["unexpected_violation"], false);
    let cells = value["reports"][0]["cells"].as_array().unwrap();
    let outcome_of = |axiom: &str| -> String {
        cells
            .iter()
            .find(|c| c["axiom"] == axiom)
            .unwrap_or_else(|| panic!("no cell for {axiom}"))["outcome"]
            .as_str()
            .unwrap()
            .to_owned()
    };
    assert_eq!(outcome_of("R"), "violated");
    assert_eq!(outcome_of("CMarg"), "violated");
    assert_eq!(outcome_of("E"), "no-violation-found");
    assert_eq!(outcome_of("W"), "no-violation-found");

    // null-value fails exactly E, also expected
    let out = run(&["audit", "--rule", "null-value", "--samples", "60", "--players", "3"]);
    assert_eq!(code(&out), 0);

    // shapley passes its whole row
    let out = run(&["audit", "--rule", "shapley", "--samples", "60", "--players", "3,4"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn audit_json_is_byte_for_byte_reproducible() {
    let args = [
        "audit", "--rule", "nucleolus", "--samples", "100", "--seed", "31", "--players", "3",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn audit_superadditive_domain_runs() {
    let out = run(&[
        "audit", "--rule", "equal-division", "--samples", "80", "--players", "3", "--domain",
        "superadditive", "--json",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn manipulate_exit_codes_and_reports() {
    let path = fixture("ads_original.json");
    let path = path.to_str().unwrap();

    let immune = run(&[
        "manipulate", path, "--coalition", "s,e", "--mode", "internal-reallocation", "--rule",
        "shapley", "--samples", "400", "--json",
    ]);
    assert_eq!(code(&immune), 0);
    let value = json(&immune);
    assert_eq!(value["gain"], "0");
    assert_eq!(value["gain_is_exact"], true);
    assert_eq!(value["witness"], serde_json::Value::Null);

    let exposed = run(&[
        "manipulate", path, "--coalition", "s,e", "--mode", "strong-reallocation", "--rule",
        "shapley", "--samples", "1500", "--json",
    ]);
    assert_eq!(code(&exposed), 1);
    let value = json(&exposed);
    let gain: Vec<&str> = value["gain"].as_str().unwrap().split('/').collect();
    let num: i64 = gain[0].parse().unwrap();
    let den: i64 = gain.get(1).map_or(1, |d| d.parse().unwrap());
    assert!(num >= 2 * den, "gain {} below 2", value["gain"]);
    assert!(value["witness"].is_object());
    assert!(value["diff"]["worths"].as_array().unwrap().len() <= 4);

    let under = run(&[
        "manipulate", path, "--coalition", "s,e", "--mode", "underreport", "--rule", "shapley",
        "--json",
    ]);
    assert_eq!(code(&under), 0);
    assert_eq!(json(&under)["gain"], "0");
}

#[test]
fn transform_round_trips_canonically() {
    let path = fixture("ads_original.json");
    let path = path.to_str().unwrap();
    let original = std::fs::read_to_string(fixture("ads_original.json")).unwrap();

    // identity shift canonicalizes to the same bytes
    let same = run(&["transform", path, "--shift", "0,0,0"]);
    assert_eq!(code(&same), 0);
    assert_eq!(stdout(&same), original);

    // --from-dividends refuses a worths file
    assert_eq!(code(&run(&["transform", path, "--from-dividends"])), 2);

    // worths -> dividends -> worths is the identity
    let dir = tempfile::tempdir().unwrap();
    let divs = run(&["transform", path, "--to-dividends"]);
    assert_eq!(code(&divs), 0);
    let value = json(&divs);
    let entries = value["dividends"].as_array().unwrap();
    let se = entries
        .iter()
        .find(|e| e["coalition"] == serde_json::json!(["e", "s"]))
        .expect("dividend for {s,e}");
    assert_eq!(se["worth"], "30");

    let divs_path = dir.path().join("dividends.json");
    std::fs::write(&divs_path, stdout(&divs)).unwrap();
    let back = run(&["transform", divs_path.to_str().unwrap(), "--from-dividends"]);
    assert_eq!(code(&back), 0);
    assert_eq!(stdout(&back), original);

    // shifting email by 12 and pinning three worths back lands on the
    // synergy fixture
    let shifted = run(&["transform", path, "--shift", "0,0,12"]);
    assert_eq!(code(&shifted), 0);
    let value = json(&shifted);
    let entry = |names: serde_json::Value| -> String {
        value["worths"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["coalition"] == names)
            .map(|e| e["worth"].as_str().unwrap().to_owned())
            .unwrap_or_else(|| "0".to_owned())
    };
    assert_eq!(entry(serde_json::json!(["e"])), "2");
    assert_eq!(entry(serde_json::json!(["d", "e"])), "13");
    assert_eq!(entry(serde_json::json!(["e", "s"])), "52");
}

#[test]
fn random_is_reproducible_and_validates() {
    let a = run(&["random", "--players", "3", "--seed", "11"]);
    let b = run(&["random", "--players", "3", "--seed", "11"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&run(&["random", "--players", "3", "--seed", "12"])));

    let superadditive = run(&[
        "random", "--players", "4", "--seed", "5", "--domain", "superadditive",
    ]);
    assert_eq!(code(&superadditive), 0);
    let value = json(&superadditive);
    assert_eq!(value["domain"], "superadditive");

    let rejected = run(&[
        "random", "--players", "3", "--seed", "5", "--domain", "superadditive", "--generator",
        "rejection",
    ]);
    assert_eq!(code(&rejected), 0);
    assert_eq!(json(&rejected)["domain"], "superadditive");

    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "random", "--players", "3", "--seed", "7", "--count", "3", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    for k in 1..=3 {
        let path = dir.path().join(format!("game-{k:04}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        // every emitted file evaluates cleanly
        let eval = run(&["eval", path.to_str().unwrap(), "--rule", "shapley", "--json"]);
        assert_eq!(code(&eval), 0, "file {k}: {text}");
    }
}

#[test]
fn machine_reports_use_rational_strings_only() {
    let path = fixture("ads_original.json");
    let out = run(&["eval", path.to_str().unwrap(), "--rule", "phi-w", "--json"]);
    let value = json(&out);
    assert_eq!(value["payoffs"]["d"], "144/17");
    // no floating-point numbers anywhere in machine output
    fn no_floats(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => assert!(n.is_u64() || n.is_i64(), "float {n}"),
            serde_json::Value::Array(items) => items.iter().for_each(no_floats),
            serde_json::Value::Object(map) => map.values().for_each(no_floats),
            _ => {}
        }
    }
    no_floats(&value);
}
