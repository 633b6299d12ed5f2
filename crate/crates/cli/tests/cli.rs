use std::process::{Command, Output};

use ergo_cli::{parse_element, run_verify, CliError, Scale, Suite};
use ergo_core::json::{element_to_json, tower_element_to_json, Element};
use ergo_core::{counterexample_element, random_element, transposition, ClopenSet, FullGroupElement};
use serde_json::Value;

fn ergo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let o = ergo(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn parse_element_examples() {
    let t = parse_element(r#"{"system":"dyadic_odometer","depth":0,"cocycle":[1]}"#).unwrap();
    assert_eq!(t, Element::Odometer(FullGroupElement::odometer()));
    let w = parse_element(r#"{"system":"dyadic_odometer","depth":1,"cocycle":[1,-1]}"#).unwrap();
    let a = ClopenSet::cylinder(1, 0).unwrap();
    assert_eq!(w, Element::Odometer(transposition(&a).unwrap()));

    let o = ergo(&["index", r#"{"system":"dyadic_odometer","depth":2,"cocycle":[2,0,-1,1]}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("prefixes 1 and 2"));
}

#[test]
fn round_trip_through_json() {
    for seed in 0..200 {
        let u = random_element((seed % 9) as u32, seed % 5, seed).unwrap();
        let text = element_to_json(&u).to_string();
        assert_eq!(parse_element(&text).unwrap(), Element::Odometer(u));
    }
    for n in 1..=5 {
        let u = counterexample_element(n).unwrap();
        let text = tower_element_to_json(&u).to_string();
        assert_eq!(parse_element(&text).unwrap(), Element::Tower(u));
    }
}

#[test]
fn random_is_seeded_and_parses_back() {
    let a = json_out(&["random", "--depth", "3", "--seed", "9"]);
    let b = json_out(&["random", "--depth", "3", "--seed", "9"]);
    assert_eq!(a, b);
    let text = a.to_string();
    let twice = json_out(&["inverse", &json_out(&["inverse", &text]).to_string()]);
    assert_eq!(twice, a);
    let default = json_out(&["random"]);
    assert_eq!(default, json_out(&["random", "--seed", "42"]));
}

#[test]
fn escape_family_csv_has_header_and_rows() {
    let o = ergo(&["escape-family", "--max-m", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines[0], "m,depth,measure,integral");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "1,3,1/2^1,3/2^2");
}

#[test]
fn counterexample_csv_is_exact() {
    let o = ergo(&["counterexample", "--max-n", "10", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# mass deficit 1/2^10"));
    assert_eq!(lines.next(), Some("n,d_T,d_TA"));
    assert_eq!(lines.next(), Some("1,1/2^1,1/2^2"));
    assert_eq!(lines.nth(1), Some("3,1/2^1,1/2^4"));
    assert!(!text.contains('.'));

    let one = json_out(&["counterexample", "--n", "1"]);
    assert_eq!(one["shifts"], serde_json::json!([[2, 0, -2, 0]]));
}

#[test]
fn empty_word_in_json() {
    let id = r#"{"system":"dyadic_odometer","depth":0,"cocycle":[0]}"#;
    let v = json_out(&["factor-positive", id]);
    assert_eq!(v["word"], serde_json::json!([]));
    assert_eq!(v["verified"], Value::Bool(true));
}

#[test]
fn factorization_commands() {
    let u = r#"{"system":"dyadic_odometer","depth":1,"cocycle":[2,0]}"#;
    let v = json_out(&["normal-form", u]);
    assert_eq!(v["verified"], Value::Bool(true));
    let last = v["word"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["kind"], "power_of_T");
    assert_eq!(last["exponent"], 1);

    let periodic = r#"{"system":"dyadic_odometer","depth":2,"cocycle":[1,1,-2,0]}"#;
    let v = json_out(&["factor-involutions", periodic]);
    assert_eq!(v["verified"], Value::Bool(true));
    assert_eq!(v["word"].as_array().unwrap().len(), 2);

    let o = ergo(&["factor-involutions", r#"{"system":"dyadic_odometer","depth":0,"cocycle":[1]}"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn set_commands() {
    let v = json_out(&["induce", r#"{"system":"dyadic_odometer","depth":0,"cocycle":[1]}"#, "--set", "1:0"]);
    assert_eq!(v["element"]["cocycle"], serde_json::json!([2, 0]));
    assert_eq!(v["return_time_integral"], "1/2^0");

    let v = json_out(&["ncycle", "--set", r#"{"depth":2,"prefixes":[0,1,2]}"#, "--n", "3"]);
    assert_eq!(v["found"], Value::Bool(true));
    assert_eq!(v["closed_form"], Value::Bool(true));
    let v = json_out(&["ncycle", "--set", "2:0,1,2", "--n", "5"]);
    assert_eq!(v["found"], Value::Bool(false));
    assert_eq!(v["witness"], Value::Null);

    let v = json_out(&["escape", "--set", "2:0,1"]);
    assert_eq!(v["integral"], "1/2^1");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("ergo-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("family.csv");
    let o = ergo(&["escape-family", "--max-m", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ergo(&["ncycle", "--set", "2:0", "--n", "1"]).status.code(), Some(2));
    assert_eq!(ergo(&["index", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(ergo(&["nonsense"]).status.code(), Some(2));
    let mismatch = CliError::Core(ergo_core::Error::CriterionMismatch { m: 3, count: 3 });
    assert_eq!(mismatch.exit_code(), 1);
}

#[test]
fn verify_group_is_deterministic() {
    let a = run_verify(Suite::Group, 42, Scale::Quick);
    assert_eq!(a.exit_status, 0, "{:?}", a.failures);
    assert_eq!(a.cases, 10_000);
    let b = run_verify(Suite::Group, 42, Scale::Quick);
    assert!(a.same_outcome(&b));
    assert!(!a.same_outcome(&run_verify(Suite::Counterexample, 42, Scale::Quick)));
}

#[test]
fn verify_command_reports_and_exits_0() {
    let v = json_out(&["verify", "--suite", "counterexample", "--seed", "3"]);
    assert_eq!(v["exit_status"], 0);
    assert_eq!(v["failures"], serde_json::json!([]));
    assert_eq!(v["suite"], "counterexample");
}
