mod common;

use std::process::{Command, Output};

use serde_json::Value;

use common::data;

fn relhyp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relhyp")).args(args).output().expect("binary runs")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON artifact")
}

#[test]
fn area_reports_exact_value() {
    let v = json(&relhyp(&["area", "--input", &path("z-example.json"), "--loop", "h1^2 h2^2"]));
    assert_eq!(v["result"]["area"], 2);
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(v["tool"], "relhyp");
    assert_eq!(v["version"], relhyp::VERSION);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["config"]["loop_word"], "h1^2 h2^2");
}

#[test]
fn window_lp_rows() {
    let out = relhyp(&["window-lp", "--input", &path("z-example.json"), "--radii", "4,8"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["radius,norm,interior_cells", "4,1.000000,4", "8,2.000000,8"]);
    assert!(text.lines().next().unwrap().contains("seed=0"));
}

#[test]
fn exit_codes() {
    assert_eq!(relhyp(&["parse", "--input", &path("malformed.json")]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("relhyp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad_oracle = dir.join("bad-oracle.json");
    let text = std::fs::read_to_string(data("z-example.json")).unwrap().replace("[[-1]]", "[[1]]");
    std::fs::write(&bad_oracle, text).unwrap();
    let bad = bad_oracle.to_string_lossy().into_owned();
    assert_eq!(relhyp(&["parse", "--input", &bad]).status.code(), Some(3));
    let capped = relhyp(&["ball", "--input", &path("f2.json"), "--radius", "4", "--budget", "10"]);
    assert_eq!(capped.status.code(), Some(4));
    let literal = relhyp(&["area", "--input", &path("z-example.json"), "--loop", "h1^0"]);
    assert_eq!(literal.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("relhyp-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("ball.csv");
    let args = ["ball", "--input", &path("z2.json"), "--radius", "2", "--format", "csv"];
    let stdout = relhyp(&args).stdout;
    let mut with_file: Vec<&str> = args.to_vec();
    let f = file.to_string_lossy().into_owned();
    with_file.extend(["--output", f.as_str()]);
    assert!(relhyp(&with_file).status.success());
    assert_eq!(std::fs::read(&file).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = [
        "flare", "--input", &path("f2.json"), "--action", &path("fibonacci-action.json"), "--lambda", "1.2", "--n", "2",
        "--m", "3", "--radius", "5",
    ];
    let a = relhyp(&args).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_relhyp")).args(args).env("RELHYP_THREADS", "1").output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn corridor_example() {
    let v = json(&relhyp(&[
        "corridor", "--input", &path("f2.json"), "--action", &path("fibonacci-action.json"), "--word", "x", "--radius",
        "1", "--pair-u=-1", "--pair-v=1",
    ]));
    let entries = v["result"]["entries"].as_array().unwrap();
    let lengths: Vec<(String, u64)> = entries
        .iter()
        .map(|e| (e["a"].as_str().unwrap().to_string(), e["length"]["value"].as_u64().unwrap()))
        .collect();
    assert_eq!(lengths, [("1".to_string(), 1), ("a1".to_string(), 1), ("a1^-1".to_string(), 2)]);
    assert_eq!(v["result"]["pairing"]["lhs"], 3.0);
    assert_eq!(v["result"]["pairing"]["equal"], true);
}

#[test]
fn identity_action_flare_is_violated() {
    let v = json(&relhyp(&[
        "flare", "--input", &path("f2.json"), "--action", &path("identity-action.json"), "--lambda", "1.1", "--n", "1",
        "--m", "2", "--radius", "3",
    ]));
    assert_eq!(v["result"]["verdict"], "violated");
    assert!(!v["result"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn dehn_profile_escalation_csv() {
    let out = relhyp(&["dehn-profile", "--input", &path("z-example.json"), "--n-max", "2", "--escalate", "2,4,8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("8,2,8,"));
    assert!(text.contains("# escalation unbounded=true"));
}

fn csv_rows(out: &Output) -> Vec<String> {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8_lossy(&out.stdout).lines().filter(|l| !l.starts_with('#')).map(str::to_owned).collect()
}

#[test]
fn csv_for_scalar_commands() {
    let area = relhyp(&["area", "--input", &path("z-example.json"), "--loop", "h1^2 h2^2", "--format", "csv"]);
    assert_eq!(csv_rows(&area), ["loop,area,exact,pruned,explored", "\"h1^2 h2^2\",2,true,false,"]);

    let length = relhyp(&["length", "--input", &path("f2.json"), "--word", "x y x^-1", "--format", "csv"]);
    assert_eq!(csv_rows(&length)[1], "\"x y x^-1\",3,3,true,0,\"x y x^-1\"");

    let flare = relhyp(&[
        "flare", "--input", &path("f2.json"), "--action", &path("fibonacci-action.json"),
        "--lambda", "1.2", "--n", "2", "--m", "4", "--radius", "6", "--format", "csv",
    ]);
    assert_eq!(csv_rows(&flare).len(), 3);
    assert!(String::from_utf8_lossy(&flare.stdout).contains("# verdict=violated"));

    let parse = relhyp(&["parse", "--input", &path("f2.json"), "--format", "csv"]);
    assert_eq!(parse.status.code(), Some(2));
}
