use serde_json::Value;
use superfock_core::cli::run_args;

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["superfock"];
    argv.extend_from_slice(args);
    let out = run_args(argv);
    (out.code, out.output)
}

#[test]
fn delta_k2_two_terms() {
    let (code, out) = run(&["--json", "delta", "--k", "2", "--terms", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["a"], serde_json::json!(["-1/2", "1/4"]));
    assert!(v["residual"].is_null());
}

#[test]
fn empty_window_passes() {
    let (code, out) = run(&["verify", "algebra", "--name", "virasoro", "--window", "0"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn configuration_errors_exit_2() {
    assert_eq!(run(&["verify", "algebra", "--name", "nope"]).0, 2);
    assert_eq!(run(&["all", "--window", "0"]).0, 2);
    assert_eq!(run(&["delta", "--k", "0", "--terms", "2"]).0, 2);
    assert_eq!(run(&["character", "--space", "vosa", "--trunc", "x"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn skipped_checks_need_allow_skip() {
    // the vacuum-line check needs window 2
    let (code, out) = run(&["verify", "vosa", "--max-weight", "1", "--window", "1"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("SKIP vosa"));
    assert!(out.contains("0 failed, 1 skipped"));
    let (code, _) = run(&["--allow-skip", "verify", "vosa", "--max-weight", "1", "--window", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn character_dump_lists_basis() {
    let (code, out) = run(&["character", "--space", "ns-fermion", "--trunc", "5/2", "--dump"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(lines, ["|0>", "psi(-1/2)|0>", "psi(-3/2)|0>", "psi(-3/2)psi(-1/2)|0>"]);
}

#[test]
fn vosa_character_json() {
    let (code, out) = run(&["--json", "character", "--space", "vosa", "--trunc", "5/2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let got: Vec<(String, String)> = v["series"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["exp"].as_str().unwrap().into(), t["coeff"]["a"].as_str().unwrap().into()))
        .collect();
    let want = [("-1/16", "1"), ("7/16", "1"), ("15/16", "1"), ("23/16", "2"), ("31/16", "3")];
    assert_eq!(got.len(), want.len());
    for ((e, c), (we, wc)) in got.iter().zip(want) {
        assert_eq!((e.as_str(), c.as_str()), (we, wc));
    }
}

#[test]
fn twisted_character_has_integer_dilation() {
    let (code, out) = run(&["--json", "character", "--space", "twisted", "--trunc", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let exps: Vec<&str> = v["series"]["terms"].as_array().unwrap().iter().map(|t| t["exp"].as_str().unwrap()).collect();
    assert_eq!(exps, ["0", "1/2", "1"]);
}

#[test]
fn text_output_is_deterministic() {
    let a = run(&["corollary2", "--trunc", "2"]);
    let b = run(&["corollary2", "--trunc", "2"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}
