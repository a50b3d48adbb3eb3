//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use serde_json::Value;
use superfock_core::algebra::{verify_algebra, CentralTermOverride};
use superfock_core::cli::run_args;
use superfock_core::suites;

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["superfock", "--json"];
    argv.extend_from_slice(args);
    let out = run_args(argv);
    let v = serde_json::from_str(&out.output).unwrap_or(Value::Null);
    (out.code, v)
}

fn check_status(report: &Value, suite: &str, name: &str) -> bool {
    report["suites"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|s| s["suite"] == suite)
        .flat_map(|s| s["checks"].as_array().into_iter().flatten())
        .any(|c| c["name"] == name && c["status"] == "pass")
}

fn suite_clean(report: &Value, suite: &str) -> bool {
    report["summary"]
        .as_array()
        .into_iter()
        .flatten()
        .any(|s| s["suite"] == suite && s["failed"] == 0 && s["skipped"] == 0 && s["passed"].as_u64() > Some(0))
}

fn detail<'a>(report: &'a Value, suite: &str, name: &str) -> &'a Value {
    report["suites"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|s| s["suite"] == suite)
        .flat_map(|s| s["checks"].as_array().into_iter().flatten())
        .find(|c| c["name"] == name)
        .map(|c| &c["detail"])
        .unwrap_or(&Value::Null)
}

fn scalar_is(v: &Value, a: &str, b: &str) -> bool {
    v["a"] == a && v["b"] == b && v["c"] == "0" && v["d"] == "0"
}

fn fraction(n: i64, d: i64) -> String {
    num_rational::Ratio::new(n, d).to_string()
}

fn criterion_1() -> (bool, String) {
    let mut ok = true;
    for k in 1..=12i64 {
        let (code, v) = run_json(&["delta", "--k", &k.to_string(), "--terms", "2"]);
        let want = [fraction(1 - k, 2), fraction(k * k - 1, 12)];
        ok &= code == 0 && v["a"][0] == want[0].as_str() && v["a"][1] == want[1].as_str();
    }
    for k in 1..=6i64 {
        let (code, v) = run_json(&["delta", "--k", &k.to_string(), "--terms", "9", "--verify-order", "10"]);
        ok &= code == 0 && v["residual"]["terms"].as_array().is_some_and(|t| t.is_empty()) && v["residual"]["truncation"] == "11";
    }
    (ok, "a = ((1-K)/2, (K^2-1)/12) for K = 1..12, zero residual through x^10 for K = 1..6".into())
}

fn criterion_2() -> (bool, String) {
    let mut ok = true;
    for name in ["virasoro", "n1-ns", "n1-ramond", "n2-ns", "n2-ramond", "n2-mirror-twisted"] {
        let (code, v) = run_json(&["verify", "algebra", "--name", name, "--window", "4"]);
        ok &= code == 0 && v["violations"].as_array().is_some_and(|x| x.is_empty()) && v["checked"].as_u64() > Some(0);
    }
    let control = verify_algebra(&CentralTermOverride::virasoro_quintic(), 4);
    ok &= !control.passed();
    (ok, "six presentations pass at window 4, corrupted virasoro fails".into())
}

fn criterion_3() -> (bool, String) {
    let r = suites::suite_mirror_map(4);
    let ok = r.checks.len() == 2 && r.passed() && r.count(suites::Status::Skip) == 0;
    (ok, "mirror map is an n2-ns automorphism and an involution at window 4".into())
}

fn criterion_4() -> (bool, String) {
    let (code, v) = run_json(&["verify", "vosa", "--max-weight", "4", "--window", "3"]);
    let ok = code == 0
        && suite_clean(&v, "vosa")
        && check_status(&v, "vosa", "jacobi: generator pairs")
        && check_status(&v, "vosa", "n1-ns relations with C = 3/2")
        && check_status(&v, "vosa", "[G(3/2), G(-3/2)] = 2L(0) + id on the vacuum line")
        && detail(&v, "vosa", "[G(3/2), G(-3/2)] = 2L(0) + id on the vacuum line")["image"] == "|0>";
    (ok, "generator jacobi (window 3, weight <= 4), n1-ns with C = 3/2, vacuum line".into())
}

fn criterion_5() -> (bool, String) {
    let (code, v) = run_json(&["calibrate", "n2"]);
    let cal = &v["calibration"];
    let ok = code == 0
        && suite_clean(&v, "calibrate-n2")
        && cal["report"]["passed"] == true
        && cal["report"]["window"] == 2
        && scalar_is(&cal["c1"], "1", "0")
        && scalar_is(&cal["c2"], "1", "0")
        && scalar_is(&cal["cJ"], "0", "1")
        && check_status(&v, "calibrate-n2", "kappa(tau(1)) = tau(1)")
        && check_status(&v, "calibrate-n2", "kappa(tau(2)) = -tau(2)")
        && check_status(&v, "calibrate-n2", "kappa(J) = -J");
    (ok, "n2-ns holds with C = 3 after calibration; kappa fixes tau(1), negates tau(2) and J".into())
}

fn criterion_6(twisted: &Value) -> (bool, String) {
    let g = detail(twisted, "sigma-twisted", "ground L(0) = 1/16 (fermion) + 0 (boson)");
    let ok = suite_clean(twisted, "sigma-twisted")
        && g["ground"] == "1/16"
        && g["fermion"] == "1/16"
        && g["boson"] == "0"
        && check_status(twisted, "sigma-twisted", "virasoro with C = 3/2")
        && check_status(twisted, "sigma-twisted", "n1-ramond with C = 3/2");
    (ok, "virasoro c = 3/2 and n1-ramond at window 2, ground weight 1/16 + 0".into())
}

fn criterion_7(twisted: &Value) -> (bool, String) {
    let rel = detail(twisted, "mirror-twisted", "mirror-twisted relations with C = 3");
    let ok = suite_clean(twisted, "mirror-twisted")
        && check_status(twisted, "mirror-twisted", "underlying space is M_sigma")
        && check_status(twisted, "mirror-twisted", "equivariance and index lattices")
        && rel["window"] == 2
        && rel["violation_count"] == 0
        && rel["checked"].as_u64() > Some(0);
    (ok, "mirror-twisted table and N=1 sub-tables with C = 3, window 2, weight <= 2 above ground".into())
}

fn criterion_8() -> (bool, String) {
    let (code, v) = run_json(&["corollary2", "--trunc", "3"]);
    let ch = &v["characters"];
    let coeffs: Vec<(String, String)> = ch["dim_q_sigma"]["terms"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|t| (t["exp"].as_str().unwrap_or("").to_string(), t["coeff"]["a"].as_str().unwrap_or("").to_string()))
        .collect();
    let want: Vec<(String, String)> = [("0", "2"), ("1", "4"), ("2", "8"), ("3", "16")]
        .iter()
        .map(|(e, c)| (e.to_string(), c.to_string()))
        .collect();
    let ok = code == 0
        && suite_clean(&v, "corollary2")
        && coeffs == want
        && ch["dim_q2_kappa"] == ch["dim_q_sigma"]
        && ch["dim_q_kappa"]["terms"][0]["exp"] == "0"
        && ch["ground_L0_kappa"] == "1/8"
        && ch["leading_exponent_kappa"] == "0";
    (ok, "dim_q M_sigma = 2 + 4q + 8q^2 + 16q^3 = dim_{q^2} M_kappa, ground 1/8".into())
}

fn criterion_9() -> (bool, String) {
    let args = ["superfock", "--json", "all", "--max-weight", "2", "--window", "2"];
    let a = run_args(args);
    let b = run_args(args);
    let ok = a.code == 0 && b.code == 0 && a.output.as_bytes() == b.output.as_bytes();
    (ok, format!("two runs of all are byte-identical ({} bytes)", a.output.len()))
}

fn timed<F: FnOnce() -> (bool, String)>(limit: Option<Duration>, f: F) -> (bool, String) {
    let start = Instant::now();
    let (ok, what) = f();
    let took = start.elapsed();
    match limit {
        Some(l) if took >= l => (false, format!("{what}; took {:.1}s, limit {}s", took.as_secs_f64(), l.as_secs())),
        Some(l) => (ok, format!("{what} ({:.1}s < {}s)", took.as_secs_f64(), l.as_secs())),
        None => (ok, what),
    }
}

fn main() -> ExitCode {
    let mut results = vec![
        timed(Some(Duration::from_secs(1)), criterion_1),
        timed(Some(Duration::from_secs(10)), criterion_2),
        timed(None, criterion_3),
        timed(Some(Duration::from_secs(60)), criterion_4),
        timed(None, criterion_5),
    ];
    let start = Instant::now();
    let (_, twisted) = run_json(&["verify", "twisted", "--window", "2", "--max-weight", "2"]);
    let twisted_time = start.elapsed();
    results.push(criterion_6(&twisted));
    let (ok7, what7) = criterion_7(&twisted);
    let limit = Duration::from_secs(300);
    results.push((
        ok7 && twisted_time < limit,
        format!("{what7} ({:.1}s < {}s)", twisted_time.as_secs_f64(), limit.as_secs()),
    ));
    results.push(criterion_8());
    results.push(criterion_9());

    let mut failed = 0;
    for (i, (ok, what)) in results.iter().enumerate() {
        println!("criterion {}: {} {what}", i + 1, if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
