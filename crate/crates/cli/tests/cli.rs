use std::process::{Command, Output};

use serde_json::Value;

fn kloos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kloos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classical_sum_at_zero_is_totient() {
    let out = kloos(&["sum", "classical", "--m", "0", "--n", "0", "--q", "12"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("4"));
}

#[test]
fn classical_sum_json() {
    let out = kloos(&[
        "sum",
        "classical",
        "--m",
        "-1",
        "--n",
        "3",
        "--q",
        "7",
        "--json",
    ]);
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["kind"], "classical_kloosterman");
    assert_eq!(v["params"]["m"], -1);
    assert!(v["approx"][1].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn squeezed_ring_is_not_frobenius() {
    let out = kloos(&["ring", "info", "--ring", "sqz(2,2)"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Frobenius: false"));
    let out = kloos(&["ring", "info", "--ring", "Z/25", "--json"]);
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["frobenius"], true);
    assert_eq!(v["units"], 20);
}

#[test]
fn verify_all_on_z25() {
    let out = kloos(&["verify", "--all", "--ring", "Z/25", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(reports.len(), 29);
    assert!(reports.iter().all(|r| r["status"] != "fail"));
    let c15 = reports.iter().find(|r| r["check"] == "C15").unwrap();
    assert_eq!(c15["expected"], 37500);
}

#[test]
fn verify_output_is_byte_identical() {
    let args = ["verify", "--all", "--ring", "Z/4 x GF(3)", "--json"];
    assert_eq!(kloos(&args).stdout, kloos(&args).stdout);
}

#[test]
fn twist_selection() {
    let out = kloos(&[
        "verify",
        "--check",
        "C12",
        "--ring",
        "Z/9",
        "--twist",
        "quadratic",
        "--json",
    ]);
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["actual"], 54);
    assert_eq!(v["bindings"]["tau"], 1);
    let out = kloos(&[
        "verify", "--check", "C12", "--ring", "Z/9", "--twist", "index:2", "--json",
    ]);
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["actual"], 27);
}

#[test]
fn exit_codes() {
    assert_eq!(
        kloos(&["ring", "info", "--ring", "Z/"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kloos(&["verify", "--check", "C99", "--ring", "Z/5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kloos(&["verify", "--check", "C01", "--ring", "Z/5", "--twist", "index:9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kloos(&["ring", "info", "--ring", "Z/5000"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kloos(&["--max-size", "8", "ring", "info", "--ring", "Z/9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kloos(&["sum", "kloosterman", "--ring", "sqz(2,2)"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(kloos(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn list_checks_are_all_runnable() {
    let out = kloos(&["list-checks", "--json"]);
    let ids: Vec<String> = stdout(&out)
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["id"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(ids.len(), 29);
    for id in ids {
        let ran = ["Z/12", "Z/25", "GF(7)", "Z/4 x GF(3)"].iter().any(|ring| {
            let out = kloos(&["verify", "--check", &id, "--ring", ring, "--json"]);
            serde_json::from_str::<Value>(stdout(&out).trim()).unwrap()["status"] == "pass"
        });
        assert!(ran, "{id}");
    }
}

#[test]
fn characters_listing() {
    let out = kloos(&[
        "ring",
        "characters",
        "--ring",
        "Z/9",
        "--kind",
        "multiplicative",
    ]);
    assert_eq!(stdout(&out).lines().count(), 6);
    let out = kloos(&[
        "ring",
        "characters",
        "--ring",
        "GF(4)",
        "--kind",
        "additive",
    ]);
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn gauss_and_jacobi() {
    // |G(σ)|² = 5 on GF(5); G(σ) = √5 there
    let out = kloos(&[
        "sum",
        "gauss",
        "--ring",
        "GF(5)",
        "--chi",
        "quadratic",
        "--json",
    ]);
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["approx"][0].as_f64().unwrap() - 5f64.sqrt()).abs() < 1e-9);
    let out = kloos(&[
        "sum", "jacobi", "--ring", "GF(5)", "--chi", "trivial", "--eta", "trivial",
    ]);
    assert_eq!(stdout(&out).lines().next(), Some("3"));
}
