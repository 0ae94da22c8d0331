use std::process::{Command, Output};

use serde_json::Value;
use zonal_cli::report::Report;

fn zonal(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonal")).args(args.split_whitespace()).output().expect("binary runs")
}

fn json(args: &str) -> (Report, String, i32) {
    let out = zonal(&format!("{args} --format json"));
    let text = String::from_utf8(out.stdout).unwrap();
    let report = Report::from_json(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (report, text, out.status.code().unwrap())
}

fn computed(r: &Report, id: &str) -> Value {
    r.checks.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("no check {id}")).computed.clone()
}

#[test]
fn verify_constant_examples() {
    let (r, _, code) = json("verify-constant --n 1 --k 0.5 --nodes 64");
    assert_eq!(code, 0);
    let v = computed(&r, "constant").as_f64().unwrap();
    assert!((v - std::f64::consts::PI).abs() < 1e-6 * std::f64::consts::PI);
    let (r, _, code) = json("verify-constant --n 2 --k 1 --nodes 32");
    assert_eq!(code, 0);
    assert!((computed(&r, "constant").as_f64().unwrap() - 0.5).abs() < 0.5e-4);
}

#[test]
fn z_configuration_does_not_change_the_value() {
    let (a, _, _) = json("verify-constant --n 1 --k 1 --z 1,2");
    let (b, _, _) = json("verify-constant --n 1 --k 1 --z 2,7");
    assert_eq!(computed(&a, "constant"), computed(&b, "constant"));
}

#[test]
fn braid_examples() {
    let (r, _, code) = json("braid --n 1");
    assert_eq!(code, 0);
    assert_eq!(computed(&r, "eigenvalue slot=1"), Value::String("-1".into()));
    let (r, _, code) = json("braid --n 2 --slot 2");
    assert_eq!(code, 0);
    assert_eq!(r.checks.len(), 2);
    let (r, _, code) = json("braid --n 2 --check-strings");
    assert_eq!(code, 0);
    assert_eq!(r.checks.iter().filter(|c| c.id.starts_with("string-pair")).count(), 9);
}

#[test]
fn wrong_convention_fails_with_residuals() {
    let (r, _, code) = json("braid --n 1 --triangularity raise-second");
    assert_eq!(code, 1);
    assert!(computed(&r, "eigenvalue slot=1").as_str().unwrap().starts_with("error:"));
}

#[test]
fn encode_term_counts() {
    for (n, terms) in [(1, 2), (2, 6), (3, 24)] {
        let (r, _, code) = json(&format!("encode --n {n}"));
        assert_eq!(code, 0, "n={n}");
        assert_eq!(computed(&r, "terms"), Value::String(terms.to_string()));
    }
}

#[test]
fn diagrams_csv_rows() {
    let out = zonal("diagrams --n 2 --format csv");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    let lengths: Vec<&str> = rows.iter().map(|r| r.split(',').nth(2).unwrap()).collect();
    assert_eq!(lengths, ["0", "1"]);
    let out = zonal("diagrams --n 4 --format csv");
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 25);
}

#[test]
fn asymptotic_examples() {
    let (r, _, code) = json("asymptotic --s 2 --k 0.5 --pairing 1");
    assert_eq!(code, 0);
    assert!((computed(&r, "coefficient").as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert_eq!(json("asymptotic --s 3 --k 0.5").2, 0);
    let (r, _, code) = json("asymptotic --s 2 --check-singular");
    assert_eq!((code, r.checks.len()), (0, 1));
}

#[test]
fn gamma_pole_is_a_usage_error() {
    let out = zonal("asymptotic --s 2 --k 0.5 --pairing -2");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("Gamma pole"));
}

#[test]
fn gram_counts() {
    let (r, _, code) = json("gram --n 3");
    assert_eq!(code, 0);
    assert_eq!(computed(&r, "dim L(eta_1)"), Value::String("4".into()));
}

#[test]
fn exit_codes() {
    assert_eq!(zonal("verify-constant --n 4").status.code(), Some(2));
    assert_eq!(zonal("diagrams --n 9").status.code(), Some(2));
    assert_eq!(zonal("asymptotic --s 4").status.code(), Some(2));
    assert_eq!(zonal("no-such-command").status.code(), Some(2));
    assert_eq!(zonal("verify-constant --format yaml").status.code(), Some(2));
    assert_eq!(zonal("verify-beta --k 1.5").status.code(), Some(2));
    assert_eq!(zonal("braid --n 2 --slot 3").status.code(), Some(2));
}

#[test]
fn json_round_trips_and_is_deterministic() {
    for args in [
        "verify-constant --n 2 --k 0.5 --scheme monte-carlo --samples 20000 --seed 7",
        "verify-beta",
        "encode --n 2",
        "diagrams --n 3",
        "gram --n 2",
    ] {
        let (r, text, _) = json(args);
        assert_eq!(r.to_json(), text, "{args}");
        let (mut again, _, _) = json(args);
        let mut first = r.clone();
        first.runtime_ms = 0;
        again.runtime_ms = 0;
        assert_eq!(first, again, "{args}");
    }
}

#[test]
fn out_path_receives_the_report() {
    let dir = std::env::temp_dir().join(format!("zonal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("beta.csv");
    let out = zonal(&format!("verify-beta --format csv --out {}", path.display()));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("k,numeric,closed_form,abs_err"));
    std::fs::remove_dir_all(dir).unwrap();
}
