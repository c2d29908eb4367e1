use std::io::Write;
use std::process::{Command, Output, Stdio};

use kdv_cli::emit::{decode_expfun, decode_ratfun};
use kdv_core::ring::parse_ratfun;
use serde_json::Value;

fn kdv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdv")).args(args).env_remove("KDV_CONFIG").output().expect("binary runs")
}

fn kdv_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kdv"))
        .args(args)
        .env_remove("KDV_CONFIG")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_of<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(&format!("{key} = "))).unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

#[test]
fn theta_five_adjusted() {
    let o = kdv(&["theta", "--r", "1", "--n", "5", "--adjusted"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value_of(&stdout(&o), "theta_5"), "x^15 + 105*x^12*t + 1575*x^9*t^2 + 33075*x^6*t^3 - 992250*x^3*t^4 - 1488375*t^5");
}

#[test]
fn symbolic_thetas() {
    let o = kdv(&["theta", "--n", "3", "--symbolic", "--all"]);
    let out = stdout(&o);
    assert_eq!(value_of(&out, "theta_2"), "x^3 + tau_2");
    assert_eq!(parse_ratfun(value_of(&out, "theta_3")).unwrap(), parse_ratfun("x^6 + 5*tau_2*x^3 + tau_3*x - 5*tau_2^2").unwrap());
}

#[test]
fn fundmat_latex_row() {
    let o = kdv(&["fundmat", "--r", "1", "--n", "2", "--energy", "nonzero", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("\\begin{align*}"));
    assert!(out.contains("B^{(1)}_{2,\\lambda}"));
    assert!(out.contains("\\frac{x^{3} \\lambda^{2} - 3 x^{2} \\lambda + 3 \\lambda^{2} t + 3 x}{x^{3} + 3 t}"));
    assert!(out.contains("\\det &= -2 \\lambda^{5}"));
}

#[test]
fn verify_all_pass() {
    let o = kdv(&["verify", "--r", "1", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().skip(1).all(|l| l.split_whitespace().any(|w| w == "pass")));
    let json: Value = serde_json::from_slice(&kdv(&["verify", "--r", "1", "--n", "2", "--format", "json"]).stdout).unwrap();
    let rows = json["checks"].as_array().unwrap();
    assert!(!rows.is_empty() && rows.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn plain_output_round_trips() {
    for args in [&["potential", "--n", "3"][..], &["qpoly", "--n", "2", "--bilinear"], &["theta", "--n", "4", "--symbolic"]] {
        let out = stdout(&kdv(args));
        for line in out.lines() {
            let (_, text) = line.split_once(" = ").unwrap();
            let q = parse_ratfun(text).unwrap();
            assert_eq!(q.to_string(), text);
        }
    }
}

#[test]
fn json_round_trips() {
    let plain = stdout(&kdv(&["potential", "--n", "2"]));
    let json: Value = serde_json::from_slice(&kdv(&["potential", "--n", "2", "--format", "json"]).stdout).unwrap();
    assert_eq!(decode_ratfun(&json["u_2"]).unwrap(), parse_ratfun(value_of(&plain, "u_2")).unwrap());
    assert_eq!(decode_ratfun(&json["u_2"]).unwrap(), parse_ratfun("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2").unwrap());
    let json: Value = serde_json::from_slice(&kdv(&["fundmat", "--n", "1", "--format", "json"]).stdout).unwrap();
    let a11 = decode_expfun(&json["B_1_lambda"][0][0]).unwrap();
    assert_eq!(a11.coeff(1), parse_ratfun("(lambda*x - 1)/x").unwrap());
    let again = serde_json::to_string(&kdv_cli::emit::expfun_json(&a11)).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&again).unwrap(), json["B_1_lambda"][0][0]);
}

#[test]
fn exit_codes() {
    assert_eq!(kdv(&["theta", "--bogus"]).status.code(), Some(1));
    assert_eq!(kdv(&[]).status.code(), Some(1));
    assert_eq!(kdv(&["--help"]).status.code(), Some(0));
    assert_eq!(kdv(&["spectral", "--u", "1/(x - x)", "--n", "1"]).status.code(), Some(2));
    assert_eq!(kdv(&["spectral", "--u", "y", "--n", "1"]).status.code(), Some(2));
    assert_eq!(kdv(&["spectral", "--u", "6/x^2", "--n", "1"]).status.code(), Some(3));
    assert_eq!(kdv(&["spectral", "--u", "6/x^2 + t", "--n", "2"]).status.code(), Some(3));
    assert_eq!(kdv(&["darboux", "--u", "0", "--seed", "x^2"]).status.code(), Some(3));
    // Wrong tau values for level 1 make the kdv rows fail.
    let o = kdv(&["verify", "--n", "2", "--taus", "5*t,0"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("fail"));
}

#[test]
fn stdin_expressions() {
    let o = kdv_stdin(&["spectral", "--u", "-", "--n", "2", "--point", "0,0"], "6/x^2\n");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value_of(&out, "R"), "E^5");
    assert_eq!(value_of(&out, "class"), "affine_singular");
    assert_eq!(value_of(&out, "R_transformed"), "E^3");
}

#[test]
fn darboux_and_green() {
    let out = stdout(&kdv(&["darboux", "--u", "6/x^2", "--seed", "x^3"]));
    assert_eq!(value_of(&out, "u_tilde"), "12/x^2");
    assert_eq!(value_of(&out, "E0"), "0");
    let o = kdv(&["green", "--u", "6/x^2", "--n", "2", "--point", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse_ratfun(value_of(&stdout(&o), "F_transformed")).unwrap(), parse_ratfun("E + 1/x^2").unwrap());
    let o = kdv(&["green", "--u", "6/x^2", "--n", "2", "--point", "inf", "--homogenized"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn galois_classes() {
    assert_eq!(value_of(&stdout(&kdv(&["galois", "--n", "2", "--energy", "zero"])), "group"), "trivial");
    assert_eq!(value_of(&stdout(&kdv(&["galois", "--n", "2", "--lambda", "1"])), "group"), "multiplicative_torus");
    let o = kdv(&["galois", "--n", "2", "--invariance"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value_of(&stdout(&o), "constant"), "true");
}

#[test]
fn sessions_from_config() {
    let dir = std::env::temp_dir().join(format!("kdv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kdv.toml");
    std::fs::write(&path, "[default]\nn = 1\n\n[user]\nn = 2\ntau_mode = \"user\"\ntau_values = [\"3*t\", \"0\"]\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(value_of(&stdout(&kdv(&["theta", "--config", p])), "theta_1"), "x");
    assert_eq!(value_of(&stdout(&kdv(&["theta", "--config", p, "--session", "user"])), "theta_2"), "x^3 + 3*t");
    let o = Command::new(env!("CARGO_BIN_EXE_kdv")).args(["theta", "--session", "user", "--n", "2"]).env("KDV_CONFIG", &path).output().unwrap();
    assert_eq!(value_of(&stdout(&o), "theta_2"), "x^3 + 3*t");
    assert_eq!(kdv(&["theta", "--config", p, "--session", "nope"]).status.code(), Some(2));
    assert_eq!(kdv(&["theta", "--n", "3", "--taus", "3*t"]).status.code(), Some(3));
    let report = dir.join("report.json");
    let o = kdv(&["report", "--config", p, "--session", "user", "--output", report.to_str().unwrap(), "--provenance"]);
    assert_eq!(o.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved["galois_B_lambda"], "multiplicative_torus");
    assert!(saved["provenance"].as_array().is_some_and(|p| !p.is_empty()));
    std::fs::remove_dir_all(&dir).unwrap();
}
