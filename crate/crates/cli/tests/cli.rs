use std::io::Write;
use std::process::{Command as Process, Stdio};

use fresco_cli::{evaluate, execute, parse_expression, Command, CommandRequest, EvalOptions, Format, Options, Value};
use fresco_core::rational::rat;
use fresco_core::NcElement;
use proptest::prelude::*;

fn fresco(args: &[&str], stdin: Option<&str>) -> (String, String, i32) {
    let mut child = Process::new(env!("CARGO_BIN_EXE_fresco"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

const QUARTIC: &str = r#"{"monomials": [[1,2,0,0],[2,1,0,0],[0,0,1,3],[0,0,3,1]]}"#;

#[test]
fn normalize_binary() {
    assert_eq!(fresco(&["normalize", "b*a"], None), ("a*b - b^2\n".into(), String::new(), 0));
    let (_, err, code) = fresco(&["normalize", "a*"], None);
    assert_eq!(code, 2);
    assert!(err.contains("offset 2"), "{err}");
}

#[test]
fn gm_report_and_stdin() {
    let (out, _, code) = fresco(&["gm", "-"], Some(QUARTIC));
    assert_eq!(code, 0);
    assert!(out.contains("N = 12"));
    assert!(out.contains("(ξ + 7/6)*(ξ + 4/3)"), "{out}");
    assert!(out.contains("(ξ + 3)"));
}

#[test]
fn saturate_cap_exhausted() {
    let p = r#"{"lambdas":["2","1"],"series":[["1","1/2"]]}"#;
    let (_, _, code) = fresco(&["saturate", "--max-iter", "0", p], None);
    assert_eq!(code, 4);
    let (out, _, code) = fresco(&["--format", "json", "saturate", "--max-iter", "0", p], None);
    assert_eq!(code, 4);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "NotStabilized");
}

#[test]
fn file_inputs_run_in_order() {
    let dir = std::env::temp_dir().join(format!("fresco-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    std::fs::write(&a, r#"{"lambdas":["2","1"],"series":[["1"]]}"#).unwrap();
    std::fs::write(&b, r#"{"lambdas":["7/10"]}"#).unwrap();
    let (out, _, code) = fresco(&["--format", "json", "from-pi", a.to_str().unwrap(), b.to_str().unwrap()], None);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["bpoly"], "(x + 1)^2");
    assert_eq!(v[1]["bpoly"], "(x + 7/10)");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn json_output_is_deterministic() {
    let req = CommandRequest {
        command: Command::Gm,
        inputs: vec![QUARTIC.into(), QUARTIC.into()],
        options: Options { format: Format::Json, ..Options::default() },
    };
    assert_eq!(execute(&req), execute(&req));
}

#[test]
fn poles_check() {
    let job = r#"{"ledger": {"q": 1, "cap": 4, "xi_class": "-7/10",
                  "family": {"0": [{"loc": "-7/10", "ord": 1}]}},
                  "check": {"presentation": {"lambdas": ["7/10"]}, "d": 1}}"#;
    let (out, err, code) = fresco(&["poles", job], None);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("holds = true, witnesses = [1]"), "{out}");
    let bad = job.replace(r#"["7/10"]"#, r#"["1/2"]"#);
    assert_eq!(fresco(&["poles", &bad], None).2, 3);
}

fn element() -> impl Strategy<Value = NcElement> {
    prop::collection::vec(((0u32..4, -3i32..4), (-9i64..=9, 1i64..=5)), 0..6).prop_map(|terms| {
        NcElement::from_terms(terms.into_iter().map(|(k, (n, d))| (k, rat(n, d)))).into_laurent()
    })
}

proptest! {
    #[test]
    fn render_parse_round_trip(e in element()) {
        let text = e.to_string();
        let opts = EvalOptions { laurent: true, laurent_window: 16, precision: 8 };
        let back = evaluate(&parse_expression(&text).unwrap(), &opts).unwrap();
        prop_assert_eq!(back, Value::Exact(e), "{}", text);
    }
}
