use std::path::PathBuf;
use std::process::Command;

use arith_core::codec::SymbolTable;
use serde_json::Value;

fn corpus(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    root.to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    report: Value,
    stdout: String,
}

fn arith(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_arith"));
    cmd.args(args);
    for var in [
        "ARITH_SYSTEM",
        "ARITH_TABLE",
        "ARITH_DEPTH",
        "ARITH_NUMERAL_CAP",
        "ARITH_WITNESS_BOUND",
        "ARITH_SAMPLE_BOUND",
        "ARITH_FORMAT",
        "ARITH_SEED",
        "ARITH_INJECT_FAULT",
    ] {
        cmd.env_remove(var);
    }
    cmd.envs(env.iter().copied());
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap_or(-1), report, stdout }
}

fn without_duration(mut v: Value) -> String {
    v.as_object_mut().unwrap().remove("duration_ms");
    serde_json::to_string(&v).unwrap()
}

#[test]
fn exit_code_matrix() {
    let generalization = corpus("pa_generalization.proof");
    let cases: Vec<(Vec<&str>, Vec<(&str, &str)>, i32)> = vec![
        (vec!["parse", "(Ax)|=PP((x+0)=x)"], vec![], 0),
        (vec!["--system", "pp", "check-proof", &generalization], vec![], 1),
        (vec!["parse", "((0="], vec![], 2),
        (vec!["decode", "10"], vec![], 3),
        (vec!["build-gus", "--sample-bound", "3"], vec![("ARITH_INJECT_FAULT", "diagonal")], 4),
        (vec!["verify-representation", "factorial", "--args", "20", "--expected", "1"], vec![], 5),
    ];
    for (args, env, want) in cases {
        let run = arith(&args, &env);
        assert_eq!(run.code, want, "{args:?}\n{}", run.stdout);
        assert_eq!(run.report["exit_code"], want);
    }
}

#[test]
fn parse_reports() {
    let r = arith(&["parse", "(Ax)|=PP((x+0)=x)"], &[]).report;
    assert_eq!(r["result"]["wff"], true);
    assert_eq!(r["result"]["pp_wff"], true);
    assert_eq!(r["result"]["free_vars"], serde_json::json!([]));
    let r = arith(&["--system", "pp", "parse", "(Ax)((x+0)=x)"], &[]).report;
    assert_eq!(r["result"]["pp_wff"], false);
}

#[test]
fn encode_decode_and_proofs() {
    let r = arith(&["encode", "(0=0)"], &[]).report;
    assert_eq!(r["result"]["code"], "27814222777430736281250");
    let back = arith(&["decode", "27814222777430736281250"], &[]).report;
    assert_eq!(back["result"]["formula"], "(0=0)");

    let r = arith(&["--system", "pa", "encode", "--proof", &corpus("pa_generalization.proof")], &[]).report;
    let code = r["result"]["code"].as_str().unwrap().to_string();
    let back = arith(&["decode", "--proof", &code], &[]).report;
    assert_eq!(back["result"]["lines"], serde_json::json!(["((x+0)=x)", "(Ax)((x+0)=x)"]));

    assert_eq!(arith(&["check-proof", &corpus("pp_axiom.proof")], &[]).code, 0);
    assert_eq!(arith(&["--system", "pa", "check-proof", &corpus("pa_generalization.proof")], &[]).code, 0);
    assert_eq!(arith(&["--system", "pp+", "check-proof", &corpus("pp_plus_constructive.proof")], &[]).code, 0);
    let r = arith(&["--system", "pp", "check-proof", &corpus("pp_plus_constructive.proof")], &[]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["result"]["line_diagnostics"][1]["reason"], "rule not enabled");
}

#[test]
fn gus_matches_codec() {
    let gus = arith(&["build-gus", "--sample-bound", "50"], &[]).report;
    assert_eq!(gus["exit_code"], 0);
    let p = gus["result"]["diagonal"]["p"].as_str().unwrap().to_string();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.tsv");
    let mut table = SymbolTable::new();
    table.register("Q").unwrap();
    table.save(&path).unwrap();
    let path = path.to_str().unwrap();
    let enc = arith(&["--table", path, "encode", "(Ay)|=PP(~Q(x,y))"], &[]);
    assert_eq!(enc.report["result"]["code"], p.as_str());
    // a table that already has Q is used as is
    let again = arith(&["--table", path, "build-gus", "--sample-bound", "5"], &[]).report;
    assert_eq!(again["result"]["diagonal"]["p"], p.as_str());
    assert_eq!(gus["result"]["case_report"]["ppr3"], "disabled");
    let plus = arith(&["--system", "pp+", "build-gus", "--sample-bound", "5"], &[]).report;
    assert_eq!(plus["result"]["case_report"]["ppr3"], "enabled");
    assert_eq!(plus["result"]["case_report"]["gus_provable"], "not decided at this bound");
}

#[test]
fn flags_override_environment() {
    let r = arith(&["parse", "(0=0)"], &[("ARITH_SYSTEM", "pa"), ("ARITH_DEPTH", "2")]).report;
    assert_eq!(r["config"]["system"], "PA");
    assert_eq!(r["config"]["depth"], 2);
    let r = arith(&["--system", "pp+", "parse", "(0=0)"], &[("ARITH_SYSTEM", "pa")]).report;
    assert_eq!(r["config"]["system"], "PP+");
    let r = arith(&["parse", "(0=0)"], &[]).report;
    assert_eq!(r["config"]["system"], "PP");
    assert_eq!(r["config"]["depth"], 4);
}

#[test]
fn markdown_renders_the_same_payload() {
    let run = arith(&["--format", "markdown", "parse", "(0=0)"], &[]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("# arith parse"));
    assert!(run.stdout.contains("- **canonical**: (0=0)"));
}

#[test]
fn reports_are_deterministic() {
    let seeds = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(seeds.path(), "# seeds\n(((0+1)+0)=(0+1))\n").unwrap();
    let seed_path = seeds.path().to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = [
        vec!["parse", "(Ax)|=PP((x+0)=x)"],
        vec!["encode", "(0=0)"],
        vec!["decode", "18"],
        vec!["check-proof", &corpus("pp_induction.proof")],
        vec!["--depth", "2", "diff-systems", &seed_path],
        vec!["--depth", "2", "--seed", "5", "diff-systems"],
        vec!["build-gus", "--sample-bound", "100"],
        vec!["verify-representation", "add", "--args", "2,3", "--expected", "6"],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    for args in commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (arith(&args, &[]), arith(&args, &[]));
        assert_eq!(a.code, b.code);
        assert_eq!(without_duration(a.report), without_duration(b.report), "{args:?}");
    }
}
