//! The command-line front end, driven in-process through `cli::run`.

use std::fs;
use std::path::{Path, PathBuf};

use creole_tag::cli::{self, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("creole-tag").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn fixture(id: &str) -> String {
    cli::default_fixtures_dir()
        .join(format!("{}.graph.json", id))
        .to_string_lossy()
        .into_owned()
}

fn copy_fixtures(to: &Path) -> PathBuf {
    for e in fs::read_dir(cli::default_fixtures_dir()).unwrap() {
        let e = e.unwrap();
        fs::copy(e.path(), to.join(e.file_name())).unwrap();
    }
    to.to_path_buf()
}

// ── generate ──

#[test]
fn generate_text() {
    let r = run(&["generate", &fixture("pye-ba")]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "Pyè ba Wobè an bel liv\n"));
    assert!(r.err.is_empty());
}

#[test]
fn generate_inline() {
    let g = r#"{"nodes":[{"id":"c","key":"child","attrs":{"determination":"defini"}}],"relations":[]}"#;
    let r = run(&["generate", "--inline", g]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "timanmay-la\n"));
}

#[test]
fn generation_error_is_a_failure() {
    let r = run(&["generate", &fixture("ka-ni")]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.out.is_empty());
    assert!(r.err.contains("AspectOnState"), "{}", r.err);
}

#[test]
fn input_errors() {
    assert_eq!(run(&["generate", "/no/such/graph.json"]).code, EXIT_INPUT);
    assert_eq!(run(&["generate", "--inline", "{bad"]).code, EXIT_INPUT);
    assert_eq!(run(&[]).code, EXIT_INPUT);
    assert_eq!(run(&["generate", "--inline", "{}", &fixture("pote")]).code, EXIT_INPUT);
    assert_eq!(run(&["generate", "--output", "pdf", &fixture("pote")]).code, EXIT_INPUT);
}

#[test]
fn help_and_version_succeed() {
    let r = run(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("check-grammar"));
    assert_eq!(run(&["--version"]).code, EXIT_OK);
}

#[test]
fn generate_report_is_json() {
    let r = run(&["generate", "--output", "report", &fixture("pote")]);
    assert_eq!(r.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["text"], "i pòté an boutèy wonm ba mwen");
    assert!(v["plan"]["strategies"].is_array());
    assert!(v["sentences"][0]["derivation"]["base"].is_string());
}

#[test]
fn generate_dot() {
    let r = run(&["generate", "--output", "dot", &fixture("i-ni")]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("digraph"), "{}", r.out);
}

// ── check-grammar and --grammar ──

#[test]
fn check_shipped_grammar() {
    let r = run(&["check-grammar"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("shipped grammar: ok ("), "{}", r.out);
}

#[test]
fn check_bad_grammar() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.grammar");
    // auxiliary tree with no foot
    fs::write(
        &bad,
        "FEATURES\nharm: a la\nTREES\nx auxiliary (Nbar (Adj \"x\"))\n",
    )
    .unwrap();
    let r = run(&["check-grammar", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.out.contains("0 foot nodes"), "{}", r.out);
    assert_eq!(run(&["check-grammar", "/no/such.grammar"]).code, EXIT_INPUT);
}

#[test]
fn custom_grammar_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.grammar");
    let text = creole_tag::grammar::SHIPPED_GRAMMAR.replace("timanmay  N", "timoun    N");
    fs::write(&path, text).unwrap();
    let g = r#"{"nodes":[{"id":"c","key":"child","attrs":{"determination":"indefini"}}],"relations":[]}"#;
    let r = run(&["--grammar", path.to_str().unwrap(), "generate", "--inline", g]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "an timoun\n"), "{}", r.err);
    assert_eq!(run(&["--grammar", "/no/such.grammar", "generate", "--inline", g]).code, EXIT_INPUT);
}

// ── demo ──

#[test]
fn demo_matches_golden() {
    let r = run(&["demo"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("an-timanmay\tan timanmay\n"));
    assert!(r.out.contains("pye-ba\tPyè ba Wobè an bel liv\n"));
    assert!(r.out.contains("ka-ni\t!AspectOnState"), "{}", r.out);
}

#[test]
fn demo_reports_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let fx = copy_fixtures(dir.path());
    let golden = fx.join("golden.tsv");
    let text = fs::read_to_string(&golden).unwrap().replace("Pyè ba Wobè an bel liv", "Pyè ba an bel liv Wobè");
    fs::write(&golden, text).unwrap();
    let r = run(&["demo", "--fixtures", fx.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("MISMATCH") && r.err.contains("pye-ba"), "{}", r.err);
}

#[test]
fn demo_reports_missing_golden_line() {
    let dir = tempfile::tempdir().unwrap();
    let fx = copy_fixtures(dir.path());
    let golden = fx.join("golden.tsv");
    let text: String = fs::read_to_string(&golden)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("pote\t"))
        .map(|l| format!("{}\n", l))
        .collect();
    fs::write(&golden, text).unwrap();
    let r = run(&["demo", "--fixtures", fx.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("MISSING"), "{}", r.err);
}

#[test]
fn demo_without_fixtures_dir() {
    assert_eq!(run(&["demo", "--fixtures", "/no/such/dir"]).code, EXIT_INPUT);
}

// ── derivation ──

#[test]
fn derivation_dot_shows_saturated_clause() {
    let r = run(&["derivation", &fixture("pote")]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("digraph"));
    assert!(r.out.contains("sature=plus"), "{}", r.out);
}

#[test]
fn derivation_of_an_error_prints_nothing() {
    let r = run(&["derivation", &fixture("ka-ni")]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.out.is_empty());
}

#[test]
fn derivation_report_is_a_provenance_table() {
    let r = run(&["derivation", "--output", "report", &fixture("pye-ba")]);
    assert_eq!(r.code, EXIT_OK);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "sentence\ttoken\torigin\taddress");
    assert_eq!(lines.len(), 7);
    assert!(lines.contains(&"1\tan\tdet-indef\t1.2.0.0"));
}
