//! Runs the golden corpus through the CLI entry point.

use std::path::PathBuf;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../fbc/corpus")
}

#[test]
fn corpus_matches_goldens() {
    let dir = corpus_dir();
    let out = fbc_cli::run(["corpus", dir.to_str().unwrap()], &dir);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains(", 0 failed"));
}

#[test]
fn runs_are_deterministic() {
    let dir = corpus_dir();
    for line in [
        "classify three_edges.fbc",
        "pi1 loop_pendant.fbc",
        "deck example_covering.cover",
    ] {
        let args = fbc_cli::split_args(line);
        let a = fbc_cli::run(args.iter().map(String::as_str), &dir);
        let b = fbc_cli::run(args.iter().map(String::as_str), &dir);
        assert_eq!(fbc_cli::render_case(&a), fbc_cli::render_case(&b));
    }
}

#[test]
fn usage_errors_exit_two() {
    let dir = corpus_dir();
    assert_eq!(fbc_cli::run(["no-such-command"], &dir).code, 2);
    assert_eq!(fbc_cli::run(["classify", "missing.fbc"], &dir).code, 1);
}
