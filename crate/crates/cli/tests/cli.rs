use std::path::{Path, PathBuf};
use std::process::Command;

use holboard_cli::{run_script, run_script_file, Session};
use holboard_testkit::examples::polymorphic_example;
use proptest::prelude::*;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn out(s: &mut Session, line: &str) -> String {
    s.execute(line).out
}

#[test]
fn identity_example() {
    let mut s = Session::new();
    out(&mut s, "let t = ^[X:$i]: X");
    assert_eq!(out(&mut s, "type t"), "$i > $i");
    assert_eq!(out(&mut s, "normalize ((^[X:$i]: X) @ c) BASE"), "c\nsteps: 1");
}

#[test]
fn polymorphic_example_matches_the_golden_rendering() {
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/polymorphic_example.txt"),
    )
    .unwrap();
    let lines: Vec<&str> = golden.lines().collect();
    let mut s = Session::new();
    out(&mut s, "parse thf(f_decl, type, f: !>[A:$tType]: ((A > $o) > $o > $o)). thf(t_decl, type, 'T': $o).");
    out(&mut s, "let e = ^[A: $tType, P: A > $o]: f @ A @ (^[X: A]: P @ X) @ 'T'");
    assert_eq!(out(&mut s, "show e nameless"), lines[0]);
    assert_eq!(out(&mut s, "show e spine"), lines[1]);

    assert_eq!(out(&mut s, "type e"), "(!> [T1: $tType]: ((T1 > $o) > $o))");
    let before = s.kernel().stats().terms;
    polymorphic_example(s.kernel());
    assert_eq!(s.kernel().stats().terms, before, "the library construction is already shared");
    out(&mut s, "index e");
    assert_eq!(out(&mut s, "query-head f"), "f 1\u{332} (λX:1\u{332}. 2 X) T");
}

#[test]
fn demo_script_reproduces_the_golden_transcript() {
    let golden = std::fs::read_to_string(fixtures().join("demo.transcript")).unwrap();
    for _ in 0..2 {
        let mut s = Session::new();
        let transcript = run_script_file(&mut s, &fixtures().join("demo.hb")).unwrap();
        assert_eq!(transcript, golden);
    }
}

#[test]
fn load_reports_missing_files_and_syntax_errors() {
    let mut s = Session::new();
    s.set_base_dir(&fixtures());
    assert!(out(&mut s, "load nowhere.p").starts_with("error: cannot read `nowhere.p`"));
    assert!(out(&mut s, "parse thf(x, axiom, p @).").starts_with("error: syntax error"));
    assert!(out(&mut s, "load").starts_with("error: usage"));
    assert_eq!(out(&mut s, "formulas"), "no formulas");
    assert_eq!(out(&mut s, "load demo.p"), "demo.p: 4 formulas, 4 declarations");
}

#[test]
fn board_commands() {
    let mut s = Session::new();
    assert_eq!(out(&mut s, "split c0 and 3"), "c0 AND: c1, c2, c3");
    assert_eq!(out(&mut s, "status c2 Theorem"), "c2 Theorem");
    assert_eq!(out(&mut s, "status c2 Theorem"), "unchanged");
    assert_eq!(out(&mut s, "status c1 CounterSatisfiable"), "c1 CounterSatisfiable\nc0 CounterSatisfiable");
    assert!(out(&mut s, "status c0 Theorem").starts_with("error:"));
    assert!(out(&mut s, "status c3 Sure").starts_with("error:"));
    assert!(out(&mut s, "split c1 xor 2").starts_with("error: expected and/or"));
    assert_eq!(out(&mut s, "context"), "c0 AND CounterSatisfiable\n  c1 LEAF CounterSatisfiable\n  c2 LEAF Theorem\n  c3 LEAF Open");
}

#[test]
fn prover_commands() {
    let mut s = Session::new();
    assert_eq!(out(&mut s, "provers"), "no provers");
    assert_eq!(out(&mut s, "provers add e remote http://127.0.0.1:9/x 3 tff"), "e remote http://127.0.0.1:9/x, 3s, tff");
    assert!(out(&mut s, "provers add e remote http://127.0.0.1:9/x 3").contains("already exists"));
    assert!(out(&mut s, "provers add v local 2 thf").starts_with("error: usage"));
    assert_eq!(
        out(&mut s, "provers add v local 2 thf vampire --mode casc {problem}"),
        "e remote http://127.0.0.1:9/x, 3s, tff\nv local `vampire --mode casc {problem}`, 2s, thf"
    );
    assert!(out(&mut s, "provers bind v c4").starts_with("error: no context c4"));
    assert!(out(&mut s, "provers remove w").starts_with("error: unknown prover"));
    assert_eq!(out(&mut s, "provers remove e"), "v local `vampire --mode casc {problem}`, 2s, thf");
    assert!(out(&mut s, "agents on magic").starts_with("error: unknown agent"));
}

#[test]
fn stats_go_to_stderr_only() {
    let mut s = Session::new();
    out(&mut s, "index f @ a");
    let r = s.execute("stats");
    assert!(r.out.is_empty());
    assert!(r.err.contains("index: 1 terms"), "{}", r.err);
}

#[test]
fn binary_runs_scripts() {
    let exe = env!("CARGO_BIN_EXE_holboard");
    let output = Command::new(exe).arg("--script").arg(fixtures().join("demo.hb")).output().unwrap();
    assert!(output.status.success());
    let golden = std::fs::read_to_string(fixtures().join("demo.transcript")).unwrap();
    assert_eq!(String::from_utf8(output.stdout).unwrap(), golden);

    let missing = Command::new(exe).arg("--script").arg(fixtures().join("absent.hb")).output().unwrap();
    assert!(!missing.status.success());
    let zero = Command::new(exe).args(["--max-parallel", "0"]).output().unwrap();
    assert!(!zero.status.success());
}

#[test]
fn binary_reads_configuration() {
    let dir = tempfile_dir();
    let config = dir.join("holboard.toml");
    std::fs::write(
        &config,
        "[[prover]]\nname = \"e\"\nmode = \"remote\"\nurl = \"http://127.0.0.1:9/x\"\ntime_limit = 3\n\n[agents.nnf]\nenabled = true\n",
    )
    .unwrap();
    let script = dir.join("s.hb");
    std::fs::write(&script, "provers\nagents\n").unwrap();
    let exe = env!("CARGO_BIN_EXE_holboard");
    let output = Command::new(exe).arg("--config").arg(&config).arg("--script").arg(&script).output().unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("e remote http://127.0.0.1:9/x, 3s, thf"), "{text}");
    assert!(text.contains("nnf on"), "{text}");

    std::fs::write(&config, "[[prover]]\nname = \"e\"\nmode = \"psychic\"\n").unwrap();
    let bad = Command::new(exe).arg("--config").arg(&config).arg("--script").arg(&script).output().unwrap();
    assert!(!bad.status.success());
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("holboard-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn binary_reads_stdin_until_quit() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_holboard"))
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"type ^[X:$i]: X\nquit\ntype $true\n").unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "$i > $i\n");
}

const WORDS: &[&str] = &[
    "let", "show", "type", "normalize", "eta", "index", "query-head", "occurrences", "split", "status", "agents",
    "provers", "run", "formulas", "context", "parse", "load", "c0", "c1", "and", "or", "@", "^", "[", "]", ":",
    "X", "$i", "$o", ">", "(", ")", "=", "f", "!>", "$tType", "on", "off", "nnf", "thf(", ",", ").", "BASE", "0",
    "2", "Theorem", "'", "~", "&", "|",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn arbitrary_lines_never_crash(lines in prop::collection::vec(prop::collection::vec(prop::sample::select(WORDS), 0..8), 1..8)) {
        let mut s = Session::new();
        let script: Vec<String> = lines.iter().map(|l| l.join(" ")).collect();
        let transcript = run_script(&mut s, &script.join("\n"));
        prop_assert!(!transcript.contains("internal error"), "{}", transcript);
        prop_assert_eq!(out(&mut s, "type $true"), "$o");
    }

    #[test]
    fn arbitrary_bytes_never_crash(line in "\\PC{0,40}") {
        let mut s = Session::new();
        let r = s.execute(&line);
        prop_assert!(!r.out.contains("internal error"), "{}", r.out);
    }
}
