//! End-to-end checks of the command-line interface: subcommands, flags,
//! exit codes, the records format, and scripted interactive selection.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use exam::trace::{Outcome, Trace};

fn exam_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exam"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = exam_bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const SHOWCASE: &str = "x ((\\y. y) z) ((\\w. w w) z)";

#[test]
fn reduce_stack_template_on_the_showcase_term() {
    let out = run_with_stdin(&["reduce", "--machine", "exam", "--template", "stack"], SHOWCASE);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("x z (z z)\n"), "{text}");
    assert!(text.contains("beta 2"), "{text}");
}

#[test]
fn reduce_set_template_is_seed_independent() {
    for seed in ["0", "1", "17", "123456"] {
        let out = run_with_stdin(
            &["reduce", "--machine", "exam", "--template", "set", "--seed", seed],
            SHOWCASE,
        );
        assert_eq!(out.status.code(), Some(0), "seed {seed}");
        let text = stdout_of(&out);
        assert!(text.starts_with("x z (z z)\n"), "seed {seed}: {text}");
        assert!(text.contains("beta 2"), "seed {seed}: {text}");
    }
}

#[test]
fn reduce_weak_head_machine() {
    let out = run_with_stdin(&["reduce", "--machine", "mam"], "(\\x. x) y");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("y\n"), "{text}");
    assert!(text.contains("beta 1"), "{text}");
}

#[test]
fn reduce_backtracking_machine() {
    let out = run_with_stdin(&["reduce", "--machine", "bmam"], SHOWCASE);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).starts_with("x z (z z)\n"));
}

#[test]
fn exit_codes_distinguish_outcomes() {
    // fuel exhaustion on the loop
    let out = run_with_stdin(
        &["reduce", "--machine", "exam", "--fuel", "40"],
        "(\\w. w w) (\\w. w w)",
    );
    assert_eq!(out.status.code(), Some(2));

    // parse errors
    let out = run_with_stdin(&["reduce"], "x ((broken");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    // usage errors
    let out = run_with_stdin(&["reduce", "--machine", "nonsense"], "x");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn records_round_trip_through_the_parser() {
    let out = run_with_stdin(
        &[
            "reduce",
            "--machine",
            "exam",
            "--template",
            "stack",
            "--trace",
            "full",
            "--format",
            "records",
        ],
        SHOWCASE,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let trace = Trace::from_records(&text).expect("records parse back");
    assert_eq!(trace.outcome, Outcome::Final);
    assert_eq!(trace.beta_count, 2);
    assert_eq!(trace.steps.len(), 14);
    assert_eq!(trace.final_term, "x z (z z)");
    assert!(trace.steps.iter().all(|s| s.snapshot.is_some()));
    // and the rendering is stable under a second round trip
    assert_eq!(Trace::from_records(&trace.to_records()).unwrap(), trace);
}

#[test]
fn labels_trace_renders_a_table() {
    let out = run_with_stdin(
        &["reduce", "--template", "stack", "--trace", "full"],
        SHOWCASE,
    );
    let text = stdout_of(&out);
    assert!(text.contains("⟨·⟩α0"), "{text}");
    assert!(text.contains("sea_@"), "{text}");
    assert!(text.contains("[w:=z] : [y:=z]"), "{text}");
}

#[test]
fn interactive_template_reads_scripted_choices() {
    // term on the first line, then one pick per prompt; replay the
    // showcase selection script
    let mut input = String::from(SHOWCASE);
    input.push('\n');
    for pick in [0, 0, 0, 2, 2, 1, 2, 1, 1, 2, 2, 3, 1, 3] {
        input.push_str(&format!("α{pick}\n"));
    }
    let out = run_with_stdin(
        &["reduce", "--machine", "exam", "--template", "interactive"],
        &input,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("x z (z z)\n"), "{text}");
    assert!(text.contains("beta 2"), "{text}");
    // prompts listed the jobs with their stack depths
    assert!(String::from_utf8_lossy(&out.stderr).contains("stack depth"));
}

#[test]
fn reduce_reads_term_files_with_comments() {
    let dir = std::env::temp_dir().join(format!("exam-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("term.lam");
    std::fs::write(&path, "-- a stuck application\nx ((\\y. y) z) -- rightmost redex\n").unwrap();
    let out = exam_bin()
        .args(["reduce", "--template", "set"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).starts_with("x z\n"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gen_is_reproducible_and_reparsable() {
    let a = run_with_stdin(&["gen", "--count", "8", "--size", "12", "--seed", "9"], "");
    let b = run_with_stdin(&["gen", "--count", "8", "--size", "12", "--seed", "9"], "");
    assert_eq!(stdout_of(&a), stdout_of(&b));
    let lines: Vec<String> = stdout_of(&a).lines().map(String::from).collect();
    assert_eq!(lines.len(), 8);
    for line in lines {
        exam::parse(&line).expect("generated term parses");
    }
    let open = run_with_stdin(
        &["gen", "--count", "5", "--size", "10", "--seed", "3", "--mode", "open"],
        "",
    );
    assert_eq!(open.status.code(), Some(0));
}

#[test]
fn check_command_reports_suites() {
    let out = run_with_stdin(
        &["check", "--suite", "differential", "--count", "16", "--seed", "5", "--size", "12"],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("suite differential: pass"), "{text}");

    let out = run_with_stdin(
        &["check", "--suite", "diamond", "--count", "10", "--seed", "4", "--size", "10"],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("suite diamond: pass"));
}
