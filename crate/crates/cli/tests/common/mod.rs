//! Golden command cases shared by the golden and acceptance targets.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    /// Pass `--trace` and append the trace file to the transcript.
    pub trace: bool,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, exit, trace: false }
}

const fn traced(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, exit, trace: true }
}

pub const CASES: &[Case] = &[
    case("run_right_forever", &["run", "right_forever.tm", "--budget", "100"], 0),
    traced("run_write1_trace", &["run", "write1.tm"], 0),
    case("run_counter_exhausted", &["run", "counter.tm", "--budget", "50"], 2),
    case("run_counter_unguarded", &["run", "counter.tm", "--no-guard", "--budget", "50"], 2),
    case("run_const3_input", &["run", "const3.tm", "--input", "111"], 0),
    case("run_tsv", &["run", "right_forever.tm", "--format", "tsv"], 0),
    case("run_bad_move", &["run", "bad.tm"], 1),
    case("run_zero_budget", &["run", "write1.tm", "--budget", "0"], 1),
    case("run_unknown_flag", &["run", "write1.tm", "--wat"], 1),
    case("race_self_terminate", &["race", "right_forever.tm", "write1.tm"], 0),
    traced("race_exhausted", &["race", "right_forever.tm", "counter.tm", "--no-guard", "--budget", "12"], 2),
    traced("totalize_abs_9", &["totalize", "--g", "abs-diff-square", "--args", "9", "--budget", "100000"], 0),
    case("totalize_abs_3", &["totalize", "--g", "abs-diff-square", "--args", "3", "--budget", "30000"], 2),
    case("totalize_const_zero", &["totalize", "--g", "const-zero", "--args", "4"], 0),
    case(
        "totalize_machine_loop",
        &["totalize", "--g-machine", "second_or_loop.tm", "--args", "0", "--certifier", "none", "--budget", "1000"],
        0,
    ),
    case(
        "totalize_machine_defined",
        &["totalize", "--g-machine", "second_or_loop.tm", "--args", "2", "--certifier", "none", "--budget", "1000"],
        0,
    ),
    case("totalize_unknown_g", &["totalize", "--g", "sqrt", "--args", "2"], 1),
    case("beta_fit", &["beta", "fit", "seq.txt"], 0),
    case("beta_eval_zero", &["beta", "eval", "--b", "0", "--c", "5", "--i", "9"], 0),
    case("beta_eval", &["beta", "eval", "--b", "20", "--c", "2", "--i", "2"], 0),
    case("beta_consistent", &["beta", "consistent", "fit.txt", "--bound", "24"], 0),
    case("measure_mass", &["measure", "particles.table", "--k", "mass", "--t", "5"], 0),
    case("measure_noise", &["measure", "particles.table", "--k", "noise", "--t", "3"], 0),
    case("measure_undefined", &["measure", "particles.table", "--k", "colour", "--t", "3"], 0),
    case("measure_bad_name", &["measure", "particles.table", "--k", "Mass", "--t", "3"], 1),
    case("measure_spin_series", &["measure", "particles.table", "--k", "spin", "--count", "12", "--particle", "e1"], 0),
    case("classify_mass", &["classify", "mass.log"], 0),
    case("classify_spin", &["classify", "spin.log", "--window", "4"], 0),
    case("superpose", &["superpose", "a.log", "b.log"], 0),
    case("superpose_compare", &["superpose", "a.log", "b.log", "--compare", "--bound", "24"], 0),
    case("predict", &["predict", "a.log", "--bound", "24"], 0),
    case("predict_empty", &["predict", "a.log", "--bound", "5"], 2),
    case("check_a1", &["check", "a1.proof"], 0),
    case("check_reflexivity", &["check", "reflexivity.proof", "--target", "=00"], 0),
    case("check_broken", &["check", "broken.proof"], 2),
    case("check_wrong_target", &["check", "a1.proof", "--target", "=00"], 2),
    case("prove_found", &["prove", "--target", "=+000"], 0),
    case("prove_exhausted", &["prove", "--target", "=0S0", "--budget", "200"], 2),
    case("corpus", &["corpus", "--seed", "3", "--count", "3"], 0),
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Runs a case in the fixtures directory and returns its full transcript:
/// stdout, then stderr and trace sections when present, then the exit code.
pub fn transcript(case: &Case) -> (i32, String) {
    let trace = std::env::temp_dir().join(format!("cwb-{}-{}.trace", std::process::id(), case.name));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cwb"));
    cmd.current_dir(fixtures()).args(case.args);
    if case.trace {
        cmd.arg("--trace").arg(&trace);
    }
    let out = cmd.output().expect("spawn cwb");
    let code = out.status.code().expect("exit code");
    let mut text = String::from_utf8(out.stdout).expect("utf-8 stdout");
    let stderr = String::from_utf8(out.stderr).expect("utf-8 stderr");
    if !stderr.is_empty() {
        text.push_str("--- stderr\n");
        text.push_str(&stderr);
    }
    if case.trace {
        text.push_str("--- trace\n");
        text.push_str(&std::fs::read_to_string(&trace).unwrap_or_default());
        let _ = std::fs::remove_file(&trace);
    }
    text.push_str(&format!("--- exit {code}\n"));
    (code, text)
}

pub fn golden_path(case: &Case) -> PathBuf {
    fixtures().join("golden").join(format!("{}.out", case.name))
}
