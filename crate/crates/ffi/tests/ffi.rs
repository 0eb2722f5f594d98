use std::ffi::{c_char, CStr, CString};
use std::ptr;

use viplan_ffi::*;

fn last_error() -> String {
    let p = viplan_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    viplan_string_free(s);
    out
}

fn load(problem: &str) -> *mut ViplanTask {
    let p = CString::new(problem).unwrap();
    let mut task = ptr::null_mut();
    assert_eq!(unsafe { viplan_task_from_pddl(viplan_bw_domain(), p.as_ptr(), &mut task) }, ViplanStatus::Ok);
    task
}

#[test]
fn plan_and_validate_round_trip() {
    let task = load(viplan_core::pddl::fixtures::BLOCKSWORLD_PROBLEM);
    assert!(unsafe { viplan_task_num_actions(task) } > 0);
    let mut plan = ptr::null_mut();
    assert_eq!(unsafe { viplan_plan(task, 0, &mut plan) }, ViplanStatus::Ok);
    let text = unsafe { take(plan) };
    assert_eq!(text.lines().count(), 4, "{text}");

    let c = CString::new(text.clone()).unwrap();
    let mut valid = false;
    assert_eq!(unsafe { viplan_validate_plan(task, c.as_ptr(), &mut valid) }, ViplanStatus::Ok);
    assert!(valid);

    let first = CString::new(text.lines().next().unwrap()).unwrap();
    assert_eq!(unsafe { viplan_validate_plan(task, first.as_ptr(), &mut valid) }, ViplanStatus::Ok);
    assert!(!valid);

    let bogus = CString::new("(fly y c9)").unwrap();
    assert_eq!(unsafe { viplan_validate_plan(task, bogus.as_ptr(), &mut valid) }, ViplanStatus::Parse);
    assert!(last_error().contains("fly"));
    unsafe { viplan_task_free(task) };
}

#[test]
fn tiny_budget_is_reported() {
    let task = load(viplan_core::pddl::fixtures::BLOCKSWORLD_PROBLEM);
    let mut plan = ptr::null_mut();
    assert_eq!(unsafe { viplan_plan(task, 1, &mut plan) }, ViplanStatus::BudgetExceeded);
    assert!(plan.is_null());
    unsafe { viplan_task_free(task) };
}

#[test]
fn parse_errors_carry_messages() {
    let bad = CString::new("(define (problem x)").unwrap();
    let mut task = ptr::null_mut();
    assert_eq!(unsafe { viplan_task_from_pddl(viplan_bw_domain(), bad.as_ptr(), &mut task) }, ViplanStatus::Parse);
    assert!(task.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { viplan_task_from_pddl(ptr::null(), bad.as_ptr(), &mut task) }, ViplanStatus::NullPointer);
    assert_eq!(unsafe { viplan_plan(ptr::null(), 0, &mut ptr::null_mut()) }, ViplanStatus::NullPointer);
    // A successful call clears the previous error.
    let (mut m, mut s) = (0.0, 0.0);
    assert_eq!(unsafe { viplan_success_rate(1, 2, &mut m, &mut s) }, ViplanStatus::Ok);
    assert!(viplan_last_error().is_null());
}

#[test]
fn yes_no_verdicts() {
    let v = |s: &str, cot| unsafe { viplan_parse_yes_no(CString::new(s).unwrap().as_ptr(), cot) };
    assert_eq!(v("Yes.", false), ViplanVerdict::Yes);
    assert_eq!(v("no", false), ViplanVerdict::No);
    assert_eq!(v("<explanation>x</explanation><answer>No</answer>", true), ViplanVerdict::No);
    assert_eq!(v("maybe", false), ViplanVerdict::Unparsable);
    assert_eq!(unsafe { viplan_parse_yes_no(ptr::null(), false) }, ViplanVerdict::Unparsable);
}

#[test]
fn success_rate_matches_core() {
    let (mut m, mut s) = (0.0, 0.0);
    assert_eq!(unsafe { viplan_success_rate(11, 25, &mut m, &mut s) }, ViplanStatus::Ok);
    assert_eq!(viplan_core::metrics::fmt2(m), "0.44");
    assert!((s - (0.44f64 * 0.56 / 25.0).sqrt()).abs() < 1e-12);
    assert_eq!(unsafe { viplan_success_rate(3, 2, &mut m, &mut s) }, ViplanStatus::InvalidArgument);
    assert_eq!(unsafe { viplan_success_rate(0, 0, &mut m, &mut s) }, ViplanStatus::InvalidArgument);
}

#[test]
fn generated_problem_is_deterministic_and_loadable() {
    let gen = |seed| {
        let split = CString::new("medium").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { viplan_generate_bw_problem(split.as_ptr(), seed, &mut out) }, ViplanStatus::Ok);
        unsafe { take(out) }
    };
    let text = gen(9);
    assert_eq!(text, gen(9));
    let task = load(&text);
    let mut plan = ptr::null_mut();
    assert_eq!(unsafe { viplan_plan(task, 0, &mut plan) }, ViplanStatus::Ok);
    let len = unsafe { take(plan) }.lines().count();
    assert!((5..=10).contains(&len));
    unsafe { viplan_task_free(task) };

    let split = CString::new("impossible").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { viplan_generate_bw_problem(split.as_ptr(), 0, &mut out) }, ViplanStatus::InvalidArgument);
}

#[test]
fn header_compiles_as_c() {
    let Some(cc) =
        ["cc", "gcc", "clang"].into_iter().find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"viplan.h\"\nint main(void) {\n  ViplanTask *t = 0;\n  ViplanStatus s = viplan_task_from_pddl(viplan_bw_domain(), \"\", &t);\n  return s == VIPLAN_STATUS_OK;\n}\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let out = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-header");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
