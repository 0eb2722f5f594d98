//! C interface to the planning core: parse and ground PDDL, plan, validate
//! plans, parse yes/no replies, compute success rates and generate
//! Blocksworld problems.
//!
//! Conventions: every fallible call returns a [`ViplanStatus`]; on failure
//! the message is available from [`viplan_last_error`] on the same thread.
//! Strings handed out by the library must be released with
//! [`viplan_string_free`], tasks with [`viplan_task_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use viplan_core::envs::bw::{self, SplitSpec};
use viplan_core::envs::Split;
use viplan_core::metrics;
use viplan_core::pddl::{self, GroundTask};
use viplan_core::planner::{self, Plan, PlanOutcome};
use viplan_core::protocol::{parse_yes_no, Verdict};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViplanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Unsolvable = 5,
    BudgetExceeded = 6,
    Generation = 7,
    Panic = 8,
}

/// Answer to a yes/no question as read from a model reply.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViplanVerdict {
    No = 0,
    Yes = 1,
    Unparsable = -1,
}

/// A parsed and grounded planning task.
pub struct ViplanTask {
    task: GroundTask,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(ViplanStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ViplanStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ViplanStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ViplanStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ViplanStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(ViplanStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(ViplanStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

unsafe fn task_ref<'a>(task: *const ViplanTask) -> Result<&'a GroundTask, Fail> {
    task.as_ref().map(|t| &t.task).ok_or_else(|| Fail(ViplanStatus::NullPointer, "task is null".into()))
}

/// Last error message on this thread, or null. Owned by the library and
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn viplan_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn viplan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and grounds a domain/problem pair.
///
/// # Safety
/// `domain` and `problem` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn viplan_task_from_pddl(
    domain: *const c_char,
    problem: *const c_char,
    out: *mut *mut ViplanTask,
) -> ViplanStatus {
    guard(|| {
        check_out(out, "out")?;
        let (d, p) = (read_str(domain, "domain")?, read_str(problem, "problem")?);
        let task = pddl::load_task(d, p).map_err(|e| Fail(ViplanStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(ViplanTask { task }));
        Ok(())
    })
}

/// # Safety
/// `task` must come from [`viplan_task_from_pddl`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn viplan_task_free(task: *mut ViplanTask) {
    if !task.is_null() {
        drop(Box::from_raw(task));
    }
}

/// Number of ground actions, or 0 for a null task.
///
/// # Safety
/// `task` must be null or a live task.
#[no_mangle]
pub unsafe extern "C" fn viplan_task_num_actions(task: *const ViplanTask) -> usize {
    task.as_ref().map_or(0, |t| t.task.actions.len())
}

/// Optimal plan from the initial state, one `name(arg, ...)` per line.
/// `budget` caps node expansions; 0 selects the default.
///
/// # Safety
/// `task` must be a live task; `out_plan` must be writable.
#[no_mangle]
pub unsafe extern "C" fn viplan_plan(
    task: *const ViplanTask,
    budget: usize,
    out_plan: *mut *mut c_char,
) -> ViplanStatus {
    guard(|| {
        check_out(out_plan, "out_plan")?;
        let task = task_ref(task)?;
        let budget = if budget == 0 { planner::DEFAULT_BUDGET } else { budget };
        match planner::plan(task, budget) {
            PlanOutcome::Solved(plan) => {
                *out_plan = into_c_string(plan.signatures().join("\n"));
                Ok(())
            }
            PlanOutcome::Unsolvable => Err(Fail(ViplanStatus::Unsolvable, "goal is unreachable".into())),
            PlanOutcome::BudgetExceeded { expanded } => {
                Err(Fail(ViplanStatus::BudgetExceeded, format!("gave up after {expanded} expansions")))
            }
        }
    })
}

/// `name(a, b)` or `(name a b)`.
fn parse_action_line(line: &str) -> Option<(String, Vec<String>)> {
    let line = line.trim();
    let words: Vec<String> = if let Some(inner) = line.strip_prefix('(').and_then(|l| l.strip_suffix(')')) {
        inner.split_whitespace().map(str::to_lowercase).collect()
    } else {
        let (name, rest) = line.split_once('(')?;
        let args = rest.strip_suffix(')')?;
        std::iter::once(name.trim().to_lowercase())
            .chain(args.split(',').map(|a| a.trim().to_lowercase()).filter(|a| !a.is_empty()))
            .collect()
    };
    let (name, args) = words.split_first()?;
    Some((name.clone(), args.to_vec()))
}

/// Checks that `plan` (one action per line, blank lines ignored) is
/// applicable from the initial state and reaches the goal.
///
/// # Safety
/// `task` must be a live task, `plan` nul-terminated, `out_valid` writable.
#[no_mangle]
pub unsafe extern "C" fn viplan_validate_plan(
    task: *const ViplanTask,
    plan: *const c_char,
    out_valid: *mut bool,
) -> ViplanStatus {
    guard(|| {
        check_out(out_valid, "out_valid")?;
        let task = task_ref(task)?;
        let mut actions = Vec::new();
        for line in read_str(plan, "plan")?.lines().filter(|l| !l.trim().is_empty()) {
            let bad = || Fail(ViplanStatus::Parse, format!("unknown action `{}`", line.trim()));
            let (name, args) = parse_action_line(line).ok_or_else(bad)?;
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            actions.push(task.find_action(&name, &args).ok_or_else(bad)?.clone());
        }
        *out_valid = planner::validate_plan(task, &task.init, &Plan { actions });
        Ok(())
    })
}

/// Reads a yes/no verdict from a reply; with `cot`, from its last
/// `<answer>` tag. Null or non-UTF-8 text is unparsable.
///
/// # Safety
/// `text` must be null or nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn viplan_parse_yes_no(text: *const c_char, cot: bool) -> ViplanVerdict {
    let Ok(text) = read_str(text, "text") else {
        return ViplanVerdict::Unparsable;
    };
    match parse_yes_no(text, cot) {
        Verdict::Yes => ViplanVerdict::Yes,
        Verdict::No => ViplanVerdict::No,
        Verdict::Unparsable => ViplanVerdict::Unparsable,
    }
}

/// Success proportion and its binomial standard error.
///
/// # Safety
/// `out_mean` and `out_sem` must be writable.
#[no_mangle]
pub unsafe extern "C" fn viplan_success_rate(
    successes: usize,
    total: usize,
    out_mean: *mut f64,
    out_sem: *mut f64,
) -> ViplanStatus {
    guard(|| {
        check_out(out_mean, "out_mean")?;
        check_out(out_sem, "out_sem")?;
        if total == 0 || successes > total {
            return Err(Fail(ViplanStatus::InvalidArgument, format!("{successes} successes out of {total}")));
        }
        let e = metrics::proportion(successes, total);
        *out_mean = e.mean;
        *out_sem = e.sem;
        Ok(())
    })
}

/// Blocksworld problem text for `split` ("simple", "medium" or "hard").
/// Deterministic in `seed`.
///
/// # Safety
/// `split` must be nul-terminated; `out_problem` writable.
#[no_mangle]
pub unsafe extern "C" fn viplan_generate_bw_problem(
    split: *const c_char,
    seed: u64,
    out_problem: *mut *mut c_char,
) -> ViplanStatus {
    guard(|| {
        check_out(out_problem, "out_problem")?;
        let split: Split =
            read_str(split, "split")?.parse().map_err(|e| Fail(ViplanStatus::InvalidArgument, format!("{e}")))?;
        let p = bw::generate_bw_problem(&SplitSpec::bw(split), seed, bw::DEFAULT_MAX_REJECTIONS)
            .map_err(|e| Fail(ViplanStatus::Generation, e.to_string()))?;
        *out_problem = into_c_string(p.text);
        Ok(())
    })
}

/// Text of the bundled Blocksworld domain, for use with
/// [`viplan_task_from_pddl`]. Static; do not free.
#[no_mangle]
pub extern "C" fn viplan_bw_domain() -> *const c_char {
    static TEXT: std::sync::OnceLock<CString> = std::sync::OnceLock::new();
    TEXT.get_or_init(|| CString::new(pddl::fixtures::BLOCKSWORLD_DOMAIN).expect("no nul bytes")).as_ptr()
}
