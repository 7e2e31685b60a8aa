//! C interface to taskforge.
//!
//! Every function returns a [`TfStatus`]; on failure a message is available
//! from [`tf_last_error`] on the same thread until the next call. Objects are
//! handed out as opaque pointers and must be released with their `_free`
//! function. Strings returned through out-parameters are owned by the caller
//! and released with [`tf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use taskforge::allocation::AllocationReport;
use taskforge::buchi::{export_hoa, translate, BuchiAutomaton};
use taskforge::harness::{load_scenario, parse_scenario, run_pipeline, HarnessError, PipelineOptions, Scenario};
use taskforge::ltl::{parse_ltl, Formula};

/// Result of every call. The first four values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    /// Bad input: syntax, schema or model errors.
    Validation = 1,
    /// Input was valid but some sub-task could not be assigned.
    Infeasible = 2,
    Internal = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
}

/// Parsed LTL formula.
pub struct TfFormula(Formula);

/// Büchi automaton translated from a formula.
pub struct TfAutomaton(BuchiAutomaton);

/// Validated scenario.
pub struct TfScenario(Scenario);

/// Result of an allocation run.
pub struct TfReport(AllocationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior nuls were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(TfStatus, String);

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let status = if e.exit_code() == 1 {
            TfStatus::Validation
        } else {
            TfStatus::Internal
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, records its error message and turns panics into `Internal`.
fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> TfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            TfStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(TfStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(TfStatus::NullPointer, format!("{what} is null")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(TfStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure(TfStatus::Internal, e.to_string()))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an LTL formula.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_formula_parse(text: *const c_char, out: *mut *mut TfFormula) -> TfStatus {
    guarded(|| {
        out_arg(out, "out")?;
        let text = str_arg(text, "text")?;
        let f = parse_ltl(text).map_err(|e| Failure(TfStatus::Validation, e.to_string()))?;
        *out = Box::into_raw(Box::new(TfFormula(f)));
        Ok(())
    })
}

/// Writes the formula's canonical text to `out`; free it with
/// [`tf_string_free`].
///
/// # Safety
/// `f` must be a live formula; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_formula_to_string(f: *const TfFormula, out: *mut *mut c_char) -> TfStatus {
    guarded(|| {
        out_arg(out, "out")?;
        let f = ref_arg(f, "formula")?;
        *out = to_c_string(f.0.to_string())?;
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a formula from [`tf_formula_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tf_formula_free(f: *mut TfFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Translates a formula into a Büchi automaton.
///
/// # Safety
/// `f` must be a live formula; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_automaton_translate(f: *const TfFormula, out: *mut *mut TfAutomaton) -> TfStatus {
    guarded(|| {
        out_arg(out, "out")?;
        let f = ref_arg(f, "formula")?;
        *out = Box::into_raw(Box::new(TfAutomaton(translate(&f.0))));
        Ok(())
    })
}

/// Number of states, or 0 for null.
///
/// # Safety
/// `a` must be null or a live automaton.
#[no_mangle]
pub unsafe extern "C" fn tf_automaton_num_states(a: *const TfAutomaton) -> usize {
    a.as_ref().map_or(0, |a| a.0.num_states())
}

/// Whether the automaton accepts no word at all. Null counts as empty.
///
/// # Safety
/// `a` must be null or a live automaton.
#[no_mangle]
pub unsafe extern "C" fn tf_automaton_is_empty(a: *const TfAutomaton) -> bool {
    a.as_ref().is_none_or(|a| a.0.is_empty())
}

/// Writes the automaton in HOA format to `out`; free it with
/// [`tf_string_free`].
///
/// # Safety
/// `a` must be a live automaton; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_automaton_to_hoa(a: *const TfAutomaton, out: *mut *mut c_char) -> TfStatus {
    guarded(|| {
        out_arg(out, "out")?;
        let a = ref_arg(a, "automaton")?;
        *out = to_c_string(export_hoa(&a.0))?;
        Ok(())
    })
}

/// # Safety
/// `a` must be null or an automaton from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tf_automaton_free(a: *mut TfAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Loads and validates a scenario file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_scenario_load(path: *const c_char, out: *mut *mut TfScenario) -> TfStatus {
    guarded(|| {
        out_arg(out, "out")?;
        let path = str_arg(path, "path")?;
        *out = Box::into_raw(Box::new(TfScenario(load_scenario(path)?)));
        Ok(())
    })
}

/// Parses and validates a scenario from JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_scenario_parse(json: *const c_char, out: *mut *mut TfScenario) -> TfStatus {
    guarded(|| {
        out_arg(out, "out")?;
        let json = str_arg(json, "json")?;
        *out = Box::into_raw(Box::new(TfScenario(parse_scenario(json)?)));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a live scenario.
#[no_mangle]
pub unsafe extern "C" fn tf_scenario_num_robots(s: *const TfScenario) -> usize {
    s.as_ref().map_or(0, |s| s.0.num_robots())
}

/// # Safety
/// `s` must be null or a live scenario.
#[no_mangle]
pub unsafe extern "C" fn tf_scenario_num_tasks(s: *const TfScenario) -> usize {
    s.as_ref().map_or(0, |s| s.0.num_tasks())
}

/// # Safety
/// `s` must be null or a scenario from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tf_scenario_free(s: *mut TfScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs the full pipeline: progress, cost tables, token allocation and,
/// unless `skip_optimal`, the exhaustive baseline.
///
/// Returns [`TfStatus::Infeasible`] when some sub-task stays unassigned; the
/// report is still written to `out` in that case and must be freed.
///
/// # Safety
/// `s` must be a live scenario; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_allocate(s: *const TfScenario, skip_optimal: bool, out: *mut *mut TfReport) -> TfStatus {
    guarded(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let s = ref_arg(s, "scenario")?;
        let report = run_pipeline(&s.0, &PipelineOptions { skip_optimal })?;
        let complete = report.is_complete();
        let unassigned = report.unassigned.clone();
        *out = Box::into_raw(Box::new(TfReport(report)));
        if complete {
            Ok(())
        } else {
            Err(Failure(
                TfStatus::Infeasible,
                format!("no robot can take sub-tasks {unassigned:?}"),
            ))
        }
    })
}

/// Number of new sub-tasks in the report, or 0 for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn tf_report_num_tasks(r: *const TfReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.num_tasks)
}

/// Copies the token assignment into `buf`: entry `j` is the 1-based robot
/// holding sub-task `j`, or 0. Copies at most `len` entries and returns the
/// number of sub-tasks.
///
/// # Safety
/// `r` must be null or a live report; `buf` must hold `len` entries or be null
/// with `len` 0.
#[no_mangle]
pub unsafe extern "C" fn tf_report_token_assignment(r: *const TfReport, buf: *mut usize, len: usize) -> usize {
    let Some(r) = r.as_ref() else {
        return 0;
    };
    let alpha = r.0.token_assignment.entries();
    if !buf.is_null() {
        let n = alpha.len().min(len);
        ptr::copy_nonoverlapping(alpha.as_ptr(), buf, n);
    }
    alpha.len()
}

/// Total cost of the token assignment; infinity if incomplete, NaN for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn tf_report_token_cost(r: *const TfReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.token_cost)
}

/// Total cost of the optimal assignment; NaN if it was skipped or for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn tf_report_optimal_cost(r: *const TfReport) -> f64 {
    r.as_ref().and_then(|r| r.0.optimal_cost).unwrap_or(f64::NAN)
}

/// Whether every sub-task was assigned. Null counts as incomplete.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn tf_report_is_complete(r: *const TfReport) -> bool {
    r.as_ref().is_some_and(|r| r.0.is_complete())
}

/// Writes the full report as JSON to `out`; free it with
/// [`tf_string_free`].
///
/// # Safety
/// `r` must be a live report; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_report_to_json(r: *const TfReport, out: *mut *mut c_char) -> TfStatus {
    guarded(|| {
        out_arg(out, "out")?;
        let r = ref_arg(r, "report")?;
        let text = serde_json::to_string_pretty(&r.0).map_err(|e| Failure(TfStatus::Internal, e.to_string()))?;
        *out = to_c_string(text)?;
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a report from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tf_report_free(r: *mut TfReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
