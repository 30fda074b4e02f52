//! C interface to the connfair solvers.
//!
//! Instances and reports are opaque handles created and released through this API. Every
//! fallible call returns a [`CfdStatus`]; on failure [`cfd_last_error`] describes what went
//! wrong on the calling thread. Strings handed out as `char **` are owned by the caller and
//! must be released with [`cfd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use connfair::generators::{fixture_cycle8, gen_random_with_types, GraphFamily};
use connfair::io::{instance_to_json, mms_values_to_json, parse_allocation, parse_instance, report_to_json, to_pretty, Verdict};
use connfair::solvers::{maximin_shares, solve_with};
use connfair::{Error, Instance, Method, OracleBudget, Problem};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfdStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    InvalidArgument = 1,
    /// The JSON text could not be parsed.
    ParseError = 2,
    /// The input was well formed but violates an instance invariant.
    InputError = 3,
    /// The requested method does not apply to this problem or graph.
    RoutingError = 4,
    /// The brute-force oracle refused the instance as too large.
    BudgetExceeded = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfdProblem {
    Prop = 0,
    EfComplete = 1,
    Mms = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfdMethod {
    Auto = 0,
    Oracle = 1,
    Greedy = 2,
    PathDp = 3,
    Star = 4,
    TreeFpt = 5,
    EfPath = 6,
    MmsTree = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfdFamily {
    Path = 0,
    Star = 1,
    Tree = 2,
    Cycle = 3,
    Connected = 4,
}

/// Oracle size limits.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CfdBudget {
    pub max_items: usize,
    pub max_agents: usize,
    pub max_enumerated: u64,
}

/// Opaque instance handle.
pub struct CfdInstance {
    inner: Instance,
}

/// Opaque solver report handle.
pub struct CfdReport {
    decision: bool,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (CfdStatus, String);

fn set_last_error(message: Option<String>) {
    let message = message.map(|m| CString::new(m.replace('\0', " ")).expect("NULs removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn from_error(e: Error) -> Failure {
    let status = match e {
        Error::Json(_) => CfdStatus::ParseError,
        Error::Input(_) | Error::Io(_) => CfdStatus::InputError,
        Error::Routing(_) => CfdStatus::RoutingError,
        Error::Budget(_) => CfdStatus::BudgetExceeded,
        Error::Internal(_) => CfdStatus::Internal,
    };
    (status, e.to_string())
}

fn invalid(what: &str) -> Failure {
    (CfdStatus::InvalidArgument, format!("{what} must not be null"))
}

/// Runs `body`, records its error (or clears the last one) and converts panics to `Internal`.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> CfdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(None);
            CfdStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(Some(message));
            status
        }
        Err(_) => {
            set_last_error(Some("panic inside connfair".into()));
            CfdStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(invalid(what));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| (CfdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn instance_ref<'a>(inst: *const CfdInstance) -> Result<&'a Instance, Failure> {
    inst.as_ref().map(|h| &h.inner).ok_or_else(|| invalid("instance"))
}

unsafe fn put<T>(out: *mut *mut T, value: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer"));
    }
    *out = value;
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer"));
    }
    let owned = CString::new(text).map_err(|_| (CfdStatus::Internal, "NUL in output".to_string()))?;
    *out = owned.into_raw();
    Ok(())
}

unsafe fn budget_from(budget: *const CfdBudget) -> OracleBudget {
    match budget.as_ref() {
        Some(b) => OracleBudget {
            max_items: b.max_items,
            max_agents: b.max_agents,
            max_enumerated: b.max_enumerated,
        },
        None => OracleBudget::default(),
    }
}

fn method_from(method: CfdMethod) -> Option<Method> {
    match method {
        CfdMethod::Auto => None,
        CfdMethod::Oracle => Some(Method::Oracle),
        CfdMethod::Greedy => Some(Method::Greedy),
        CfdMethod::PathDp => Some(Method::PathDp),
        CfdMethod::Star => Some(Method::Star),
        CfdMethod::TreeFpt => Some(Method::TreeFpt),
        CfdMethod::EfPath => Some(Method::EfPath),
        CfdMethod::MmsTree => Some(Method::MmsTree),
    }
}

fn boxed(inner: Instance) -> *mut CfdInstance {
    Box::into_raw(Box::new(CfdInstance { inner }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cfd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL after a successful call.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cfd_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// The default oracle limits.
#[no_mangle]
pub extern "C" fn cfd_budget_default() -> CfdBudget {
    let b = OracleBudget::default();
    CfdBudget {
        max_items: b.max_items,
        max_agents: b.max_agents,
        max_enumerated: b.max_enumerated,
    }
}

/// Parses canonical instance JSON into `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cfd_instance_from_json(
    json: *const c_char,
    normalize: bool,
    out: *mut *mut CfdInstance,
) -> CfdStatus {
    guarded(|| {
        let text = read_str(json, "json")?;
        let inst = parse_instance(text, normalize).map_err(from_error)?;
        put(out, boxed(inst))
    })
}

/// Seeded random instance; `types` caps the number of distinct utility vectors.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cfd_generate_random(
    seed: u64,
    family: CfdFamily,
    items: usize,
    agents: usize,
    types: usize,
    denom_bound: u32,
    out: *mut *mut CfdInstance,
) -> CfdStatus {
    guarded(|| {
        let family = match family {
            CfdFamily::Path => GraphFamily::Path,
            CfdFamily::Star => GraphFamily::Star,
            CfdFamily::Tree => GraphFamily::Tree,
            CfdFamily::Cycle => GraphFamily::Cycle,
            CfdFamily::Connected => GraphFamily::Connected,
        };
        let inst = gen_random_with_types(seed, family, items, agents, types, denom_bound).map_err(from_error)?;
        put(out, boxed(inst))
    })
}

/// The 8-cycle instance that has no MMS allocation.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cfd_fixture_cycle8(out: *mut *mut CfdInstance) -> CfdStatus {
    guarded(|| put(out, boxed(fixture_cycle8())))
}

/// Releases an instance. NULL is ignored.
///
/// # Safety
/// `inst` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cfd_instance_free(inst: *mut CfdInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of agents, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn cfd_instance_agent_count(inst: *const CfdInstance) -> usize {
    inst.as_ref().map_or(0, |h| h.inner.agent_count())
}

/// Number of items, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn cfd_instance_vertex_count(inst: *const CfdInstance) -> usize {
    inst.as_ref().map_or(0, |h| h.inner.vertex_count())
}

/// Canonical JSON of `inst` into `*out` (release with [`cfd_string_free`]).
///
/// # Safety
/// `inst` must be a live instance handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cfd_instance_to_json(inst: *const CfdInstance, out: *mut *mut c_char) -> CfdStatus {
    guarded(|| put_string(out, instance_to_json(instance_ref(inst)?)))
}

/// Decides `problem`. `budget` may be NULL for the defaults.
///
/// # Safety
/// `inst` must be a live instance handle, `budget` NULL or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_solve(
    inst: *const CfdInstance,
    problem: CfdProblem,
    method: CfdMethod,
    budget: *const CfdBudget,
    out: *mut *mut CfdReport,
) -> CfdStatus {
    guarded(|| {
        let inst = instance_ref(inst)?;
        let problem = match problem {
            CfdProblem::Prop => Problem::Prop,
            CfdProblem::EfComplete => Problem::EfComplete,
            CfdProblem::Mms => Problem::Mms,
        };
        let report = solve_with(inst, problem, method_from(method), &budget_from(budget)).map_err(from_error)?;
        let json = CString::new(report_to_json(inst, &report))
            .map_err(|_| (CfdStatus::Internal, "NUL in report".to_string()))?;
        put(
            out,
            Box::into_raw(Box::new(CfdReport {
                decision: report.decision,
                json,
            })),
        )
    })
}

/// True for a yes-instance; false for no or NULL.
///
/// # Safety
/// `report` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cfd_report_decision(report: *const CfdReport) -> bool {
    report.as_ref().is_some_and(|r| r.decision)
}

/// The report as JSON, borrowed from the handle; NULL for NULL.
///
/// # Safety
/// `report` must be NULL or a live report handle; the string dies with the handle.
#[no_mangle]
pub unsafe extern "C" fn cfd_report_json(report: *const CfdReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Releases a report. NULL is ignored.
///
/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cfd_report_free(report: *mut CfdReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Maximin shares as `{"method", "values"}` JSON. `method` must be `Auto`, `Oracle` or
/// `MmsTree`.
///
/// # Safety
/// `inst` must be a live instance handle, `budget` NULL or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_mms_values(
    inst: *const CfdInstance,
    method: CfdMethod,
    budget: *const CfdBudget,
    out: *mut *mut c_char,
) -> CfdStatus {
    guarded(|| {
        let inst = instance_ref(inst)?;
        let (values, name) = maximin_shares(inst, method_from(method), &budget_from(budget)).map_err(from_error)?;
        put_string(out, mms_values_to_json(inst, &values, name))
    })
}

/// Checks allocation JSON against every fairness notion and writes the verdict JSON.
/// With `with_mms`, maximin shares are computed too.
///
/// # Safety
/// `inst` must be a live instance handle, `allocation_json` NUL-terminated, `budget` NULL
/// or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_verify(
    inst: *const CfdInstance,
    allocation_json: *const c_char,
    with_mms: bool,
    budget: *const CfdBudget,
    out: *mut *mut c_char,
) -> CfdStatus {
    guarded(|| {
        let inst = instance_ref(inst)?;
        let alloc = parse_allocation(inst, read_str(allocation_json, "allocation_json")?).map_err(from_error)?;
        let mms = match with_mms {
            true => Some(maximin_shares(inst, None, &budget_from(budget)).map_err(from_error)?.0),
            false => None,
        };
        let verdict = Verdict::check(inst, &alloc, mms.as_deref()).map_err(from_error)?;
        put_string(out, to_pretty(&verdict))
    })
}

/// Releases a string returned through a `char **` parameter. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cfd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
