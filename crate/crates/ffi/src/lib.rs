//! C interface. Sets and allocators are opaque heap handles owned by the
//! caller and released with the matching `_free` function. Every function
//! returns a [`LogiczonoStatus`]; on failure a message is available from
//! [`logiczono_last_error`] on the same thread. Strings returned through
//! out-parameters are NUL-terminated and released with
//! [`logiczono_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use logiczono::netlang::parse_network;
use logiczono::oracle::{contains, enumerate_points, is_empty};
use logiczono::reach::{check_unsafe, parse_bindings, reach, InputSchedule, ReachOptions, ReachProblem, SafetySpec};
use logiczono::setreps::io::{to_json, AnySet, SetKind};
use logiczono::setreps::{apply_gate, canonicalize, intersect, negate};
use logiczono::{BitVector, Cplz, EnumerationBudget, Error, Gate, IdAllocator, OpMode};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogiczonoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    BudgetExceeded = 5,
    InvalidArgument = 6,
    Io = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogiczonoGate {
    Xor = 0,
    And = 1,
    Or = 2,
    Xnor = 3,
    Nand = 4,
    Nor = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogiczonoMode {
    Exact = 0,
    Minkowski = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogiczonoRep {
    Lz = 0,
    Plz = 1,
    Cplz = 2,
}

/// Source of fresh factor identifiers. Sets combined in one operation
/// should come from the same allocator.
pub struct LogiczonoAllocator {
    inner: IdAllocator,
}

pub struct LogiczonoSet {
    inner: Cplz,
}

impl From<LogiczonoGate> for Gate {
    fn from(g: LogiczonoGate) -> Gate {
        match g {
            LogiczonoGate::Xor => Gate::Xor,
            LogiczonoGate::And => Gate::And,
            LogiczonoGate::Or => Gate::Or,
            LogiczonoGate::Xnor => Gate::Xnor,
            LogiczonoGate::Nand => Gate::Nand,
            LogiczonoGate::Nor => Gate::Nor,
        }
    }
}

impl From<LogiczonoMode> for OpMode {
    fn from(m: LogiczonoMode) -> OpMode {
        match m {
            LogiczonoMode::Exact => OpMode::Exact,
            LogiczonoMode::Minkowski => OpMode::Minkowski,
        }
    }
}

impl From<LogiczonoRep> for SetKind {
    fn from(r: LogiczonoRep) -> SetKind {
        match r {
            LogiczonoRep::Lz => SetKind::Lz,
            LogiczonoRep::Plz => SetKind::Plz,
            LogiczonoRep::Cplz => SetKind::Cplz,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(LogiczonoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match &e {
            Error::Dimension { .. } => LogiczonoStatus::Dimension,
            Error::BudgetExceeded { .. } => LogiczonoStatus::BudgetExceeded,
            Error::Syntax { .. }
            | Error::UndeclaredVariable { .. }
            | Error::WidthMismatch { .. }
            | Error::DuplicateUpdate { .. }
            | Error::DuplicateDeclaration { .. }
            | Error::MissingUpdate(_)
            | Error::Json(_) => LogiczonoStatus::Parse,
            Error::Io(_) => LogiczonoStatus::Io,
            Error::Internal(_) => LogiczonoStatus::Internal,
            _ => LogiczonoStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LogiczonoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LogiczonoStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            LogiczonoStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(LogiczonoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(LogiczonoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_set(out: *mut *mut LogiczonoSet, set: Cplz) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(LogiczonoSet { inner: set })))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(LogiczonoStatus::Internal, "string contains NUL".into()))?;
    put(out, c.into_raw())
}

fn budget(max_factors: usize) -> Result<EnumerationBudget, Failure> {
    let b = EnumerationBudget::default();
    if max_factors == 0 {
        Ok(b)
    } else {
        Ok(b.with_max_factors(max_factors)?)
    }
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn logiczono_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn logiczono_allocator_new() -> *mut LogiczonoAllocator {
    Box::into_raw(Box::new(LogiczonoAllocator {
        inner: IdAllocator::new(),
    }))
}

/// # Safety
/// `alloc` must be null or come from `logiczono_allocator_new`.
#[no_mangle]
pub unsafe extern "C" fn logiczono_allocator_free(alloc: *mut LogiczonoAllocator) {
    if !alloc.is_null() {
        drop(Box::from_raw(alloc));
    }
}

/// # Safety
/// `set` must be null or a handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_free(set: *mut LogiczonoSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn logiczono_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a set in the JSON exchange format.
///
/// # Safety
/// Pointers must be valid; `json` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_from_json(
    alloc: *const LogiczonoAllocator,
    json: *const c_char,
    out: *mut *mut LogiczonoSet,
) -> LogiczonoStatus {
    guard(|| {
        let alloc = deref(alloc, "allocator")?;
        let set = AnySet::from_json(text(json, "json")?)?.to_cplz(&alloc.inner)?;
        put_set(out, set)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_to_json(set: *const LogiczonoSet, out: *mut *mut c_char) -> LogiczonoStatus {
    guard(|| put_string(out, to_json(&deref(set, "set")?.inner)))
}

/// # Safety
/// `set` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_dim(set: *const LogiczonoSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.dim())
}

/// # Safety
/// `set` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_num_generators(set: *const LogiczonoSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.num_generators())
}

/// # Safety
/// `set` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_num_factors(set: *const LogiczonoSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.num_factors())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_not(set: *const LogiczonoSet, out: *mut *mut LogiczonoSet) -> LogiczonoStatus {
    guard(|| put_set(out, negate(&deref(set, "set")?.inner)))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_gate(
    alloc: *const LogiczonoAllocator,
    gate: LogiczonoGate,
    mode: LogiczonoMode,
    a: *const LogiczonoSet,
    b: *const LogiczonoSet,
    out: *mut *mut LogiczonoSet,
) -> LogiczonoStatus {
    guard(|| {
        let alloc = deref(alloc, "allocator")?;
        let set = apply_gate(
            gate.into(),
            &deref(a, "a")?.inner,
            &deref(b, "b")?.inner,
            &alloc.inner,
            mode.into(),
        )?;
        put_set(out, set)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_intersect(
    alloc: *const LogiczonoAllocator,
    a: *const LogiczonoSet,
    b: *const LogiczonoSet,
    out: *mut *mut LogiczonoSet,
) -> LogiczonoStatus {
    guard(|| {
        let alloc = deref(alloc, "allocator")?;
        put_set(out, intersect(&deref(a, "a")?.inner, &deref(b, "b")?.inner, &alloc.inner)?)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_canonicalize(
    set: *const LogiczonoSet,
    out: *mut *mut LogiczonoSet,
) -> LogiczonoStatus {
    guard(|| put_set(out, canonicalize(&deref(set, "set")?.inner)))
}

/// All points as a JSON array of bitstrings. `max_factors == 0` keeps the
/// default budget.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_enumerate(
    set: *const LogiczonoSet,
    max_factors: usize,
    out: *mut *mut c_char,
) -> LogiczonoStatus {
    guard(|| {
        let points = enumerate_points(&deref(set, "set")?.inner, &budget(max_factors)?)?;
        put_string(out, points.to_json())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_is_empty(
    set: *const LogiczonoSet,
    max_factors: usize,
    out: *mut bool,
) -> LogiczonoStatus {
    guard(|| put(out, is_empty(&deref(set, "set")?.inner, &budget(max_factors)?)?))
}

/// `point` is a bitstring as long as the set's dimension.
///
/// # Safety
/// Pointers must be valid; `point` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn logiczono_set_contains(
    set: *const LogiczonoSet,
    point: *const c_char,
    max_factors: usize,
    out: *mut bool,
) -> LogiczonoStatus {
    guard(|| {
        let x: BitVector = text(point, "point")?.parse()?;
        put(out, contains(&deref(set, "set")?.inner, &x, &budget(max_factors)?)?)
    })
}

/// Runs a reachability analysis and returns the JSON report. `inputs_json`
/// and `unsafe_json` may be null.
///
/// # Safety
/// Non-null pointers must be valid NUL-terminated strings.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn logiczono_reach(
    net_text: *const c_char,
    init_json: *const c_char,
    inputs_json: *const c_char,
    steps: usize,
    rep: LogiczonoRep,
    mode: LogiczonoMode,
    enumerate: bool,
    unsafe_json: *const c_char,
    max_factors: usize,
    out: *mut *mut c_char,
) -> LogiczonoStatus {
    guard(|| {
        let net = parse_network(text(net_text, "network")?)?;
        let init = parse_bindings(text(init_json, "initial sets")?)?;
        let inputs = if inputs_json.is_null() {
            InputSchedule::default()
        } else {
            InputSchedule::from_json(text(inputs_json, "input sets")?)?
        };
        let problem = ReachProblem::new(net, init, inputs, steps)?;
        let alloc = IdAllocator::new();
        let budget = budget(max_factors)?;
        let opts = ReachOptions {
            rep: rep.into(),
            mode: mode.into(),
            enumerate,
            budget,
        };
        let result = reach(&problem, &opts, &alloc)?;
        let mut verdicts = Vec::new();
        if !unsafe_json.is_null() {
            for spec in SafetySpec::from_json(text(unsafe_json, "unsafe sets")?, &alloc)? {
                verdicts.extend(check_unsafe(&result, &spec, &alloc, &budget)?);
            }
        }
        put_string(out, result.report(verdicts).to_json())
    })
}
