//! C interface to `linheight`.
//!
//! Instances and results are opaque handles created and freed by this library.
//! Every fallible call returns an [`LcStatus`]; on failure a description is
//! available from [`lc_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use linheight::io::{parse_building, parse_instance, InstanceDocument};
use linheight::run::{self, ResultDocument, Status};
use linheight::Error;

/// Return codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcStatus {
    Ok = 0,
    /// Malformed input.
    Schema = 1,
    /// Some method could not run on this input.
    Hypothesis = 2,
    /// Two methods disagreed.
    Mismatch = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    /// A bug: the library panicked.
    Internal = 6,
}

impl From<Status> for LcStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => LcStatus::Ok,
            Status::Schema => LcStatus::Schema,
            Status::HypothesisFailed => LcStatus::Hypothesis,
            Status::Mismatch => LcStatus::Mismatch,
        }
    }
}

/// A parsed intersection problem.
pub struct LcInstance {
    doc: InstanceDocument,
}

/// The outcome of [`lc_intersect`].
pub struct LcResult {
    doc: ResultDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::HypothesesFailed(_) => LcStatus::Hypothesis,
            _ => LcStatus::Schema,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording its error message and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<LcStatus, Failure>) -> LcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            LcStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(LcStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(LcStatus::InvalidUtf8, e.to_string()))
}

fn null_pointer(what: &str) -> Failure {
    Failure(LcStatus::NullPointer, format!("null {what}"))
}

/// Parses a JSON instance document into `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer. The
/// handle written to `*out` must be released with [`lc_instance_free`].
#[no_mangle]
pub unsafe extern "C" fn lc_instance_from_json(json: *const c_char, out: *mut *mut LcInstance) -> LcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_pointer("output pointer"));
        }
        *out = ptr::null_mut();
        let doc = parse_instance(read_str(json)?)?;
        *out = Box::into_raw(Box::new(LcInstance { doc }));
        Ok(LcStatus::Ok)
    })
}

/// # Safety
/// `instance` must be null or a handle from [`lc_instance_from_json`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn lc_instance_free(instance: *mut LcInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Evaluates an instance at its place. A result handle is produced whenever the
/// input is well formed, including when some method could not run or the
/// methods disagree; the return value is then the result's status.
///
/// # Safety
/// `instance` must be a live handle and `out` a valid pointer. The handle
/// written to `*out` must be released with [`lc_result_free`].
#[no_mangle]
pub unsafe extern "C" fn lc_intersect(instance: *const LcInstance, out: *mut *mut LcResult) -> LcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_pointer("output pointer"));
        }
        *out = ptr::null_mut();
        let instance = instance.as_ref().ok_or_else(|| null_pointer("instance"))?;
        let doc = run::intersect(&instance.doc, false)?;
        let status = LcStatus::from(doc.status());
        // Diagnostics stay readable through lc_last_error_message.
        if status != LcStatus::Ok {
            set_error(match &doc {
                ResultDocument::Finite(r) => r.diagnostics.join("; "),
                ResultDocument::Archimedean(r) => r.diagnostics.join("; "),
            });
        }
        *out = Box::into_raw(Box::new(LcResult { doc }));
        Ok(status)
    })
}

/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn lc_result_status(result: *const LcResult) -> LcStatus {
    match result.as_ref() {
        Some(r) => r.doc.status().into(),
        None => LcStatus::NullPointer,
    }
}

/// Writes the agreed intersection number to `*out`. Finite-place values are
/// integers returned as doubles.
///
/// # Safety
/// `result` must be a live result handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lc_result_value(result: *const LcResult, out: *mut f64) -> LcStatus {
    guard(|| {
        let result = result.as_ref().ok_or_else(|| null_pointer("result"))?;
        let out = out.as_mut().ok_or_else(|| null_pointer("output pointer"))?;
        match result.doc.value() {
            Some(v) => {
                *out = v;
                Ok(LcStatus::Ok)
            }
            None => Err(Failure(
                result.doc.status().into(),
                "no value: the methods did not produce an agreed number".into(),
            )),
        }
    })
}

/// The result as a JSON document, or null on failure. Free with
/// [`lc_string_free`].
///
/// # Safety
/// `result` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn lc_result_to_json(result: *const LcResult) -> *mut c_char {
    let mut text = ptr::null_mut();
    guard(|| {
        let result = result.as_ref().ok_or_else(|| null_pointer("result"))?;
        let json = serde_json::to_string(&result.doc).map_err(|e| Failure(LcStatus::Internal, e.to_string()))?;
        text = CString::new(json).map_err(|e| Failure(LcStatus::Internal, e.to_string()))?.into_raw();
        Ok(LcStatus::Ok)
    });
    text
}

/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn lc_result_free(result: *mut LcResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn lc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Combinatorial distance between the lattice classes `x` and `y` of a
/// building query document (`{"prime": …, "x": …, "y": …}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lc_building_distance(json: *const c_char, out: *mut u64) -> LcStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null_pointer("output pointer"))?;
        let doc = parse_building(read_str(json)?)?;
        let value = run::building_distance(&doc)?;
        *out = value["distance"]
            .as_u64()
            .ok_or_else(|| Failure(LcStatus::Internal, "distance missing from report".into()))?;
        Ok(LcStatus::Ok)
    })
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn lc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
