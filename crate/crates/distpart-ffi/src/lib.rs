//! C ABI over the distpart library.
//!
//! Conventions: every fallible call returns a `DpStatus`; results are
//! written through out-pointers. Handles are opaque and must be released
//! with their matching `_free` function. Strings returned through
//! out-pointers are NUL-terminated, owned by the caller, and must be
//! released with `dp_string_free`. On any non-OK status a thread-local
//! message is set and can be fetched with `dp_last_error_message`.
//!
//! A node budget argument of 0 selects the library default.

use distpart::construct;
use distpart::hypercore::engine;
use distpart::hypercore::LabeledHypergraph;
use distpart::partition;
use distpart::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Write as _;
use std::panic::{self, AssertUnwindSafe};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Text input failed to parse.
    ParseError = 3,
    /// Arguments fell outside the supported domain.
    DomainError = 4,
    /// The search node budget was exhausted before an answer was reached.
    BudgetExceeded = 5,
    /// A constructed object failed its certification postcondition.
    CertificationFailed = 6,
    /// A panic was caught at the ABI boundary.
    InternalError = 7,
}

/// Opaque handle to a labeled hypergraph.
pub struct DpHypergraph {
    inner: LabeledHypergraph,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into());
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().clear());
}

fn status_of(err: &Error) -> DpStatus {
    match err {
        Error::Parse(_) | Error::NotRegular(_) => DpStatus::ParseError,
        Error::BudgetExceeded(_) => DpStatus::BudgetExceeded,
        Error::CertificationFailed(_) | Error::SymmetricInput(_) => DpStatus::CertificationFailed,
        _ => DpStatus::DomainError,
    }
}

fn fail(err: Error) -> DpStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Runs `f` with panics converted to `InternalError` and the error slot
/// cleared on entry so stale messages never survive a successful call.
fn guarded(f: impl FnOnce() -> DpStatus) -> DpStatus {
    clear_error();
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic caught at the ABI boundary");
            DpStatus::InternalError
        }
    }
}

fn write_string(out: *mut *mut c_char, s: String) -> DpStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            DpStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            DpStatus::InternalError
        }
    }
}

fn write_handle(out: *mut *mut DpHypergraph, h: LabeledHypergraph) -> DpStatus {
    let boxed = Box::new(DpHypergraph { inner: h });
    unsafe { *out = Box::into_raw(boxed) };
    DpStatus::Ok
}

fn effective_budget(budget: u64) -> u64 {
    if budget == 0 {
        engine::DEFAULT_NODE_BUDGET
    } else {
        budget
    }
}

/// Returns the library version as a static NUL-terminated string.
/// The pointer is owned by the library and must not be freed.
#[no_mangle]
pub extern "C" fn dp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Returns the message for the most recent failure on this thread, or an
/// empty string if the last call succeeded. The caller owns the returned
/// string and must release it with `dp_string_free`.
#[no_mangle]
pub extern "C" fn dp_last_error_message() -> *mut c_char {
    let message = LAST_ERROR.with(|slot| slot.borrow().clone());
    CString::new(message).map(CString::into_raw).unwrap_or(std::ptr::null_mut())
}

/// Releases a string previously returned through an out-pointer.
///
/// # Safety
/// `s` must be a pointer returned by this library and not yet freed,
/// or NULL (in which case the call is a no-op).
#[no_mangle]
pub unsafe extern "C" fn dp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses the text form of a labeled hypergraph into a fresh handle.
///
/// # Safety
/// `text` must point to a NUL-terminated byte string and `out` must be a
/// valid writable pointer. On success `*out` owns the new handle.
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_parse(
    text: *const c_char,
    out: *mut *mut DpHypergraph,
) -> DpStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            set_error("text and out must be non-NULL");
            return DpStatus::NullPointer;
        }
        let raw = unsafe { CStr::from_ptr(text) };
        let Ok(s) = raw.to_str() else {
            set_error("text is not valid UTF-8");
            return DpStatus::InvalidUtf8;
        };
        match LabeledHypergraph::parse(s) {
            Ok(h) => write_handle(out, h),
            Err(e) => fail(e),
        }
    })
}

/// Releases a hypergraph handle.
///
/// # Safety
/// `h` must be a handle returned by this library and not yet freed,
/// or NULL (in which case the call is a no-op).
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_free(h: *mut DpHypergraph) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Serializes a hypergraph back to its canonical text form.
///
/// # Safety
/// `h` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_to_text(
    h: *const DpHypergraph,
    out: *mut *mut c_char,
) -> DpStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            set_error("h and out must be non-NULL");
            return DpStatus::NullPointer;
        }
        let text = unsafe { &(*h).inner }.to_text();
        write_string(out, text)
    })
}

/// Writes the number of vertices of `h` to `*out`.
///
/// # Safety
/// `h` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_vertex_count(
    h: *const DpHypergraph,
    out: *mut u64,
) -> DpStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            set_error("h and out must be non-NULL");
            return DpStatus::NullPointer;
        }
        unsafe { *out = (*h).inner.vertex_count() as u64 };
        DpStatus::Ok
    })
}

/// Writes the number of edges of `h` to `*out`.
///
/// # Safety
/// `h` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_edge_count(
    h: *const DpHypergraph,
    out: *mut u64,
) -> DpStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            set_error("h and out must be non-NULL");
            return DpStatus::NullPointer;
        }
        unsafe { *out = (*h).inner.edge_count() as u64 };
        DpStatus::Ok
    })
}

/// Writes the label alphabet size m2 of `h` to `*out`.
///
/// # Safety
/// `h` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_m2(h: *const DpHypergraph, out: *mut u32) -> DpStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            set_error("h and out must be non-NULL");
            return DpStatus::NullPointer;
        }
        unsafe { *out = (*h).inner.m2() };
        DpStatus::Ok
    })
}

/// Decides whether `h` has a trivial label-preserving automorphism group.
/// `budget` caps search nodes; pass 0 for the library default.
///
/// # Safety
/// `h` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_is_asymmetric(
    h: *const DpHypergraph,
    budget: u64,
    out: *mut bool,
) -> DpStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            set_error("h and out must be non-NULL");
            return DpStatus::NullPointer;
        }
        let inner = unsafe { &(*h).inner };
        match engine::automorphisms_with_budget(inner, effective_budget(budget)) {
            Ok(report) => {
                unsafe { *out = report.is_asymmetric };
                DpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Writes the automorphism group order of `h` as a decimal string.
/// `budget` caps search nodes; pass 0 for the library default.
///
/// # Safety
/// `h` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_group_order(
    h: *const DpHypergraph,
    budget: u64,
    out: *mut *mut c_char,
) -> DpStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            set_error("h and out must be non-NULL");
            return DpStatus::NullPointer;
        }
        let inner = unsafe { &(*h).inner };
        match engine::automorphisms_with_budget(inner, effective_budget(budget)) {
            Ok(report) => write_string(out, report.group_order.to_string()),
            Err(e) => fail(e),
        }
    })
}

/// Writes a lowercase hex encoding of the canonical form of `h`, an
/// isomorphism invariant: two hypergraphs are isomorphic exactly when
/// their canonical hex strings agree.
/// `budget` caps search nodes; pass 0 for the library default.
///
/// # Safety
/// `h` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_hypergraph_canonical_hex(
    h: *const DpHypergraph,
    budget: u64,
    out: *mut *mut c_char,
) -> DpStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            set_error("h and out must be non-NULL");
            return DpStatus::NullPointer;
        }
        let inner = unsafe { &(*h).inner };
        match engine::canonical_form_with_budget(inner, effective_budget(budget)) {
            Ok(bytes) => {
                let mut hex = String::with_capacity(bytes.len() * 2);
                for b in &bytes {
                    let _ = write!(hex, "{b:02x}");
                }
                write_string(out, hex)
            }
            Err(e) => fail(e),
        }
    })
}

/// Formats the derived parameters for (n1, m2) as `j=.. k=.. r=..` with
/// `r` in lowest-terms `num/den` form when it is not an integer.
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_params_format(n1: u32, m2: u32, out: *mut *mut c_char) -> DpStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out must be non-NULL");
            return DpStatus::NullPointer;
        }
        match partition::params(n1, m2) {
            Ok(p) => write_string(out, format!("j={} k={} r={}", p.j, p.k, p.r)),
            Err(e) => fail(e),
        }
    })
}

/// Builds and certifies the asymmetric labeled ring with the given edge
/// count, returning the hypergraph handle.
///
/// # Safety
/// `out` must be a valid writable pointer. On success `*out` owns the
/// new handle.
#[no_mangle]
pub unsafe extern "C" fn dp_build_ring(
    n1: u32,
    m2: u32,
    edges: u64,
    out: *mut *mut DpHypergraph,
) -> DpStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out must be non-NULL");
            return DpStatus::NullPointer;
        }
        let report = match construct::RingSpec::new(n1, m2, edges)
            .and_then(|spec| construct::ring_report(&spec))
        {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        write_handle(out, report.hypergraph)
    })
}

/// Builds and certifies the two-label chain on m1 edges (cell size 3),
/// returning the hypergraph handle.
///
/// # Safety
/// `out` must be a valid writable pointer. On success `*out` owns the
/// new handle.
#[no_mangle]
pub unsafe extern "C" fn dp_build_m2_2_chain(m1: u64, out: *mut *mut DpHypergraph) -> DpStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out must be non-NULL");
            return DpStatus::NullPointer;
        }
        match construct::build_m2_2_chain(m1, 3) {
            Ok(report) => write_handle(out, report.hypergraph),
            Err(e) => fail(e),
        }
    })
}
