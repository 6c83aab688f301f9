//! C ABI over the rrtd library.
//!
//! Conventions: every fallible function returns an [`RrtdStatus`] code and
//! writes results through out-pointers; `RRTD_OK` (0) means every out-pointer
//! was written. On failure a thread-local message is set, readable via
//! [`rrtd_last_error`] until the next failure on the same thread. Graphs are
//! opaque handles owned by the caller and released with [`rrtd_graph_free`].
//!
//! No function panics across the boundary; all entry points catch unwinds
//! and convert them to `RRTD_ERR_NUMERIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rrtd::models::{predict, Model, PredictConfig};
use rrtd::rrtd::TaskDistribution;
use rrtd::search::hitting_to;
use rrtd::spectral::spectral_gap;
use rrtd::Error;

/// Status code returned by every fallible FFI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RrtdStatus {
    /// Success; all out-pointers were written.
    RrtdOk = 0,
    /// A required pointer argument was null.
    RrtdErrNull = 1,
    /// Input text could not be parsed (graph6, model tag, distribution tag).
    RrtdErrParse = 2,
    /// Inputs were structurally invalid for the operation.
    RrtdErrDomain = 3,
    /// Computation failed to converge or overflowed its budget.
    RrtdErrNumeric = 4,
    /// The caller's output buffer is too small.
    RrtdErrBuffer = 5,
}

use RrtdStatus::*;

/// Opaque connected-graph handle.
pub struct RrtdGraph(rrtd::Graph);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

fn fail(status: RrtdStatus, msg: &str) -> RrtdStatus {
    set_error(msg);
    status
}

fn fail_with(e: &Error) -> RrtdStatus {
    let status = match e {
        Error::Graph6 { .. } => RrtdErrParse,
        Error::Numeric(_) => RrtdErrNumeric,
        _ => RrtdErrDomain,
    };
    fail(status, &e.to_string())
}

/// Guards an FFI body against panics; a panic becomes `RRTD_ERR_NUMERIC`.
fn guarded(body: impl FnOnce() -> RrtdStatus) -> RrtdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(RrtdErrNumeric, "internal panic"),
    }
}

/// Last error message for this thread as a NUL-terminated string. Valid
/// until the next failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn rrtd_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a graph6 line into a new graph handle. The handle must be released
/// with `rrtd_graph_free`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rrtd_graph_from_graph6(
    text: *const c_char,
    out: *mut *mut RrtdGraph,
) -> RrtdStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return fail(RrtdErrNull, "null pointer argument");
        }
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(t) => t,
            Err(_) => return fail(RrtdErrParse, "graph6 text is not UTF-8"),
        };
        match rrtd::graph::parse_graph6(text.trim()) {
            Ok(g) => {
                unsafe { *out = Box::into_raw(Box::new(RrtdGraph(g))) };
                RrtdOk
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Releases a graph handle. Null is a no-op.
///
/// # Safety
/// `g` must be null or a handle produced by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rrtd_graph_free(g: *mut RrtdGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Number of states in the graph.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rrtd_graph_n(g: *const RrtdGraph, out: *mut usize) -> RrtdStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            return fail(RrtdErrNull, "null pointer argument");
        }
        unsafe { *out = (*g).0.n() };
        RrtdOk
    })
}

/// Per-state predictions for one model, written to `out[0..n]`.
///
/// `model_tag` is one of the CSV tags (e.g. "RRTD-RW", "Degree");
/// `dist_tag` is "all", "distinct", or "nonadjacent". `samples` and `seed`
/// drive the Monte Carlo models and are ignored by exact ones. `out_len`
/// is the capacity of `out` in doubles and must be at least the state count.
///
/// # Safety
/// `g` must be a live handle, the tag pointers valid NUL-terminated strings,
/// and `out` valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn rrtd_predict(
    g: *const RrtdGraph,
    model_tag: *const c_char,
    dist_tag: *const c_char,
    samples: u64,
    seed: u64,
    out: *mut f64,
    out_len: usize,
) -> RrtdStatus {
    guarded(|| {
        if g.is_null() || model_tag.is_null() || dist_tag.is_null() || out.is_null() {
            return fail(RrtdErrNull, "null pointer argument");
        }
        let graph = unsafe { &(*g).0 };
        if out_len < graph.n() {
            return fail(
                RrtdErrBuffer,
                &format!("output capacity {out_len} < {} states", graph.n()),
            );
        }
        let parse_tag = |p: *const c_char| unsafe { CStr::from_ptr(p) }.to_str().ok();
        let (Some(model_tag), Some(dist_tag)) = (parse_tag(model_tag), parse_tag(dist_tag))
        else {
            return fail(RrtdErrParse, "tag is not UTF-8");
        };
        let model: Model = match model_tag.parse::<Model>() {
            Ok(m) => m,
            Err(e) => return fail(RrtdErrParse, &e.to_string()),
        };
        let dist: TaskDistribution = match dist_tag.parse::<TaskDistribution>() {
            Ok(d) => d,
            Err(e) => return fail(RrtdErrParse, &e.to_string()),
        };
        let cfg = PredictConfig { dist, samples, seed, ..PredictConfig::default() };
        match predict(graph, "ffi", model, &cfg) {
            Ok(p) => {
                let dst = unsafe { std::slice::from_raw_parts_mut(out, graph.n()) };
                dst.copy_from_slice(&p.values);
                RrtdOk
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Spectral gap 1 - lambda2 of the normalized adjacency operator.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rrtd_spectral_gap(g: *const RrtdGraph, out: *mut f64) -> RrtdStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            return fail(RrtdErrNull, "null pointer argument");
        }
        match spectral_gap(unsafe { &(*g).0 }) {
            Ok(gap) => {
                unsafe { *out = gap };
                RrtdOk
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Expected steps H(s, z) for a random walk from `s` to first arrival at `z`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rrtd_hitting_time(
    g: *const RrtdGraph,
    s: usize,
    z: usize,
    out: *mut f64,
) -> RrtdStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            return fail(RrtdErrNull, "null pointer argument");
        }
        let graph = unsafe { &(*g).0 };
        if s >= graph.n() || z >= graph.n() {
            return fail(
                RrtdErrDomain,
                &format!("pair ({s},{z}) out of range for n={}", graph.n()),
            );
        }
        match hitting_to(graph, z) {
            Ok(col) => {
                unsafe { *out = col[s] };
                RrtdOk
            }
            Err(e) => fail_with(&e),
        }
    })
}
