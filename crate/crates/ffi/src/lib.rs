//! C interface: opaque handles, status codes and a per-thread error message.
//!
//! Every function returns a [`StablabStatus`]; results go through out
//! pointers. Handles and strings returned here must be released with the
//! matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stablab::periods::{has_aperiodic_point, multiples, structural_bound};
use stablab::realizer::realize;
use stablab::semilinear::parse_set;
use stablab::tileset::prune_essential;
use stablab::z2::{periodize, Nn2Sft, PeriodVector};
use stablab::{Error, SemilinearSet, TilesetGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StablabStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    EmptySft = 4,
    BoundTooSmall = 5,
    NotRealizable = 6,
    /// The requested object does not exist (e.g. no stabilized configuration).
    Absent = 7,
    InvalidArgument = 8,
    Panic = 9,
}

/// Tileset graph handle.
pub struct StablabGraph(TilesetGraph);

/// Semilinear set handle.
pub struct StablabSet(SemilinearSet);

/// Nearest-neighbor ℤ² SFT handle.
pub struct StablabSft2(Nn2Sft);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: StablabStatus, msg: impl Into<String>) -> StablabStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> StablabStatus {
    let status = match e {
        Error::Parse { .. } | Error::Group(_) => StablabStatus::Parse,
        Error::EmptySft => StablabStatus::EmptySft,
        Error::BoundTooSmall { .. } => StablabStatus::BoundTooSmall,
        Error::NotRealizable(_) => StablabStatus::NotRealizable,
        _ => StablabStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting panics into `Panic`.
fn guard(f: impl FnOnce() -> StablabStatus) -> StablabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(StablabStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, StablabStatus> {
    if s.is_null() {
        return Err(fail(StablabStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(StablabStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> StablabStatus {
    *out = Box::into_raw(Box::new(value));
    StablabStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> StablabStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            StablabStatus::Ok
        }
        Err(_) => fail(StablabStatus::InvalidArgument, "string contains NUL"),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(StablabStatus::NullArgument, concat!("null argument `", stringify!($p), "`"));
        })+
    };
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// call into this library from the same thread.
#[no_mangle]
pub extern "C" fn stablab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stablab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a tileset graph from its text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_graph_parse(text: *const c_char, out: *mut *mut StablabGraph) -> StablabStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match TilesetGraph::parse(text) {
            Ok(g) => put(out, StablabGraph(g)),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stablab_graph_free(g: *mut StablabGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Text form of the graph; free with `stablab_string_free`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_graph_to_string(g: *const StablabGraph, out: *mut *mut c_char) -> StablabStatus {
    guard(|| {
        non_null!(g, out);
        put_string(out, (*g).0.to_string())
    })
}

/// Set of multiples of the (pruned) graph, certified up to `bound`; a bound
/// of 0 uses the structural bound.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_graph_multiples(
    g: *const StablabGraph,
    bound: u64,
    out: *mut *mut StablabSet,
) -> StablabStatus {
    guard(|| {
        non_null!(g, out);
        let pruned = prune_essential(&(*g).0);
        if pruned.is_empty() {
            return from_error(Error::EmptySft);
        }
        let bound = if bound == 0 { structural_bound(&pruned) } else { bound };
        match multiples(&pruned, bound) {
            Ok(m) => put(out, StablabSet(m)),
            Err(e) => from_error(e),
        }
    })
}

/// Whether the SFT of the (pruned) graph has an aperiodic point.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_graph_has_aperiodic_point(g: *const StablabGraph, out: *mut bool) -> StablabStatus {
    guard(|| {
        non_null!(g, out);
        match has_aperiodic_point(&prune_essential(&(*g).0)) {
            Ok(b) => {
                *out = b;
                StablabStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses a set expression such as `{0} + 3(N+2)`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_set_parse(text: *const c_char, out: *mut *mut StablabSet) -> StablabStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_set(text) {
            Ok(s) => put(out, StablabSet(s)),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stablab_set_free(s: *mut StablabSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Normal form in set syntax; free with `stablab_string_free`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_set_to_string(s: *const StablabSet, out: *mut *mut c_char) -> StablabStatus {
    guard(|| {
        non_null!(s, out);
        put_string(out, (*s).0.to_string())
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_set_member(s: *const StablabSet, n: u64, out: *mut bool) -> StablabStatus {
    guard(|| {
        non_null!(s, out);
        *out = (*s).0.member(n);
        StablabStatus::Ok
    })
}

/// Tileset graph whose set of multiples is `s`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_realize(s: *const StablabSet, out: *mut *mut StablabGraph) -> StablabStatus {
    guard(|| {
        non_null!(s, out);
        match realize(&(*s).0) {
            Ok(g) => put(out, StablabGraph(g)),
            Err(e) => from_error(e),
        }
    })
}

/// Parses a ℤ² SFT (`alphabet:`, `hforbid:`, `vforbid:` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_sft2_parse(text: *const c_char, out: *mut *mut StablabSft2) -> StablabStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Nn2Sft::parse(text) {
            Ok(s) => put(out, StablabSft2(s)),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stablab_sft2_free(s: *mut StablabSft2) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Torus witness, as JSON `{"p":..,"q":..,"rows":[..]}`, of a configuration
/// stabilized by `(p, q)`. Returns `Absent` when there is none.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stablab_sft2_periodize(
    s: *const StablabSft2,
    p: i64,
    q: i64,
    out_json: *mut *mut c_char,
) -> StablabStatus {
    guard(|| {
        non_null!(s, out_json);
        let sft = &(*s).0;
        let v = match PeriodVector::new(p, q) {
            Ok(v) => v,
            Err(e) => return from_error(e),
        };
        match periodize(sft, v) {
            Some(cfg) => put_string(out_json, cfg.to_witness(sft).to_json()),
            None => fail(StablabStatus::Absent, format!("no configuration is stabilized by {v}")),
        }
    })
}
