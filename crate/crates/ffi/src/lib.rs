//! C ABI for the bigramsey library.
//!
//! Conventions:
//! - Objects cross the boundary as opaque handles (`BrTuple*`, `BrPumpkin*`)
//!   created by `br_*_parse`/`br_pp_colour` and released by `br_*_free`.
//! - Every fallible call returns a `BrStatus`; results come back through out
//!   parameters. On failure, `br_last_error()` returns a thread-local
//!   message (free it with `br_string_free`).
//! - Structured data crosses as JSON in the same schemas the CLI uses,
//!   rationals as `"p/q"` strings.
//!
//! The header is generated by cbindgen into `include/bigramsey.h` at build
//! time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bigramsey::embeddings::intertwine_count;
use bigramsey::harness::{enumerate_rigid_surjections, hj_line_check, HarnessError};
use bigramsey::pumpkin::{
    pp_colour, pumpkin_dist, pumpkin_valid, pumpkin_witness, Pumpkin, TupleLinf,
};
use bigramsey::scalar::Scalar;

/// Status codes mirroring the CLI exit-code contract.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BrStatus {
    /// Success.
    BrOk = 0,
    /// Semantically invalid input (sphere condition, dimension mismatch, …).
    BrSemantic = 1,
    /// Malformed JSON or rational literal.
    BrParse = 2,
    /// Exhaustion guard exceeded.
    BrGuard = 3,
    /// A required pointer argument was null.
    BrNullPointer = 4,
    /// Internal panic; the operation did not complete.
    BrInternal = 5,
}

/// Opaque handle around a validated tuple.
pub struct BrTuple(TupleLinf);

/// Opaque handle around a pumpkin.
pub struct BrPumpkin(Pumpkin);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn br_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Copy of the last error message on this thread, or null when none.
/// Free with `br_string_free`.
#[no_mangle]
pub extern "C" fn br_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string allocated by this library.
///
/// # Safety
/// `s` must have been returned by a `br_*` function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn br_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, BrStatus> {
    if ptr.is_null() {
        set_error("null pointer".into());
        return Err(BrStatus::BrNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_error(format!("invalid utf-8: {e}"));
        BrStatus::BrParse
    })
}

fn guarded<F: FnOnce() -> BrStatus>(f: F) -> BrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            BrStatus::BrInternal
        }
    }
}

fn emit_string(s: String, out: *mut *mut c_char) -> BrStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            clear_error();
            BrStatus::BrOk
        }
        Err(e) => {
            set_error(format!("string contains NUL: {e}"));
            BrStatus::BrInternal
        }
    }
}

/// Parse tuple JSON (`{"d":…,"n":…,"entries":[[…]]}`) into a handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn br_tuple_parse(json: *const c_char, out: *mut *mut BrTuple) -> BrStatus {
    if out.is_null() {
        set_error("null out pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match serde_json::from_str::<TupleLinf>(text) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(BrTuple(t)));
                clear_error();
                BrStatus::BrOk
            }
            Err(e) => {
                set_error(e.to_string());
                BrStatus::BrParse
            }
        }
    })
}

/// Serialize a tuple handle back to JSON.
///
/// # Safety
/// `t` must be a live handle from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn br_tuple_to_json(t: *const BrTuple, out: *mut *mut c_char) -> BrStatus {
    if t.is_null() || out.is_null() {
        set_error("null pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| emit_string(serde_json::to_string(&(*t).0).expect("serializes"), out))
}

/// # Safety
/// `t` must be a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn br_tuple_free(t: *mut BrTuple) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Colour a sphere tuple by its pumpkin.
///
/// # Safety
/// `t` must be a live tuple handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn br_pp_colour(t: *const BrTuple, out: *mut *mut BrPumpkin) -> BrStatus {
    if t.is_null() || out.is_null() {
        set_error("null pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| match pp_colour(&(*t).0) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(BrPumpkin(p)));
            clear_error();
            BrStatus::BrOk
        }
        Err(e) => {
            set_error(e.to_string());
            BrStatus::BrSemantic
        }
    })
}

/// Parse pumpkin JSON (`{"dim":…,"stages":[…],"final":[…]}`).
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn br_pumpkin_parse(
    json: *const c_char,
    out: *mut *mut BrPumpkin,
) -> BrStatus {
    if out.is_null() {
        set_error("null out pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match serde_json::from_str::<Pumpkin>(text) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(BrPumpkin(p)));
                clear_error();
                BrStatus::BrOk
            }
            Err(e) => {
                set_error(e.to_string());
                BrStatus::BrParse
            }
        }
    })
}

/// # Safety
/// `p` must be a live pumpkin handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn br_pumpkin_to_json(
    p: *const BrPumpkin,
    out: *mut *mut c_char,
) -> BrStatus {
    if p.is_null() || out.is_null() {
        set_error("null pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| emit_string(serde_json::to_string(&(*p).0).expect("serializes"), out))
}

/// Structural diagnosis as JSON: `"valid"`, `{"partial":…}` or
/// `{"malformed":…}`.
///
/// # Safety
/// `p` must be a live pumpkin handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn br_pumpkin_diagnosis(
    p: *const BrPumpkin,
    out: *mut *mut c_char,
) -> BrStatus {
    if p.is_null() || out.is_null() {
        set_error("null pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| {
        let d = pumpkin_valid(&(*p).0);
        emit_string(serde_json::to_string(&d).expect("serializes"), out)
    })
}

/// Certified chain distance within `eps` (a `"p/q"` rational), returned as a
/// rational string.
///
/// # Safety
/// `a` and `b` must be live pumpkin handles; `eps` NUL-terminated; `out`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn br_pumpkin_dist(
    a: *const BrPumpkin,
    b: *const BrPumpkin,
    eps: *const c_char,
    out: *mut *mut c_char,
) -> BrStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        set_error("null pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| {
        let eps_text = match read_str(eps) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let eps: Scalar = match eps_text.parse() {
            Ok(v) => v,
            Err(e) => {
                set_error(format!("eps: {e}"));
                return BrStatus::BrParse;
            }
        };
        match pumpkin_dist(&(*a).0, &(*b).0, &eps) {
            Ok(d) => emit_string(d.to_string(), out),
            Err(e) => {
                set_error(e.to_string());
                BrStatus::BrSemantic
            }
        }
    })
}

/// Sphere tuple reproducing a valid pumpkin through the colouring.
///
/// # Safety
/// `p` must be a live pumpkin handle; `eps` NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn br_pumpkin_witness(
    p: *const BrPumpkin,
    eps: *const c_char,
    out: *mut *mut BrTuple,
) -> BrStatus {
    if p.is_null() || out.is_null() {
        set_error("null pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| {
        let eps_text = match read_str(eps) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let eps: Scalar = match eps_text.parse() {
            Ok(v) => v,
            Err(e) => {
                set_error(format!("eps: {e}"));
                return BrStatus::BrParse;
            }
        };
        match pumpkin_witness(&(*p).0, &eps) {
            Ok(w) => {
                *out = Box::into_raw(Box::new(BrTuple(w)));
                clear_error();
                BrStatus::BrOk
            }
            Err(e) => {
                set_error(e.to_string());
                BrStatus::BrSemantic
            }
        }
    })
}

/// # Safety
/// `p` must be a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn br_pumpkin_free(p: *mut BrPumpkin) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of rigid surjections `[m] → [n]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn br_rigid_count(m: usize, n: usize, out: *mut u64) -> BrStatus {
    if out.is_null() {
        set_error("null out pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| match enumerate_rigid_surjections(m, n) {
        Ok(list) => {
            *out = list.len() as u64;
            clear_error();
            BrStatus::BrOk
        }
        Err(e) => {
            set_error(e.to_string());
            BrStatus::BrSemantic
        }
    })
}

/// Exhaustive combinatorial-line check; `*out` is 1 when every colouring
/// admits a monochromatic line.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn br_hj_line_check(
    alphabet: usize,
    colours: usize,
    len: usize,
    max_colourings: u64,
    out: *mut u8,
) -> BrStatus {
    if out.is_null() {
        set_error("null out pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(
        || match hj_line_check(alphabet, colours, len, max_colourings as u128) {
            Ok(v) => {
                *out = u8::from(v);
                clear_error();
                BrStatus::BrOk
            }
            Err(e @ HarnessError::GuardExceeded { .. }) => {
                set_error(e.to_string());
                BrStatus::BrGuard
            }
            Err(e) => {
                set_error(e.to_string());
                BrStatus::BrSemantic
            }
        },
    )
}

/// Intertwining count of a disjointly supported pair, given as JSON
/// `{"x":{"support":[[i,"p/q"],…]},"y":{…}}`.
///
/// # Safety
/// `pair_json` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn br_intertwine_count(
    pair_json: *const c_char,
    out: *mut u64,
) -> BrStatus {
    if out.is_null() {
        set_error("null out pointer".into());
        return BrStatus::BrNullPointer;
    }
    guarded(|| {
        let text = match read_str(pair_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        #[derive(serde::Deserialize)]
        struct Pair {
            x: bigramsey::embeddings::SupportedVector,
            y: bigramsey::embeddings::SupportedVector,
        }
        let pair: Pair = match serde_json::from_str(text) {
            Ok(p) => p,
            Err(e) => {
                set_error(e.to_string());
                return BrStatus::BrParse;
            }
        };
        match intertwine_count(&pair.x, &pair.y) {
            Ok(c) => {
                *out = c as u64;
                clear_error();
                BrStatus::BrOk
            }
            Err(e) => {
                set_error(e.to_string());
                BrStatus::BrSemantic
            }
        }
    })
}
