//! C ABI over `fspt`.
//!
//! Every function returns an [`FsptStatus`]. On failure the message of the
//! most recent error on the calling thread is available from
//! [`fspt_last_error_message`]. Handles are opaque and owned by the caller,
//! who releases them with the matching `_free` function. Strings returned
//! through `char **` are released with [`fspt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fspt::fmps::{expectation, fmps_index, FermionicMPS, FermionicMpsJson, SiteWord, SymmetryJson};
use fspt::spt::{
    compute_index, index_equal, stack_index, stack_systems, GradedSystem, IndexJson, SPTIndex, SystemJson,
};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FsptStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedInput = 3,
    DomainError = 4,
    Panic = 5,
}

/// A validated graded system.
pub struct FsptSystem(GradedSystem);

/// An index `(κ, 𝔮, [υ])`.
pub struct FsptIndex(SPTIndex);

/// A validated fermionic MPS.
pub struct FsptMps(FermionicMPS);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

struct Failure(FsptStatus, String);

impl From<fspt::Error> for Failure {
    fn from(e: fspt::Error) -> Self {
        let status = if e.is_malformed_input() { FsptStatus::MalformedInput } else { FsptStatus::DomainError };
        Failure(status, e.to_string())
    }
}

fn domain(e: impl Into<fspt::Error>) -> Failure {
    Failure::from(e.into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FsptStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            FsptStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("Panic: internal error");
            FsptStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(FsptStatus::NullPointer, "NullPointer: string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(FsptStatus::InvalidUtf8, "InvalidUtf8: string argument".into()))
}

unsafe fn parse<T: serde::de::DeserializeOwned>(s: *const c_char) -> Result<T, Failure> {
    serde_json::from_str(text(s)?).map_err(|e| Failure(FsptStatus::MalformedInput, format!("MalformedInput: {e}")))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(FsptStatus::NullPointer, "NullPointer: handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(FsptStatus::NullPointer, "NullPointer: output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_json(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string(value).map_err(|e| Failure(FsptStatus::Panic, e.to_string()))?;
    let c = CString::new(s).map_err(|e| Failure(FsptStatus::Panic, e.to_string()))?;
    put(out, c.into_raw())
}

/// Message of the last error on this thread, or an empty string. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn fspt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fspt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a system from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_system_from_json(json: *const c_char, out: *mut *mut FsptSystem) -> FsptStatus {
    guard(|| {
        let sys = parse::<SystemJson>(json)?.into_system().map_err(domain)?;
        put(out, Box::into_raw(Box::new(FsptSystem(sys))))
    })
}

/// # Safety
/// `sys` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fspt_system_free(sys: *mut FsptSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// The graded tensor product of two systems over the same group and twist.
///
/// # Safety
/// Handles must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_system_stack(
    a: *const FsptSystem,
    b: *const FsptSystem,
    out: *mut *mut FsptSystem,
) -> FsptStatus {
    guard(|| {
        let s = stack_systems(&handle(a)?.0, &handle(b)?.0).map_err(domain)?;
        put(out, Box::into_raw(Box::new(FsptSystem(s))))
    })
}

/// # Safety
/// `sys` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_system_index(sys: *const FsptSystem, out: *mut *mut FsptIndex) -> FsptStatus {
    guard(|| {
        let idx = compute_index(&handle(sys)?.0).map_err(domain)?;
        put(out, Box::into_raw(Box::new(FsptIndex(idx))))
    })
}

/// Parses an index from the JSON emitted by [`fspt_index_to_json`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_index_from_json(json: *const c_char, out: *mut *mut FsptIndex) -> FsptStatus {
    guard(|| {
        let idx = parse::<IndexJson>(json)?.into_index(None).map_err(domain)?;
        put(out, Box::into_raw(Box::new(FsptIndex(idx))))
    })
}

/// # Safety
/// `idx` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fspt_index_free(idx: *mut FsptIndex) {
    if !idx.is_null() {
        drop(Box::from_raw(idx));
    }
}

/// # Safety
/// `idx` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_index_kappa(idx: *const FsptIndex, out: *mut u8) -> FsptStatus {
    guard(|| put(out, handle(idx)?.0.kappa))
}

/// `{"kappa", "q", "cocycle"}`; release with [`fspt_string_free`].
///
/// # Safety
/// `idx` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_index_to_json(idx: *const FsptIndex, out: *mut *mut c_char) -> FsptStatus {
    guard(|| put_json(out, &handle(idx)?.0.to_json()))
}

/// The index of the stacked phase by the group law.
///
/// # Safety
/// Handles must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_index_stack(
    a: *const FsptIndex,
    b: *const FsptIndex,
    out: *mut *mut FsptIndex,
) -> FsptStatus {
    guard(|| {
        let idx = stack_index(&handle(a)?.0, &handle(b)?.0).map_err(domain)?;
        put(out, Box::into_raw(Box::new(FsptIndex(idx))))
    })
}

/// # Safety
/// Handles must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_index_equal(a: *const FsptIndex, b: *const FsptIndex, out: *mut bool) -> FsptStatus {
    guard(|| put(out, index_equal(&handle(a)?.0, &handle(b)?.0)))
}

/// Parses and validates a fermionic MPS from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_mps_from_json(json: *const c_char, out: *mut *mut FsptMps) -> FsptStatus {
    guard(|| {
        let mps = parse::<FermionicMpsJson>(json)?.into_mps().map_err(domain)?;
        put(out, Box::into_raw(Box::new(FsptMps(mps))))
    })
}

/// # Safety
/// `mps` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fspt_mps_free(mps: *mut FsptMps) {
    if !mps.is_null() {
        drop(Box::from_raw(mps));
    }
}

/// Expectation of a word given as `[[mu0, nu0], [mu1, nu1], ...]`.
///
/// # Safety
/// `mps` must be valid, `word` NUL-terminated and `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_mps_expectation(
    mps: *const FsptMps,
    word: *const c_char,
    re: *mut f64,
    im: *mut f64,
) -> FsptStatus {
    guard(|| {
        let w: SiteWord = parse(word)?;
        let z = expectation(&handle(mps)?.0, &w).map_err(domain)?;
        put(re, z.re)?;
        put(im, z.im)
    })
}

/// The index of an MPS under an on-site symmetry given as JSON.
///
/// # Safety
/// `mps` must be valid, `symmetry` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_mps_index(
    mps: *const FsptMps,
    symmetry: *const c_char,
    out: *mut *mut FsptIndex,
) -> FsptStatus {
    guard(|| {
        let sym = parse::<SymmetryJson>(symmetry)?.into_symmetry().map_err(domain)?;
        let idx = fmps_index(&handle(mps)?.0, &sym).map_err(domain)?;
        put(out, Box::into_raw(Box::new(FsptIndex(idx))))
    })
}
