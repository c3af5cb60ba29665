//! C ABI for the `mzv` library.
//!
//! Every fallible function returns an [`MzvStatus`]; on failure the message is
//! available from [`mzv_last_error_message`] on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and must
//! be released with [`mzv_string_free`]; identity handles with
//! [`mzv_identity_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mzv::composition::Composition;
use mzv::diagrams::{reduce, Diagram, Strategy};
use mzv::error::Error;
use mzv::identities::{derive, Family, Identity, Variant};
use mzv::linalg::assemble_permutation_system;
use mzv::numerics::{eval_mzv_accel, eval_mzv_direct, verify_identity, SIGNED_TRUNCATION};

/// Result codes shared by every function of the interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedInput = 3,
    NotAdmissible = 4,
    Divergent = 5,
    Precision = 6,
    UnknownFamily = 7,
    Precondition = 8,
    Irreducible = 9,
    Json = 10,
    Internal = 99,
}

/// An identity produced by [`mzv_identity_derive`] or [`mzv_identity_from_json`].
pub struct MzvIdentity {
    inner: Identity,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MzvStatus {
    match e {
        Error::MalformedComposition(_) | Error::MalformedWord(_) | Error::PatternShape(_) => MzvStatus::MalformedInput,
        Error::NotAdmissible(_) => MzvStatus::NotAdmissible,
        Error::Divergent | Error::EliminationFailure { .. } => MzvStatus::Divergent,
        Error::Precision { .. } | Error::UnsupportedOrder(_) => MzvStatus::Precision,
        Error::UnknownFamily(_) => MzvStatus::UnknownFamily,
        Error::Precondition(_) | Error::RuleInapplicable(_) => MzvStatus::Precondition,
        Error::Irreducible { .. } => MzvStatus::Irreducible,
        Error::Json(_) | Error::Io(_) => MzvStatus::Json,
    }
}

struct Fail(MzvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MzvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MzvStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal error (panic)");
            MzvStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(MzvStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(MzvStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(MzvStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Evaluates ζ(composition), e.g. `"3,1"`, to within `eps`. Alternating
/// compositions (`"-1"`) use the truncated nested sum.
///
/// # Safety
/// `composition` must be a nul-terminated string; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mzv_eval(composition: *const c_char, eps: c_double, value: *mut c_double, bound: *mut c_double) -> MzvStatus {
    guard(|| {
        let c: Composition = text(composition, "composition")?.parse()?;
        out_ptr(value, "value")?;
        out_ptr(bound, "bound")?;
        let v = if c.is_signed() { eval_mzv_direct(&c, SIGNED_TRUNCATION)? } else { eval_mzv_accel(&c, eps)? };
        *value = v.to_f64();
        *bound = v.bound;
        Ok(())
    })
}

/// Like [`mzv_eval`] but returns the value as a decimal string with every
/// reliable digit.
///
/// # Safety
/// `composition` must be a nul-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mzv_eval_string(composition: *const c_char, eps: c_double, out: *mut *mut c_char) -> MzvStatus {
    guard(|| {
        let c: Composition = text(composition, "composition")?.parse()?;
        out_ptr(out, "out")?;
        let v = if c.is_signed() { eval_mzv_direct(&c, SIGNED_TRUNCATION)? } else { eval_mzv_accel(&c, eps)? };
        *out = owned_string(v.value.to_decimal(v.reliable_digits().max(1)));
        Ok(())
    })
}

/// Emits one identity. `params` holds `n_params` strings; `variant` may be null.
///
/// # Safety
/// All strings must be nul-terminated; `params` must point to `n_params`
/// strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mzv_identity_derive(
    family: *const c_char,
    params: *const *const c_char,
    n_params: usize,
    variant: *const c_char,
    out: *mut *mut MzvIdentity,
) -> MzvStatus {
    guard(|| {
        let family: Family = text(family, "family")?.parse()?;
        out_ptr(out, "out")?;
        if n_params > 0 && params.is_null() {
            return Err(Fail(MzvStatus::NullPointer, "params is null".into()));
        }
        let ps = (0..n_params)
            .map(|i| text(*params.add(i), "parameter").map(str::to_string))
            .collect::<Result<Vec<_>, _>>()?;
        let variant = if variant.is_null() { None } else { Some(text(variant, "variant")?.parse::<Variant>()?) };
        let id = derive(family, &ps, variant)?;
        *out = Box::into_raw(Box::new(MzvIdentity { inner: id }));
        Ok(())
    })
}

/// Parses an identity from its JSON form.
///
/// # Safety
/// `json` must be nul-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mzv_identity_from_json(json: *const c_char, out: *mut *mut MzvIdentity) -> MzvStatus {
    guard(|| {
        let v: serde_json::Value =
            serde_json::from_str(text(json, "json")?).map_err(|e| Fail(MzvStatus::Json, e.to_string()))?;
        out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(MzvIdentity { inner: Identity::from_json_value(v)? }));
        Ok(())
    })
}

/// Serializes an identity (sorted keys).
///
/// # Safety
/// `id` must come from this library and not have been freed; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mzv_identity_to_json(id: *const MzvIdentity, out: *mut *mut c_char) -> MzvStatus {
    guard(|| {
        let id = id.as_ref().ok_or_else(|| Fail(MzvStatus::NullPointer, "identity is null".into()))?;
        out_ptr(out, "out")?;
        *out = owned_string(id.inner.to_json_value().to_string());
        Ok(())
    })
}

/// 1 when the identity belongs to a final family and has no ζ(1…) factor,
/// 0 otherwise (also for a null handle).
///
/// # Safety
/// `id` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mzv_identity_is_final(id: *const MzvIdentity) -> c_int {
    id.as_ref().map_or(0, |i| i.inner.is_final as c_int)
}

/// Checks an identity numerically. `pass` receives 1 or 0; `residual` and
/// `bound` may be null.
///
/// # Safety
/// `id` must be a live handle; non-null out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mzv_identity_verify(
    id: *const MzvIdentity,
    eps: c_double,
    pass: *mut c_int,
    residual: *mut c_double,
    bound: *mut c_double,
) -> MzvStatus {
    guard(|| {
        let id = id.as_ref().ok_or_else(|| Fail(MzvStatus::NullPointer, "identity is null".into()))?;
        out_ptr(pass, "pass")?;
        let r = verify_identity(&id.inner, eps)?;
        *pass = r.pass as c_int;
        if !residual.is_null() {
            *residual = r.residual_f64();
        }
        if !bound.is_null() {
            *bound = r.bound;
        }
        Ok(())
    })
}

/// Releases an identity handle. Null is ignored.
///
/// # Safety
/// `id` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mzv_identity_free(id: *mut MzvIdentity) {
    if !id.is_null() {
        drop(Box::from_raw(id));
    }
}

/// Rank of the permutation relation system of the given length. `symbols`
/// (length `length`, may be null for distinct arguments) marks coinciding
/// arguments by equal values.
///
/// # Safety
/// `symbols` must be null or point to `length` values; `rank` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mzv_permutation_rank(length: usize, symbols: *const usize, rank: *mut usize) -> MzvStatus {
    guard(|| {
        out_ptr(rank, "rank")?;
        if length > 6 {
            return Err(Fail(MzvStatus::Precondition, "lengths above 6 are not supported".into()));
        }
        let syms: Vec<usize> =
            if symbols.is_null() { (0..length).collect() } else { std::slice::from_raw_parts(symbols, length).to_vec() };
        *rank = assemble_permutation_system(length, &syms)?.rank();
        Ok(())
    })
}

/// Reduces a diagram given as JSON with a named strategy (`direct`,
/// `rightward`, `alternative`, `shuffle`); the result is the JSON form of the
/// value.
///
/// # Safety
/// Strings must be nul-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mzv_diagram_reduce(diagram_json: *const c_char, strategy: *const c_char, out: *mut *mut c_char) -> MzvStatus {
    guard(|| {
        let v: serde_json::Value =
            serde_json::from_str(text(diagram_json, "diagram")?).map_err(|e| Fail(MzvStatus::Json, e.to_string()))?;
        let strategy: Strategy = text(strategy, "strategy")?.parse()?;
        out_ptr(out, "out")?;
        let r = reduce(&Diagram::from_json_value(&v)?, strategy)?;
        *out = owned_string(r.value.to_json_value().to_string());
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mzv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread (empty after a success). The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn mzv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
