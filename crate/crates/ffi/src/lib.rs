//! C ABI for the witness toolkit.
//!
//! Conventions: objects cross the boundary as opaque handles created and
//! destroyed by this library; every fallible call returns a [`BewitStatus`]
//! and writes its result through out-pointers; the last error message of
//! the current thread is available via [`bewit_last_error_message`].
//! Strings returned through out-pointers are owned by the caller and must
//! be released with [`bewit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use bewit::basis::Permutation;
use bewit::cli::builtin_witness;
use bewit::criteria;
use bewit::error::Error;
use bewit::io;
use bewit::states::{self, DensityMatrix, StateId};
use bewit::witness::{self, SeeSawParams, WitnessCoefficients};

/// Status code of a C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BewitStatus {
    Ok = 0,
    InvalidArgument = 1,
    NotHermitian = 2,
    DimensionMismatch = 3,
    IndexOutOfRange = 4,
    InvalidPermutation = 5,
    InvalidDimension = 6,
    UnknownStateId = 7,
    DomainError = 8,
    InvalidState = 9,
    BracketError = 10,
    NotUnitary = 11,
    SpectrumOutOfRange = 12,
    InvalidStrategy = 13,
    ParseError = 14,
    IoError = 15,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> BewitStatus {
    match err {
        Error::NotHermitian { .. } => BewitStatus::NotHermitian,
        Error::DimensionMismatch(_) => BewitStatus::DimensionMismatch,
        Error::IndexOutOfRange(_) => BewitStatus::IndexOutOfRange,
        Error::InvalidPermutation(_) => BewitStatus::InvalidPermutation,
        Error::InvalidDimension(_) => BewitStatus::InvalidDimension,
        Error::UnknownStateId(_) => BewitStatus::UnknownStateId,
        Error::DomainError(_) => BewitStatus::DomainError,
        Error::InvalidState(_) => BewitStatus::InvalidState,
        Error::BracketError(_) => BewitStatus::BracketError,
        Error::NotUnitary { .. } => BewitStatus::NotUnitary,
        Error::SpectrumOutOfRange { .. } => BewitStatus::SpectrumOutOfRange,
        Error::InvalidStrategy(_) => BewitStatus::InvalidStrategy,
        Error::ParseError(_) => BewitStatus::ParseError,
        Error::Io(_) => BewitStatus::IoError,
    }
}

fn fail(err: Error) -> BewitStatus {
    let status = status_of(&err);
    set_last_error(&err.to_string());
    status
}

fn invalid(message: &str) -> BewitStatus {
    set_last_error(message);
    BewitStatus::InvalidArgument
}

/// Opaque handle to a bipartite density matrix.
pub struct BewitState {
    inner: DensityMatrix,
}

/// Opaque handle to a witness coefficient tensor.
pub struct BewitWitness {
    inner: WitnessCoefficients,
}

/// Aggregate outcome of a see-saw run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BewitSeesawResult {
    pub best_value: f64,
    pub converged_fraction: f64,
    pub best_iterations: usize,
    pub best_restart_index: usize,
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, BewitStatus> {
    if ptr.is_null() {
        return Err(invalid(&format!("{what} pointer is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(&format!("{what} is not valid UTF-8")))
}

fn write_string(out: *mut *mut c_char, text: String) -> BewitStatus {
    if out.is_null() {
        return invalid("output pointer is null");
    }
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            BewitStatus::Ok
        }
        Err(_) => invalid("output contained an interior NUL byte"),
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn bewit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last error on this thread; valid until the next failing
/// call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn bewit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned through an out-pointer.
///
/// # Safety
/// `s` must have been produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bewit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a catalog state from its name: "me", "werner-as", "werner-loc",
/// "r6", "r8", "bpd", "sentis", "rho3x3", or "asym:<v>".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_state_catalog(
    name: *const c_char,
    out: *mut *mut BewitState,
) -> BewitStatus {
    if out.is_null() {
        return invalid("output pointer is null");
    }
    let name = match read_str(name, "state name") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let id: StateId = match name.parse() {
        Ok(id) => id,
        Err(e) => return fail(e),
    };
    match states::catalog(id) {
        Ok(state) => {
            *out = Box::into_raw(Box::new(BewitState { inner: state }));
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Parses a state from its JSON representation.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_state_from_json(
    json: *const c_char,
    out: *mut *mut BewitState,
) -> BewitStatus {
    if out.is_null() {
        return invalid("output pointer is null");
    }
    let text = match read_str(json, "state JSON") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match io::state_from_json(text) {
        Ok(state) => {
            *out = Box::into_raw(Box::new(BewitState { inner: state }));
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Serializes a state as JSON; release the string with `bewit_string_free`.
///
/// # Safety
/// `state` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bewit_state_to_json(
    state: *const BewitState,
    out_json: *mut *mut c_char,
) -> BewitStatus {
    let Some(state) = state.as_ref() else {
        return invalid("state handle is null");
    };
    write_string(out_json, io::state_to_json(&state.inner))
}

/// Mixes a state with isotropic noise at visibility `v` on a `dim x dim`
/// space (the state embeds into the first levels when `dim` is larger).
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_state_isotropic_mix(
    state: *const BewitState,
    v: f64,
    dim: usize,
    out: *mut *mut BewitState,
) -> BewitStatus {
    let Some(state) = state.as_ref() else {
        return invalid("state handle is null");
    };
    if out.is_null() {
        return invalid("output pointer is null");
    }
    match states::isotropic_mix(&state.inner, v, dim) {
        Ok(mixed) => {
            *out = Box::into_raw(Box::new(BewitState { inner: mixed }));
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Local dimension of the A side (0 for a null handle).
///
/// # Safety
/// `state` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bewit_state_dim_a(state: *const BewitState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dim_a())
}

/// Local dimension of the B side (0 for a null handle).
///
/// # Safety
/// `state` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bewit_state_dim_b(state: *const BewitState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dim_b())
}

/// Releases a state handle.
///
/// # Safety
/// `state` must have been produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bewit_state_free(state: *mut BewitState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

unsafe fn state_scalar(
    state: *const BewitState,
    out: *mut f64,
    compute: impl Fn(&DensityMatrix) -> bewit::Result<f64>,
) -> BewitStatus {
    let Some(state) = state.as_ref() else {
        return invalid("state handle is null");
    };
    if out.is_null() {
        return invalid("output pointer is null");
    }
    match compute(&state.inner) {
        Ok(value) => {
            *out = value;
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// CCNR value; above 1 certifies entanglement.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_ccnr(state: *const BewitState, out: *mut f64) -> BewitStatus {
    state_scalar(state, out, criteria::ccnr)
}

/// Negativity `(||PT||_1 - 1)/2`; zero exactly for PPT states.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_negativity(
    state: *const BewitState,
    out: *mut f64,
) -> BewitStatus {
    state_scalar(state, out, criteria::negativity)
}

/// Trace criterion `S` in the identity-permutation Pauli-product basis.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_trace_criterion_s(
    state: *const BewitState,
    out: *mut f64,
) -> BewitStatus {
    state_scalar(state, out, |rho| {
        criteria::trace_criterion_s(rho, Permutation::identity())
    })
}

/// Best quantum Fisher information over the standard local generators.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_qfi_standard_max(
    state: *const BewitState,
    out: *mut f64,
) -> BewitStatus {
    state_scalar(state, out, criteria::qfi_standard_max)
}

/// Whether the partial transpose has no eigenvalue below `-tolerance`.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_is_ppt(
    state: *const BewitState,
    tolerance: f64,
    out: *mut bool,
) -> BewitStatus {
    let Some(state) = state.as_ref() else {
        return invalid("state handle is null");
    };
    if out.is_null() {
        return invalid("output pointer is null");
    }
    match criteria::is_ppt(&state.inner, tolerance) {
        Ok(value) => {
            *out = value;
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Critical visibility `3 / (4 CCNR - 1)`; fails for CCNR at or below 1.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_v_pm_closed_form(ccnr: f64, out: *mut f64) -> BewitStatus {
    if out.is_null() {
        return invalid("output pointer is null");
    }
    match criteria::v_pm_closed_form(ccnr) {
        Ok(value) => {
            *out = value;
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Builds a witness: "canonical", or a catalog state name to tailor it to.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_witness_builtin(
    name: *const c_char,
    out: *mut *mut BewitWitness,
) -> BewitStatus {
    if out.is_null() {
        return invalid("output pointer is null");
    }
    let name = match read_str(name, "witness name") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match builtin_witness(name) {
        Ok(w) => {
            *out = Box::into_raw(Box::new(BewitWitness { inner: w }));
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Parses witness coefficients from CSV (header `x,y,z,w`).
///
/// # Safety
/// `csv` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_witness_from_csv(
    csv: *const c_char,
    out: *mut *mut BewitWitness,
) -> BewitStatus {
    if out.is_null() {
        return invalid("output pointer is null");
    }
    let text = match read_str(csv, "witness CSV") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match io::witness_from_csv(text) {
        Ok(w) => {
            *out = Box::into_raw(Box::new(BewitWitness { inner: w }));
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Serializes witness coefficients as CSV; release with `bewit_string_free`.
///
/// # Safety
/// `witness` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bewit_witness_to_csv(
    witness: *const BewitWitness,
    out_csv: *mut *mut c_char,
) -> BewitStatus {
    let Some(witness) = witness.as_ref() else {
        return invalid("witness handle is null");
    };
    write_string(out_csv, io::witness_to_csv(&witness.inner))
}

/// Releases a witness handle.
///
/// # Safety
/// `witness` must have been produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bewit_witness_free(witness: *mut BewitWitness) {
    if !witness.is_null() {
        drop(Box::from_raw(witness));
    }
}

/// Full protocol value of the witness on a shared state.
///
/// # Safety
/// `state` and `witness` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bewit_entangled_value(
    state: *const BewitState,
    witness: *const BewitWitness,
    out: *mut f64,
) -> BewitStatus {
    let Some(state) = state.as_ref() else {
        return invalid("state handle is null");
    };
    let Some(witness) = witness.as_ref() else {
        return invalid("witness handle is null");
    };
    if out.is_null() {
        return invalid("output pointer is null");
    }
    match witness::entangled_value(&state.inner, &witness.inner) {
        Ok(value) => {
            *out = value;
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Multi-restart see-saw optimization of the witness over separable (or,
/// with `classical` set, classical) message strategies.
///
/// # Safety
/// `witness` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bewit_seesaw(
    witness: *const BewitWitness,
    seed: u64,
    restarts: usize,
    max_iter: usize,
    tol: f64,
    classical: bool,
    out: *mut BewitSeesawResult,
) -> BewitStatus {
    let Some(witness) = witness.as_ref() else {
        return invalid("witness handle is null");
    };
    if out.is_null() {
        return invalid("output pointer is null");
    }
    let params = SeeSawParams {
        seed,
        restarts,
        max_iter,
        tol,
    };
    let run = if classical {
        witness::seesaw_classical(&witness.inner, &params)
    } else {
        witness::seesaw_separable(&witness.inner, &params)
    };
    match run {
        Ok(run) => {
            *out = BewitSeesawResult {
                best_value: run.best.value,
                converged_fraction: run.converged_fraction(),
                best_iterations: run.best.iterations,
                best_restart_index: run.best.restart_index,
            };
            BewitStatus::Ok
        }
        Err(e) => fail(e),
    }
}
