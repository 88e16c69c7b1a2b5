//! C interface for the constrained covering-suite generator.
//!
//! Conventions:
//! - Handles ([`CitModel`], [`CitSuite`]) are opaque. Create and free them
//!   only through this API; freeing is always null-safe.
//! - Every fallible call returns a [`CitStatus`]. After a failure, a
//!   human-readable message is available from [`cit_last_error_message`]
//!   until the next failing call on the same thread.
//! - `const char *` values returned from accessors borrow from the handle
//!   and stay valid until that handle is freed. Strings handed out through
//!   `char **` out-parameters are owned by the caller and must be released
//!   with [`cit_string_free`].
//! - No call unwinds across the boundary; an internal panic is caught and
//!   reported as `CIT_STATUS_INTERNAL_ERROR`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use citgen::generator::{
    Budget, GeneratorConfig, DEFAULT_MAX_MODIFICATIONS, DEFAULT_TIME_BUDGET_MS,
};
use citgen::model::Strength;
use citgen::oracle::verify_suite;
use citgen::output;
use citgen::{generate, parse_model, Error, GeneratedSuite, ModelFile};

/// Status code returned by every fallible API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CitStatus {
    /// The call succeeded.
    Ok = 0,
    /// A null pointer, malformed UTF-8, or out-of-range option was passed.
    InvalidArgument = 1,
    /// The model text does not parse; the message names the offending line.
    ParseError = 2,
    /// The constraints admit no test case at all (or the forbidden-tuple
    /// derivation exceeded its cap while proving that).
    Unsatisfiable = 3,
    /// Suite construction or verification could not run to completion.
    GenerationFailed = 4,
    /// The suite was generated but failed oracle verification.
    VerificationFailed = 5,
    /// An internal invariant broke; please report the model that caused it.
    InternalError = 6,
}

/// An opaque parsed model: a parameter space plus constraint clauses.
pub struct CitModel {
    model: ModelFile,
    parameter_names: Vec<CString>,
    value_names: Vec<Vec<CString>>,
}

/// An opaque generated suite together with the model it was built from.
pub struct CitSuite {
    model: ModelFile,
    suite: GeneratedSuite,
    cells: Vec<Vec<CString>>,
}

/// Generation options. Obtain defaults from [`cit_options_default`] and
/// override individual fields.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CitOptions {
    /// Interaction strength t (how many parameters each covered combination
    /// spans). Must be between 1 and the parameter count.
    pub strength: u32,
    /// Seed for the deterministic random search. Equal seeds with equal
    /// options reproduce the suite bit for bit.
    pub seed: u64,
    /// When nonzero, run exactly this many improvement rounds (fully
    /// deterministic runtime). When zero, `time_budget_ms` applies instead.
    pub improve_rounds: u64,
    /// Wall-clock budget for the improvement loop, in milliseconds. Ignored
    /// when `improve_rounds` is nonzero.
    pub time_budget_ms: u64,
    /// Modification budget per improvement round.
    pub max_modifications: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized: String = message.chars().filter(|c| *c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn c_string(s: &str) -> CString {
    CString::new(s).unwrap_or_default()
}

fn status_of(err: &Error) -> CitStatus {
    match err {
        Error::Parse { .. } => CitStatus::ParseError,
        Error::Unsatisfiable { .. } | Error::DerivationCapExceeded { .. } => {
            CitStatus::Unsatisfiable
        }
        Error::InvalidModel(_)
        | Error::LengthMismatch { .. }
        | Error::StrengthTooSmall { .. }
        | Error::StrengthExceedsParameters { .. }
        | Error::InvalidConfig(_) => CitStatus::InvalidArgument,
        Error::Search(_) | Error::EnumerationCapExceeded { .. } => CitStatus::GenerationFailed,
    }
}

fn fail(err: &Error) -> CitStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

fn guarded(f: impl FnOnce() -> CitStatus) -> CitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic in the suite generator");
            CitStatus::InternalError
        }
    }
}

/// Message from the most recent failing call on this thread, as a
/// NUL-terminated UTF-8 string. Empty when nothing has failed yet. The
/// pointer stays valid until the next failing call on the same thread; do
/// not free it.
#[no_mangle]
pub extern "C" fn cit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Default options: strength 2, seed 0, a 5000 ms time budget, and 600
/// modifications per improvement round.
#[no_mangle]
pub extern "C" fn cit_options_default() -> CitOptions {
    CitOptions {
        strength: 2,
        seed: 0,
        improve_rounds: 0,
        time_budget_ms: DEFAULT_TIME_BUDGET_MS,
        max_modifications: DEFAULT_MAX_MODIFICATIONS as u32,
    }
}

/// Parses model text (a PARAMETERS section and an optional CONSTRAINTS
/// section) into a model handle written to `*out` on success.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to a writable
/// pointer slot. The returned handle must be freed with [`cit_model_free`].
#[no_mangle]
pub unsafe extern "C" fn cit_model_parse(
    text: *const c_char,
    out: *mut *mut CitModel,
) -> CitStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            set_last_error("null pointer argument");
            return CitStatus::InvalidArgument;
        }
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(text) => text,
            Err(_) => {
                set_last_error("model text is not valid UTF-8");
                return CitStatus::InvalidArgument;
            }
        };
        match parse_model(text) {
            Ok(model) => {
                let space = model.space();
                let parameter_names = space.parameter_names().map(c_string).collect();
                let value_names = (0..space.k())
                    .map(|p| {
                        (0..space.domain_size(p))
                            .map(|v| c_string(space.value_name(p, v)))
                            .collect()
                    })
                    .collect();
                let handle = Box::new(CitModel {
                    model,
                    parameter_names,
                    value_names,
                });
                unsafe { *out = Box::into_raw(handle) };
                CitStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Frees a model handle. Passing null is a no-op.
///
/// # Safety
/// `model` must be null or a pointer obtained from [`cit_model_parse`] that
/// has not been freed before.
#[no_mangle]
pub unsafe extern "C" fn cit_model_free(model: *mut CitModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Number of parameters of the model; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle from [`cit_model_parse`].
#[no_mangle]
pub unsafe extern "C" fn cit_model_parameter_count(model: *const CitModel) -> usize {
    if model.is_null() {
        return 0;
    }
    unsafe { &*model }.parameter_names.len()
}

/// Name of one parameter, borrowed from the handle; null when the index is
/// out of range or the handle is null.
///
/// # Safety
/// `model` must be null or a live handle from [`cit_model_parse`].
#[no_mangle]
pub unsafe extern "C" fn cit_model_parameter_name(
    model: *const CitModel,
    parameter: usize,
) -> *const c_char {
    if model.is_null() {
        return std::ptr::null();
    }
    match unsafe { &*model }.parameter_names.get(parameter) {
        Some(name) => name.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Number of values of one parameter; 0 when the index is out of range or
/// the handle is null.
///
/// # Safety
/// `model` must be null or a live handle from [`cit_model_parse`].
#[no_mangle]
pub unsafe extern "C" fn cit_model_value_count(model: *const CitModel, parameter: usize) -> usize {
    if model.is_null() {
        return 0;
    }
    unsafe { &*model }
        .value_names
        .get(parameter)
        .map_or(0, Vec::len)
}

/// Name of one value of one parameter, borrowed from the handle; null when
/// either index is out of range or the handle is null.
///
/// # Safety
/// `model` must be null or a live handle from [`cit_model_parse`].
#[no_mangle]
pub unsafe extern "C" fn cit_model_value_name(
    model: *const CitModel,
    parameter: usize,
    value: usize,
) -> *const c_char {
    if model.is_null() {
        return std::ptr::null();
    }
    match unsafe { &*model }
        .value_names
        .get(parameter)
        .and_then(|names| names.get(value))
    {
        Some(name) => name.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Generates a covering suite for the model and writes a suite handle to
/// `*out` on success. Passing null options uses [`cit_options_default`].
///
/// # Safety
/// `model` must be a live handle from [`cit_model_parse`], `options` null or
/// a valid options struct, and `out` a writable pointer slot. The returned
/// handle must be freed with [`cit_suite_free`].
#[no_mangle]
pub unsafe extern "C" fn cit_generate(
    model: *const CitModel,
    options: *const CitOptions,
    out: *mut *mut CitSuite,
) -> CitStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            set_last_error("null pointer argument");
            return CitStatus::InvalidArgument;
        }
        let handle = unsafe { &*model };
        let opts = if options.is_null() {
            cit_options_default()
        } else {
            unsafe { *options }
        };
        let budget = if opts.improve_rounds > 0 {
            Budget::Rounds(opts.improve_rounds)
        } else {
            Budget::TimeMs(opts.time_budget_ms)
        };
        let config = GeneratorConfig {
            budget,
            max_modifications: opts.max_modifications as usize,
            ..GeneratorConfig::new(opts.strength as usize, opts.seed)
        };
        match generate(&handle.model, &config) {
            Ok(suite) => {
                let space = handle.model.space();
                let cells = suite
                    .rows
                    .iter()
                    .map(|row| {
                        row.values()
                            .iter()
                            .enumerate()
                            .map(|(p, &v)| c_string(space.value_name(p, v)))
                            .collect()
                    })
                    .collect();
                let boxed = Box::new(CitSuite {
                    model: handle.model.clone(),
                    suite,
                    cells,
                });
                unsafe { *out = Box::into_raw(boxed) };
                CitStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Frees a suite handle. Passing null is a no-op.
///
/// # Safety
/// `suite` must be null or a pointer obtained from [`cit_generate`] that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn cit_suite_free(suite: *mut CitSuite) {
    if !suite.is_null() {
        drop(unsafe { Box::from_raw(suite) });
    }
}

/// Number of test cases in the suite; 0 for a null handle.
///
/// # Safety
/// `suite` must be null or a live handle from [`cit_generate`].
#[no_mangle]
pub unsafe extern "C" fn cit_suite_row_count(suite: *const CitSuite) -> usize {
    if suite.is_null() {
        return 0;
    }
    unsafe { &*suite }.suite.rows.len()
}

/// Number of parameters per test case; 0 for a null handle.
///
/// # Safety
/// `suite` must be null or a live handle from [`cit_generate`].
#[no_mangle]
pub unsafe extern "C" fn cit_suite_column_count(suite: *const CitSuite) -> usize {
    if suite.is_null() {
        return 0;
    }
    unsafe { &*suite }.model.space().k()
}

/// Seed the suite was generated with; 0 for a null handle.
///
/// # Safety
/// `suite` must be null or a live handle from [`cit_generate`].
#[no_mangle]
pub unsafe extern "C" fn cit_suite_seed(suite: *const CitSuite) -> u64 {
    if suite.is_null() {
        return 0;
    }
    unsafe { &*suite }.suite.seed
}

/// Interaction strength the suite covers; 0 for a null handle.
///
/// # Safety
/// `suite` must be null or a live handle from [`cit_generate`].
#[no_mangle]
pub unsafe extern "C" fn cit_suite_strength(suite: *const CitSuite) -> u32 {
    if suite.is_null() {
        return 0;
    }
    unsafe { &*suite }.suite.strength as u32
}

/// Value name at one cell of the suite, borrowed from the handle; null when
/// an index is out of range or the handle is null.
///
/// # Safety
/// `suite` must be null or a live handle from [`cit_generate`].
#[no_mangle]
pub unsafe extern "C" fn cit_suite_value_name(
    suite: *const CitSuite,
    row: usize,
    column: usize,
) -> *const c_char {
    if suite.is_null() {
        return std::ptr::null();
    }
    match unsafe { &*suite }
        .cells
        .get(row)
        .and_then(|cells| cells.get(column))
    {
        Some(name) => name.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Serializes the suite as the stable JSON document and writes a
/// caller-owned string to `*out`.
///
/// # Safety
/// `suite` must be a live handle from [`cit_generate`] and `out` a writable
/// pointer slot. Release the string with [`cit_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cit_suite_to_json(
    suite: *const CitSuite,
    out: *mut *mut c_char,
) -> CitStatus {
    guarded(|| {
        if suite.is_null() || out.is_null() {
            set_last_error("null pointer argument");
            return CitStatus::InvalidArgument;
        }
        let handle = unsafe { &*suite };
        let doc = output::suite_document(&handle.model, &handle.suite, None);
        match output::to_json(&doc) {
            Ok(json) => match CString::new(json) {
                Ok(c) => {
                    unsafe { *out = c.into_raw() };
                    CitStatus::Ok
                }
                Err(_) => {
                    set_last_error("serialized document contains a NUL byte");
                    CitStatus::InternalError
                }
            },
            Err(e) => fail(&e),
        }
    })
}

/// Frees a string returned through a `char **` out-parameter of this API.
/// Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer obtained from this API that has not been
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn cit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Re-checks the suite against an independent brute-force oracle: every row
/// must satisfy the constraints and every coverable value combination of the
/// suite's strength must appear in some row. Returns `CIT_STATUS_OK` when
/// the suite certifies, `CIT_STATUS_VERIFICATION_FAILED` (with a report in
/// the last-error message) when it does not.
///
/// # Safety
/// `suite` must be a live handle from [`cit_generate`].
#[no_mangle]
pub unsafe extern "C" fn cit_verify(suite: *const CitSuite) -> CitStatus {
    guarded(|| {
        if suite.is_null() {
            set_last_error("null pointer argument");
            return CitStatus::InvalidArgument;
        }
        let handle = unsafe { &*suite };
        let strength = match Strength::new(handle.suite.strength, handle.model.space().k()) {
            Ok(strength) => strength,
            Err(e) => return fail(&e),
        };
        match verify_suite(&handle.suite.rows, &handle.model, strength) {
            Ok(report) if report.passes() => CitStatus::Ok,
            Ok(report) => {
                set_last_error(&report.render_text());
                CitStatus::VerificationFailed
            }
            Err(e) => fail(&e),
        }
    })
}
