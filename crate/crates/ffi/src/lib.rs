//! C ABI over the `dirac_yukawa` library.
//!
//! Every function returns a [`DyStatus`] code. On failure the message is
//! available from [`dy_last_error`] on the same thread. Strings handed out by
//! the library must be released with [`dy_string_free`], models with
//! [`dy_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dirac_yukawa::commands::{self, is_input_error};
use dirac_yukawa::config::{load_model, Model};
use dirac_yukawa::lattice_dirac::io::dump_operator;
use dirac_yukawa::lattice_dirac::spectrum;
use dirac_yukawa::{models, Error};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Bad model file, unknown name, malformed argument.
    InputError = 3,
    /// The computation itself failed.
    ComputeError = 4,
    /// `out_len` holds the required length.
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque model handle.
pub struct DyModel {
    model: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(e: Error) -> DyStatus {
    let code = if is_input_error(&e) {
        DyStatus::InputError
    } else {
        DyStatus::ComputeError
    };
    set_error(e.to_string());
    code
}

fn guard(f: impl FnOnce() -> DyStatus) -> DyStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            DyStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, DyStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(DyStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        DyStatus::InvalidUtf8
    })
}

unsafe fn model_ref<'a>(m: *const DyModel) -> Result<&'a Model, DyStatus> {
    if m.is_null() {
        set_error("null model handle");
        return Err(DyStatus::NullPointer);
    }
    Ok(&(*m).model)
}

unsafe fn hand_out(text: String, out: *mut *mut c_char) -> DyStatus {
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            DyStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            DyStatus::ComputeError
        }
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

fn store(model: Model, out: *mut *mut DyModel) -> DyStatus {
    unsafe { *out = Box::into_raw(Box::new(DyModel { model })) };
    DyStatus::Ok
}

/// Load a model from a TOML file.
///
/// # Safety
/// `path` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dy_model_load(path: *const c_char, out: *mut *mut DyModel) -> DyStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return DyStatus::NullPointer;
        }
        let path = try_status!(read_str(path));
        match load_model(path).and_then(|c| c.build()) {
            Ok(m) => store(m, out),
            Err(e) => fail(e),
        }
    })
}

/// Construct one of the built-in models by name.
///
/// # Safety
/// `name` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dy_model_builtin(name: *const c_char, out: *mut *mut DyModel) -> DyStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return DyStatus::NullPointer;
        }
        let name = try_status!(read_str(name));
        let Some(cfg) = models::registry(name) else {
            set_error(format!("unknown built-in model {name:?}"));
            return DyStatus::InputError;
        };
        match cfg.build() {
            Ok(m) => store(m, out),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `model` must come from `dy_model_load`/`dy_model_builtin` or be null.
#[no_mangle]
pub unsafe extern "C" fn dy_model_free(model: *mut DyModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Run `check`, `break`, `masses`, `lattice` or `verify-all` and return the
/// JSON report. `out_pass` (optional) receives 1 if every check passed.
///
/// # Safety
/// Pointers must be valid; `out_json` receives a string for `dy_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dy_run(
    model: *const DyModel,
    command: *const c_char,
    out_json: *mut *mut c_char,
    out_pass: *mut c_int,
) -> DyStatus {
    guard(|| {
        if out_json.is_null() {
            set_error("null output pointer");
            return DyStatus::NullPointer;
        }
        let model = try_status!(model_ref(model));
        let command = try_status!(read_str(command));
        let report = match command {
            "check" => commands::cmd_check(model),
            "break" => commands::cmd_break(model),
            "masses" => commands::cmd_masses(model),
            "lattice" => commands::cmd_lattice(model),
            "verify-all" => commands::cmd_verify_all(model),
            other => {
                set_error(format!("unknown command {other:?}"));
                return DyStatus::InputError;
            }
        };
        let report = match report {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        if !out_pass.is_null() {
            *out_pass = report.pass as c_int;
        }
        match report.to_json() {
            Ok(text) => hand_out(text, out_json),
            Err(e) => fail(e),
        }
    })
}

/// Sorted spectrum of `iD` (or of `(iD)²` when `squared` is nonzero) of the
/// vacuum lattice operator. Call with `buf = NULL` to query the length.
///
/// # Safety
/// `buf` must hold `cap` doubles (or be null); `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dy_dirac_spectrum(
    model: *const DyModel,
    squared: c_int,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> DyStatus {
    guard(|| {
        if out_len.is_null() {
            set_error("null output pointer");
            return DyStatus::NullPointer;
        }
        let model = try_status!(model_ref(model));
        let values = match commands::lattice_setup(model)
            .and_then(|s| spectrum(&s.dirac, squared != 0, model.tol.lattice_hermitian))
        {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        *out_len = values.len();
        if buf.is_null() || cap < values.len() {
            set_error(format!("buffer holds {cap} values, {} needed", values.len()));
            return DyStatus::BufferTooSmall;
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        DyStatus::Ok
    })
}

/// The vacuum lattice Dirac operator in the JSON dump format.
///
/// # Safety
/// Pointers must be valid; `out_json` receives a string for `dy_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dy_dirac_operator_json(model: *const DyModel, out_json: *mut *mut c_char) -> DyStatus {
    guard(|| {
        if out_json.is_null() {
            set_error("null output pointer");
            return DyStatus::NullPointer;
        }
        let model = try_status!(model_ref(model));
        match commands::lattice_setup(model).and_then(|s| dump_operator(&s.dirac)) {
            Ok(text) => hand_out(text, out_json),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn dy_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library.
#[no_mangle]
pub extern "C" fn dy_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn dy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
