//! C interface to the frbc solver.
//!
//! Solutions are opaque handles. Every fallible call returns an
//! [`FrbcStatus`]; on failure a message is available from
//! [`frbc_last_error`] on the same thread. Real numbers cross the boundary
//! as NUL-terminated decimal strings allocated by this library and released
//! with [`frbc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use frbc::{energy, Error, PrecisionContext, RunConfig, TfSolution};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrbcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularMatrix = 3,
    NonFinite = 4,
    Io = 5,
    InvalidSolution = 6,
    Panic = 7,
}

/// Opaque solution handle.
pub struct FrbcSolution {
    inner: TfSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(err: &Error) -> FrbcStatus {
    match err {
        Error::SingularMatrix { .. } | Error::DimensionMismatch { .. } => FrbcStatus::SingularMatrix,
        Error::NonFiniteCoefficient { .. } => FrbcStatus::NonFinite,
        Error::Io(_) => FrbcStatus::Io,
        Error::Json(_) | Error::InvalidSolution(_) => FrbcStatus::InvalidSolution,
        _ => FrbcStatus::InvalidArgument,
    }
}

/// Run `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), FrbcStatus>) -> FrbcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FrbcStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            FrbcStatus::Panic
        }
    }
}

fn fail(err: Error) -> FrbcStatus {
    set_error(err.to_string());
    status_of(&err)
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, FrbcStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        return Err(FrbcStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        FrbcStatus::InvalidArgument
    })
}

unsafe fn solution<'a>(p: *const FrbcSolution) -> Result<&'a TfSolution, FrbcStatus> {
    if p.is_null() {
        set_error("solution handle is null");
        return Err(FrbcStatus::NullPointer);
    }
    Ok(&(*p).inner)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), FrbcStatus> {
    if out.is_null() {
        set_error("output pointer is null");
        return Err(FrbcStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("decimal strings contain no NUL").into_raw()
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn frbc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn frbc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Solve the Thomas–Fermi problem.
///
/// `alpha` and `scale` are decimals or `p/q` strings; NULL selects `1/2` and
/// `1`.
///
/// # Safety
/// String arguments must be NULL or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frbc_solve(
    order: usize,
    alpha: *const c_char,
    scale: *const c_char,
    iterations: usize,
    digits: u32,
    out: *mut *mut FrbcSolution,
) -> FrbcStatus {
    guard(|| {
        let defaults = RunConfig::default();
        let alpha = if alpha.is_null() { defaults.alpha.clone() } else { read_str(alpha, "alpha")?.to_owned() };
        let scale = if scale.is_null() { defaults.scale.clone() } else { read_str(scale, "scale")?.to_owned() };
        if out.is_null() {
            set_error("output pointer is null");
            return Err(FrbcStatus::NullPointer);
        }
        let config = RunConfig {
            order,
            alpha,
            scale,
            iterations,
            digits,
        };
        let (inner, _) = config.solve().map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(FrbcSolution { inner })))
    })
}

/// Load a solution document written by [`frbc_solution_save`] or the CLI.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frbc_solution_load(path: *const c_char, out: *mut *mut FrbcSolution) -> FrbcStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        if out.is_null() {
            set_error("output pointer is null");
            return Err(FrbcStatus::NullPointer);
        }
        let inner = TfSolution::load(Path::new(path)).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(FrbcSolution { inner })))
    })
}

/// # Safety
/// `solution` must be a live handle; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn frbc_solution_save(solution: *const FrbcSolution, path: *const c_char) -> FrbcStatus {
    guard(|| {
        let sol = self::solution(solution)?;
        let path = read_str(path, "path")?;
        sol.save(Path::new(path)).map_err(fail)
    })
}

/// Release a handle; NULL is ignored.
///
/// # Safety
/// `solution` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frbc_solution_free(solution: *mut FrbcSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Truncation order `N` of the solution.
///
/// # Safety
/// `solution` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn frbc_solution_order(solution: *const FrbcSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.inner.basis().order())
}

/// Working precision of the solution in decimal digits.
///
/// # Safety
/// `solution` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn frbc_solution_digits(solution: *const FrbcSolution) -> u32 {
    solution.as_ref().map_or(0, |s| s.inner.context().digits())
}

/// `y'(0)` as a decimal string.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frbc_solution_slope(solution: *const FrbcSolution, out: *mut *mut c_char) -> FrbcStatus {
    guard(|| {
        let sol = self::solution(solution)?;
        let slope = sol.slope_at_origin().map_err(fail)?;
        write_out(out, to_c_string(sol.context().format(&slope)))
    })
}

/// `y(x)` (order 0), `y'(x)` (1) or `y''(x)` (2) at a decimal abscissa.
///
/// # Safety
/// `solution` must be a live handle; `x` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frbc_solution_eval(
    solution: *const FrbcSolution,
    x: *const c_char,
    order: u32,
    out: *mut *mut c_char,
) -> FrbcStatus {
    guard(|| {
        let sol = self::solution(solution)?;
        let ctx = sol.context();
        let x = ctx.parse(read_str(x, "x")?).map_err(fail)?;
        let v = sol.eval(&x, order).map_err(fail)?;
        write_out(out, to_c_string(ctx.format(&v)))
    })
}

/// As [`frbc_solution_eval`] with binary64 input and output.
///
/// # Safety
/// `solution` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frbc_solution_eval_f64(
    solution: *const FrbcSolution,
    x: f64,
    order: u32,
    out: *mut f64,
) -> FrbcStatus {
    guard(|| {
        let sol = self::solution(solution)?;
        if !x.is_finite() {
            set_error("x must be finite");
            return Err(FrbcStatus::InvalidArgument);
        }
        let v = sol.eval(&sol.context().from_f64(x), order).map_err(fail)?;
        write_out(out, v.to_f64())
    })
}

/// Neutral-atom energy for nuclear charge `charge` and initial slope
/// `slope`, both decimal strings, at `digits` precision.
///
/// # Safety
/// Strings must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frbc_energy(
    charge: *const c_char,
    slope: *const c_char,
    digits: u32,
    out: *mut *mut c_char,
) -> FrbcStatus {
    guard(|| {
        let ctx = PrecisionContext::new(digits).map_err(fail)?;
        let z = ctx.parse(read_str(charge, "charge")?).map_err(fail)?;
        let s = ctx.parse(read_str(slope, "slope")?).map_err(fail)?;
        let e = energy(&z, &s, &ctx).map_err(fail)?;
        write_out(out, to_c_string(ctx.format(&e)))
    })
}

/// Release a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frbc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
