//! C ABI over `cold-core`.
//!
//! Every fallible call returns a [`ColdStatus`]; on failure the message is kept
//! per thread and read back with [`cold_last_error_message`]. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `*_free`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cold::cli::{self, ExperimentConfig, OutputFormat};
use cold::dynamics::{boundary_states, evolve, CdMode, DrivenProtocol, Tolerance};
use cold::models::SpinModel;
use cold::optimize::{run_restarts, Method, ModelContext, OptimizationOutcome, OptimizationProblem};
use cold::schedules::{AnnealingSchedule, ControlField, FrequencyConvention};
use cold::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    NumericalError = 4,
    Unsupported = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

pub const COLD_CD_NONE: u32 = 0;
pub const COLD_CD_LCD1: u32 = 1;
pub const COLD_CD_LCD2: u32 = 2;
pub const COLD_CD_EXACT: u32 = 3;
pub const COLD_CD_LATTICE: u32 = 4;

pub const COLD_METHOD_BPO: u32 = 0;
pub const COLD_METHOD_COLD: u32 = 1;
pub const COLD_METHOD_CRAB: u32 = 2;
pub const COLD_METHOD_COLD_CRAB: u32 = 3;

pub const COLD_FORMAT_CSV: u32 = 0;
pub const COLD_FORMAT_JSON: u32 = 1;

/// A benchmark model.
pub struct ColdModel {
    inner: SpinModel,
}

/// Result of a restart batch.
pub struct ColdOptimization {
    inner: OptimizationOutcome,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ColdStatus {
    match e {
        Error::Config { .. } | Error::UnknownFigure(_) => ColdStatus::ConfigError,
        Error::Unsupported(_) => ColdStatus::Unsupported,
        Error::Domain { .. }
        | Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::Empty(_)
        | Error::Io(_) => ColdStatus::InvalidArgument,
        _ => ColdStatus::NumericalError,
    }
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), (ColdStatus, String)>) -> ColdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ColdStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ColdStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, (ColdStatus, String)>;
}

impl<T> OrStatus<T> for cold::Result<T> {
    fn or_status(self) -> Result<T, (ColdStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (ColdStatus, String) {
    (ColdStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: String) -> (ColdStatus, String) {
    (ColdStatus::InvalidArgument, msg)
}

fn cd_mode(code: u32) -> Result<CdMode, (ColdStatus, String)> {
    Ok(match code {
        COLD_CD_NONE => CdMode::None,
        COLD_CD_LCD1 => CdMode::Lcd1,
        COLD_CD_LCD2 => CdMode::Lcd2,
        COLD_CD_EXACT => CdMode::ExactCd,
        COLD_CD_LATTICE => CdMode::LatticeCd,
        _ => return Err(invalid(format!("unknown CD mode code {code}"))),
    })
}

fn method(code: u32) -> Result<Method, (ColdStatus, String)> {
    Ok(match code {
        COLD_METHOD_BPO => Method::Bpo,
        COLD_METHOD_COLD => Method::Cold,
        COLD_METHOD_CRAB => Method::Crab,
        COLD_METHOD_COLD_CRAB => Method::ColdCrab,
        _ => return Err(invalid(format!("unknown method code {code}"))),
    })
}

/// # Safety
/// `ptr` must be null or point to `len` readable doubles.
unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], (ColdStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

/// Copies `src` into a caller buffer; `written` always receives the full length.
///
/// # Safety
/// `buf` must be null or hold `cap` doubles; `written` must be null or writable.
unsafe fn copy_out(src: &[f64], buf: *mut f64, cap: usize, written: *mut usize) -> Result<(), (ColdStatus, String)> {
    if !written.is_null() {
        *written = src.len();
    }
    if cap < src.len() {
        return Err((
            ColdStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", src.len()),
        ));
    }
    if !src.is_empty() {
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cold_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL, or 0
/// when no error has been recorded.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cold_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn new_model(out: *mut *mut ColdModel, make: impl FnOnce() -> cold::Result<SpinModel>) -> ColdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let m = make().or_status()?;
        *out = Box::into_raw(Box::new(ColdModel { inner: m }));
        Ok(())
    })
}

/// Two spins with coupling `j` and transverse field `h`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cold_model_two_spin(j: f64, h: f64, out: *mut *mut ColdModel) -> ColdStatus {
    new_model(out, || SpinModel::two_spin(j, h))
}

/// Open Ising chain of `n_sites` spins.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cold_model_ising(
    j: f64,
    z0: f64,
    x_f: f64,
    n_sites: usize,
    out: *mut *mut ColdModel,
) -> ColdStatus {
    new_model(out, || SpinModel::ising(j, z0, x_f, n_sites))
}

/// Single particle on a synthetic lattice of `n_sites` sites.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cold_model_lattice(j0: f64, v0: f64, n_sites: usize, out: *mut *mut ColdModel) -> ColdStatus {
    new_model(out, || SpinModel::lattice(j0, v0, n_sites))
}

/// Hilbert-space dimension, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cold_model_dim(model: *const ColdModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.dim())
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cold_model_free(model: *mut ColdModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Evolves over the model's ramp of duration `tau` with CD mode `cd` and the
/// half-sine control coefficients `coefficients[0..n_k]` (n_k = 0 for none),
/// writing the final fidelity.
///
/// # Safety
/// `model` must be a live handle, `coefficients` must hold `n_k` doubles and
/// `fidelity` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cold_evolve(
    model: *const ColdModel,
    tau: f64,
    cd: u32,
    coefficients: *const f64,
    n_k: usize,
    rtol: f64,
    fidelity: *mut f64,
) -> ColdStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if fidelity.is_null() {
            return Err(null("fidelity"));
        }
        let coeffs = slice(coefficients, n_k, "coefficients")?;
        if !(rtol > 0.0) {
            return Err(invalid(format!("rtol = {rtol} must be positive")));
        }
        let control = if coeffs.is_empty() {
            ControlField::zero(1, FrequencyConvention::HalfSine)
        } else {
            ControlField::new(coeffs.to_vec(), FrequencyConvention::HalfSine).or_status()?
        };
        let schedule = AnnealingSchedule::new(m.inner.schedule_kind(), tau).or_status()?;
        let p = DrivenProtocol::new(m.inner, schedule, control, cd_mode(cd)?).or_status()?;
        let (psi0, target) = boundary_states(&p).or_status()?;
        let r = evolve(&p, &psi0, &target, &Tolerance::relative(rtol)).or_status()?;
        *fidelity = r.fidelity;
        Ok(())
    })
}

/// Runs `restarts` seeded Powell searches for `method` with `n_k` coefficients
/// in the box [−half_box, half_box]. `cap` > 0 enables the amplitude penalty.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cold_optimize(
    model: *const ColdModel,
    method_code: u32,
    tau: f64,
    n_k: usize,
    restarts: usize,
    seed: u64,
    half_box: f64,
    cap: f64,
    out: *mut *mut ColdOptimization,
) -> ColdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if !(half_box > 0.0) {
            return Err(invalid(format!("half_box = {half_box} must be positive")));
        }
        let mut problem = OptimizationProblem::new(method(method_code)?, n_k)
            .or_status()?
            .with_box(half_box);
        problem.restarts = restarts;
        problem.base_seed = seed;
        problem.cap = (cap > 0.0).then_some(cap);
        let outcome = run_restarts(&problem, &ModelContext::new(m.inner), tau).or_status()?;
        *out = Box::into_raw(Box::new(ColdOptimization { inner: outcome }));
        Ok(())
    })
}

/// Best fidelity, or NaN for a null handle.
///
/// # Safety
/// `opt` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cold_optimization_best_fidelity(opt: *const ColdOptimization) -> f64 {
    opt.as_ref().map_or(f64::NAN, |o| o.inner.best_fidelity)
}

/// Number of restarts that failed to evolve.
///
/// # Safety
/// `opt` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cold_optimization_failed(opt: *const ColdOptimization) -> usize {
    opt.as_ref().map_or(0, |o| o.inner.n_failed)
}

/// Best coefficients. `written` receives the count even when `cap` is too small.
///
/// # Safety
/// `opt` must be a live handle, `buf` must hold `cap` doubles, `written` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cold_optimization_coefficients(
    opt: *const ColdOptimization,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> ColdStatus {
    guard(|| {
        let o = opt.as_ref().ok_or_else(|| null("opt"))?;
        copy_out(&o.inner.best_coefficients, buf, cap, written)
    })
}

/// Final fidelities of the successful restarts, in restart order.
///
/// # Safety
/// As [`cold_optimization_coefficients`].
#[no_mangle]
pub unsafe extern "C" fn cold_optimization_fidelities(
    opt: *const ColdOptimization,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> ColdStatus {
    guard(|| {
        let o = opt.as_ref().ok_or_else(|| null("opt"))?;
        copy_out(&o.inner.fidelities, buf, cap, written)
    })
}

/// # Safety
/// `opt` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cold_optimization_free(opt: *mut ColdOptimization) {
    if !opt.is_null() {
        drop(Box::from_raw(opt));
    }
}

/// Parses `config_text` (the `cold run` config format), runs it and returns the
/// table as a new string in `out`, released with [`cold_string_free`].
///
/// # Safety
/// `config_text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cold_run_config(config_text: *const c_char, format: u32, out: *mut *mut c_char) -> ColdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if config_text.is_null() {
            return Err(null("config_text"));
        }
        let text = CStr::from_ptr(config_text)
            .to_str()
            .map_err(|e| (ColdStatus::ConfigError, format!("config is not UTF-8: {e}")))?;
        let fmt = match format {
            COLD_FORMAT_CSV => OutputFormat::Csv,
            COLD_FORMAT_JSON => OutputFormat::Json,
            _ => return Err(invalid(format!("unknown format code {format}"))),
        };
        let config = ExperimentConfig::parse(text).or_status()?;
        let rows = cli::run_experiment(&config).or_status()?;
        let table = cli::output::to_string(&rows, fmt).or_status()?;
        let c = CString::new(table).map_err(|e| invalid(e.to_string()))?;
        *out = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cold_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
