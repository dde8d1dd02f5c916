//! C ABI over `prim_cobordism`.
//!
//! Every entry point returns a [`PcStatus`]; on anything but `PC_STATUS_OK`
//! (and the verdict codes 1 and 3, which still fill their outputs) a
//! message is available from [`pc_last_error_message`] on the same thread.
//! Models live behind an opaque [`PcModel`] handle. Strings handed out by
//! the library are released with [`pc_string_free`]. Panics never cross
//! the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use prim_cobordism::bordism::{parity_chain, Outcome};
use prim_cobordism::cli::{self, Status, Subcommand};
use prim_cobordism::config::RunConfig;
use prim_cobordism::domain::ChartedDomain;
use prim_cobordism::multipoint::Analyzer;
use prim_cobordism::prim_map::{builtin_model, PrimMapModel, TrigPoly};
use prim_cobordism::tolerances::Tolerances;
use prim_cobordism::Error;

/// Result codes. 0 to 3 agree with the command-line exit status.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    /// A mathematical verdict failed; outputs are filled.
    VerdictFailed = 1,
    /// Bad arguments, config or model.
    Usage = 2,
    /// No verdict either way; outputs are filled.
    Inconclusive = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    /// The output buffer is too short; the needed length is still reported.
    BufferTooSmall = 6,
    Panic = 7,
}

impl From<Status> for PcStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Pass => PcStatus::Ok,
            Status::Failed => PcStatus::VerdictFailed,
            Status::Usage => PcStatus::Usage,
            Status::Inconclusive => PcStatus::Inconclusive,
        }
    }
}

/// Opaque model handle.
pub struct PcModel {
    inner: PrimMapModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(PcStatus, String);

type FfiResult<T> = std::result::Result<T, Failure>;

fn usage(e: Error) -> Failure {
    let status = match e {
        Error::IndeterminateRoots => PcStatus::Inconclusive,
        _ => PcStatus::Usage,
    };
    Failure(status, e.to_string())
}

fn null(name: &str) -> Failure {
    Failure(PcStatus::NullPointer, format!("`{name}` is null"))
}

/// Runs `body`, turning failures and panics into status codes.
fn guard(body: impl FnOnce() -> FfiResult<PcStatus>) -> PcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PcStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(PcStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

/// A length-`n` slice; `p` may be null only when `n` is 0.
unsafe fn read_slice<'a>(p: *const f64, n: usize, name: &str) -> FfiResult<&'a [f64]> {
    match (p.is_null(), n) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(null(name)),
        (false, _) => Ok(slice::from_raw_parts(p, n)),
    }
}

unsafe fn model_ref<'a>(m: *const PcModel) -> FfiResult<&'a PrimMapModel> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("model"))
}

fn hand_out(model: PrimMapModel, out: *mut *mut PcModel) -> PcStatus {
    // SAFETY: callers checked `out` for null.
    unsafe { *out = Box::into_raw(Box::new(PcModel { inner: model })) };
    PcStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a named model (`figure_eight`, `round_circle`, `round_torus`,
/// `tilted_torus`, `boy_surface`); `params` may be null when `n_params` is 0,
/// which selects the defaults.
///
/// # Safety
/// `name` must be a NUL-terminated string, `params` must point to
/// `n_params` doubles, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_model_builtin(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    out: *mut *mut PcModel,
) -> PcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        let params = read_slice(params, n_params, "params")?;
        Ok(hand_out(builtin_model(name, params).map_err(usage)?, out))
    })
}

/// A curve `θ ↦ (f(θ), h(θ))` from cosine and sine coefficients, constant
/// term first in the cosine lists and `sin θ` first in the sine lists.
///
/// # Safety
/// Each coefficient pointer must point to its count of doubles (or be null
/// with count 0), and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_model_trig_curve(
    f_cos: *const f64,
    n_f_cos: usize,
    f_sin: *const f64,
    n_f_sin: usize,
    h_cos: *const f64,
    n_h_cos: usize,
    h_sin: *const f64,
    n_h_sin: usize,
    out: *mut *mut PcModel,
) -> PcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = TrigPoly::new(read_slice(f_cos, n_f_cos, "f_cos")?.to_vec(), read_slice(f_sin, n_f_sin, "f_sin")?.to_vec());
        let h = TrigPoly::new(read_slice(h_cos, n_h_cos, "h_cos")?.to_vec(), read_slice(h_sin, n_h_sin, "h_sin")?.to_vec());
        Ok(hand_out(PrimMapModel::trig_curve(f, h), out))
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from a constructor here and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pc_model_free(model: *mut PcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Dimension of the source manifold, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_model_source_dim(model: *const PcModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.source_dim())
}

/// Number of values `pc_model_eval` writes, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_model_ambient_dim(model: *const PcModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.ambient_dim())
}

/// Number of coordinates `pc_model_eval` reads: angles on the circle and
/// torus, a nonzero vector of R³ on the projective plane.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_model_coord_count(model: *const PcModel) -> usize {
    model.as_ref().map_or(0, |m| match m.inner.domain {
        ChartedDomain::Circle => 1,
        ChartedDomain::Torus => 2,
        ChartedDomain::ProjectivePlane => 3,
    })
}

/// Evaluates the lift at one point, writing `pc_model_ambient_dim` values
/// (projection first, height last).
///
/// # Safety
/// `coords` must point to `n_coords` doubles and `out` to `out_len`.
#[no_mangle]
pub unsafe extern "C" fn pc_model_eval(
    model: *const PcModel,
    coords: *const f64,
    n_coords: usize,
    out: *mut f64,
    out_len: usize,
) -> PcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let want = pc_model_coord_count(model);
        if n_coords != want {
            return Err(Failure(PcStatus::Usage, format!("{} takes {want} coordinates, got {n_coords}", m.name)));
        }
        let coords = read_slice(coords, n_coords, "coords")?;
        if m.domain == ChartedDomain::ProjectivePlane && coords.iter().all(|&c| c == 0.0) {
            return Err(Failure(PcStatus::Usage, "the zero vector is not a point of the projective plane".into()));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let g = m.eval(&m.domain.canonicalize(coords));
        if out_len < g.len() {
            return Err(Failure(PcStatus::BufferTooSmall, format!("need {} values, have room for {out_len}", g.len())));
        }
        slice::from_raw_parts_mut(out, g.len()).copy_from_slice(&g);
        Ok(PcStatus::Ok)
    })
}

/// Mixed-set counts `|Λ^r_1|, …, |Λ^r_r|` with default tolerances. The
/// number of levels goes to `len_out` even when `capacity` is too small.
/// Returns the chain verdict: `PC_STATUS_OK`, `PC_STATUS_VERDICT_FAILED`, or
/// `PC_STATUS_INCONCLUSIVE` for a rejected model (with no levels).
///
/// # Safety
/// `counts` must point to `capacity` slots (or be null with capacity 0) and
/// `len_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_chain_counts(
    model: *const PcModel,
    r: usize,
    counts: *mut usize,
    capacity: usize,
    len_out: *mut usize,
) -> PcStatus {
    guard(|| {
        let m = model_ref(model)?;
        if len_out.is_null() {
            return Err(null("len_out"));
        }
        let report = parity_chain(&Analyzer::new(m, Tolerances::default()), r).map_err(usage)?;
        let got = report.counts();
        *len_out = got.len();
        if capacity < got.len() {
            return Err(Failure(PcStatus::BufferTooSmall, format!("need {} slots, have {capacity}", got.len())));
        }
        if !got.is_empty() {
            if counts.is_null() {
                return Err(null("counts"));
            }
            slice::from_raw_parts_mut(counts, got.len()).copy_from_slice(&got);
        }
        Ok(match report.verdict {
            Outcome::Pass => PcStatus::Ok,
            Outcome::Fail => PcStatus::VerdictFailed,
            Outcome::Inconclusive | Outcome::Rejected => PcStatus::Inconclusive,
        })
    })
}

/// Runs a subcommand (`strata`, `multipoints`, `chain-verify`,
/// `trace-cobordism`, `normal-form`, `sweep`) on config text in the
/// command-line format and hands back the JSON report in `out_json`, to be
/// freed with `pc_string_free`. The status is the command-line exit status;
/// `out_json` is set to null when there is no report. `out` and `svg` keys
/// are ignored: nothing is written to disk.
///
/// # Safety
/// Both strings must be NUL-terminated and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn pc_run_json(
    subcommand: *const c_char,
    config_text: *const c_char,
    out_json: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        *out_json = ptr::null_mut();
        let sub: Subcommand = read_str(subcommand, "subcommand")?.parse().map_err(usage)?;
        let mut cfg = RunConfig::parse(read_str(config_text, "config_text")?).map_err(usage)?;
        cfg.out = None;
        cfg.svg = false;
        let output = cli::run(sub, &cfg);
        if let Some(msg) = output.message {
            set_error(msg);
        }
        if let Some(report) = output.report {
            let text = CString::new(report.to_json()).map_err(|e| Failure(PcStatus::Panic, e.to_string()))?;
            *out_json = text.into_raw();
        }
        Ok(output.status.into())
    })
}

/// Frees a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
