//! C ABI over the diffusion solver.
//!
//! Conventions:
//!
//! * Handles (`DiffuseMatrix`, `DiffuseReport`) are opaque; create them with
//!   the constructors here and release them with the matching `_free`.
//! * Every fallible function returns a [`DiffuseStatus`]; on failure a
//!   thread-local message is readable through
//!   [`diffuse_last_error_message`] until the next failing call on the same
//!   thread.
//! * Matrices are immutable once built and may be shared across threads;
//!   reports are owned by the caller.
//!
//! The C header is generated into `include/diffuse.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use diffuse_core::io::{
    make_fixture, normalize_matrix, read_edge_list, read_matrix_market, to_matrix_with_options,
    Fixture, NormalizationMode,
};
use diffuse_core::solver::{solve_eigen, solve_linear, SolveConfig, SolveReport};
use diffuse_core::vector::DenseVector;
use diffuse_core::{SchedulerKind, SparseMatrix};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffuseStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments were structurally valid but rejected (bad dimension,
    /// tolerance, fixture name, non-stochastic matrix, ...).
    InvalidArgument = 2,
    /// The input file could not be parsed; the message names the line.
    ParseError = 3,
    /// The input file could not be read.
    IoError = 4,
    /// A solver invariant failed or a dense routine rejected the instance.
    NumericalError = 5,
    /// A panic was caught at the boundary.
    Panic = 6,
}

/// Node-selection strategy for [`diffuse_solve_linear`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffuseScheduler {
    Cyclic = 0,
    Greedy = 1,
    Threshold = 2,
    Random = 3,
}

/// Opaque sparse matrix handle.
pub struct DiffuseMatrix {
    inner: SparseMatrix,
}

/// Opaque solve report handle.
pub struct DiffuseReport {
    inner: SolveReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let cstr = CString::new(msg.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstr));
}

fn status_of(err: &diffuse_core::Error) -> DiffuseStatus {
    use diffuse_core::Error as E;
    match err {
        E::Parse { .. } => DiffuseStatus::ParseError,
        E::Io { .. } => DiffuseStatus::IoError,
        E::InvariantViolated { .. }
        | E::SingularSystem
        | E::PowerIterationStalled { .. }
        | E::AlphaAboveOne { .. }
        | E::DenseCapExceeded { .. } => DiffuseStatus::NumericalError,
        _ => DiffuseStatus::InvalidArgument,
    }
}

fn fail(err: diffuse_core::Error) -> DiffuseStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

fn guard<F: FnOnce() -> DiffuseStatus>(f: F) -> DiffuseStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic caught at the C boundary");
            DiffuseStatus::Panic
        }
    }
}

/// # Safety
/// The returned pointer is owned by thread-local storage; it stays valid
/// until the next failing call on the same thread. May be null if no error
/// occurred yet.
#[no_mangle]
pub extern "C" fn diffuse_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

unsafe fn cstr_arg<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

unsafe fn emit_matrix(out: *mut *mut DiffuseMatrix, m: SparseMatrix) -> DiffuseStatus {
    *out = Box::into_raw(Box::new(DiffuseMatrix { inner: m }));
    DiffuseStatus::Ok
}

/// Reads a Matrix Market `coordinate real general` file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diffuse_matrix_read_mtx(
    path: *const c_char,
    out: *mut *mut DiffuseMatrix,
) -> DiffuseStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return DiffuseStatus::NullArgument;
        }
        let Some(path) = cstr_arg(path) else {
            set_error("path is null or not valid UTF-8");
            return DiffuseStatus::NullArgument;
        };
        match read_matrix_market(Path::new(path)) {
            Ok(m) => emit_matrix(out, m),
            Err(e) => fail(e),
        }
    })
}

/// Reads a 0-based `src dst [weight]` edge list with raw weights.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diffuse_matrix_read_edges(
    path: *const c_char,
    out: *mut *mut DiffuseMatrix,
) -> DiffuseStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return DiffuseStatus::NullArgument;
        }
        let Some(path) = cstr_arg(path) else {
            set_error("path is null or not valid UTF-8");
            return DiffuseStatus::NullArgument;
        };
        let el = match read_edge_list(Path::new(path)) {
            Ok(el) => el,
            Err(e) => return fail(e),
        };
        match to_matrix_with_options(&el, NormalizationMode::None, false) {
            Ok((m, _)) => emit_matrix(out, m),
            Err(e) => fail(e),
        }
    })
}

/// Builds a bundled fixture, e.g. `"snake"` or `"random_ergodic(50,7)"`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diffuse_matrix_fixture(
    name: *const c_char,
    out: *mut *mut DiffuseMatrix,
) -> DiffuseStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return DiffuseStatus::NullArgument;
        }
        let Some(name) = cstr_arg(name) else {
            set_error("name is null or not valid UTF-8");
            return DiffuseStatus::NullArgument;
        };
        let fixture: Fixture = match name.parse() {
            Ok(f) => f,
            Err(e) => return fail(e),
        };
        match make_fixture(&fixture) {
            Ok((m, _)) => emit_matrix(out, m),
            Err(e) => fail(e),
        }
    })
}

/// Produces a normalized copy: `damping = 0` makes columns stochastic,
/// `0 < damping < 1` additionally scales them by the damping factor.
/// `patch_dangling` rewrites dangling columns to uniform columns first.
///
/// # Safety
/// `m` must be a live handle from this library and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diffuse_matrix_normalize(
    m: *const DiffuseMatrix,
    damping: f64,
    patch_dangling: bool,
    out: *mut *mut DiffuseMatrix,
) -> DiffuseStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            set_error("matrix or out pointer is null");
            return DiffuseStatus::NullArgument;
        }
        let mode = if damping == 0.0 {
            NormalizationMode::ColumnStochastic
        } else {
            NormalizationMode::Damped(damping)
        };
        match normalize_matrix(&(*m).inner, mode, patch_dangling) {
            Ok((m, _)) => emit_matrix(out, m),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `m` must be a live handle from this library (or null, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn diffuse_matrix_dim(m: *const DiffuseMatrix) -> usize {
    if m.is_null() {
        return 0;
    }
    (*m).inner.dim()
}

/// # Safety
/// `m` must be a live handle from this library (or null, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn diffuse_matrix_nnz(m: *const DiffuseMatrix) -> usize {
    if m.is_null() {
        return 0;
    }
    (*m).inner.nnz()
}

/// # Safety
/// `m` must come from this library and must not be used afterwards. Null is
/// a no-op.
#[no_mangle]
pub unsafe extern "C" fn diffuse_matrix_free(m: *mut DiffuseMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

fn scheduler_kind(s: DiffuseScheduler, seed: u64) -> SchedulerKind {
    match s {
        DiffuseScheduler::Cyclic => SchedulerKind::Cyclic,
        DiffuseScheduler::Greedy => SchedulerKind::GreedyAbs,
        DiffuseScheduler::Threshold => SchedulerKind::Threshold,
        DiffuseScheduler::Random => SchedulerKind::Random { seed },
    }
}

/// Solves `X = P*X + B`. `b` may be null for the uniform right-hand side
/// `1/n`; otherwise it must point to `b_len == n` doubles.
///
/// # Safety
/// `m` must be a live handle; `b`, when non-null, must point to `b_len`
/// readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn diffuse_solve_linear(
    m: *const DiffuseMatrix,
    b: *const f64,
    b_len: usize,
    epsilon: f64,
    max_steps: u64,
    scheduler: DiffuseScheduler,
    seed: u64,
    out: *mut *mut DiffuseReport,
) -> DiffuseStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            set_error("matrix or out pointer is null");
            return DiffuseStatus::NullArgument;
        }
        let matrix = &(*m).inner;
        let n = matrix.dim();
        let rhs = if b.is_null() {
            DenseVector::uniform(n, 1.0 / n.max(1) as f64)
        } else {
            DenseVector::from_vec(std::slice::from_raw_parts(b, b_len).to_vec())
        };
        let cfg = SolveConfig {
            epsilon,
            max_steps,
            scheduler: scheduler_kind(scheduler, seed),
            ..SolveConfig::default()
        };
        match solve_linear(matrix, &rhs, &cfg) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(DiffuseReport { inner: report }));
                DiffuseStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Computes the dominant eigenvector of a column-stochastic matrix with the
/// negative-only schedule.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diffuse_solve_eigen(
    m: *const DiffuseMatrix,
    epsilon: f64,
    max_steps: u64,
    out: *mut *mut DiffuseReport,
) -> DiffuseStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            set_error("matrix or out pointer is null");
            return DiffuseStatus::NullArgument;
        }
        let cfg = SolveConfig {
            epsilon,
            max_steps,
            scheduler: SchedulerKind::NegativeOnly,
            ..SolveConfig::default()
        };
        match solve_eigen(&(*m).inner, &cfg) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(DiffuseReport { inner: report }));
                DiffuseStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must be a live handle from this library (or null, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn diffuse_report_dim(r: *const DiffuseReport) -> usize {
    if r.is_null() {
        return 0;
    }
    (*r).inner.solution.len()
}

/// # Safety
/// `r` must be a live handle from this library (or null, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn diffuse_report_steps(r: *const DiffuseReport) -> u64 {
    if r.is_null() {
        return 0;
    }
    (*r).inner.steps_used
}

/// # Safety
/// `r` must be a live handle from this library (or null, which yields false).
#[no_mangle]
pub unsafe extern "C" fn diffuse_report_converged(r: *const DiffuseReport) -> bool {
    if r.is_null() {
        return false;
    }
    (*r).inner.converged
}

/// # Safety
/// `r` must be a live handle from this library (or null, which yields false).
#[no_mangle]
pub unsafe extern "C" fn diffuse_report_oscillation_detected(r: *const DiffuseReport) -> bool {
    if r.is_null() {
        return false;
    }
    (*r).inner.oscillation_detected
}

/// Final L1 norm of the residual fluid.
///
/// # Safety
/// `r` must be a live handle from this library (or null, which yields NaN).
#[no_mangle]
pub unsafe extern "C" fn diffuse_report_final_fluid_l1(r: *const DiffuseReport) -> f64 {
    if r.is_null() {
        return f64::NAN;
    }
    (*r).inner.final_norms.l1
}

/// Copies the solution vector into `buf`, which must hold exactly
/// `diffuse_report_dim(r)` doubles.
///
/// # Safety
/// `r` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn diffuse_report_copy_solution(
    r: *const DiffuseReport,
    buf: *mut f64,
    len: usize,
) -> DiffuseStatus {
    guard(|| {
        if r.is_null() || buf.is_null() {
            set_error("report or buffer pointer is null");
            return DiffuseStatus::NullArgument;
        }
        let solution = &(*r).inner.solution;
        if len != solution.len() {
            set_error(&format!(
                "buffer holds {len} entries but the solution has {}",
                solution.len()
            ));
            return DiffuseStatus::InvalidArgument;
        }
        std::slice::from_raw_parts_mut(buf, len).copy_from_slice(solution.as_slice());
        DiffuseStatus::Ok
    })
}

/// # Safety
/// `r` must come from this library and must not be used afterwards. Null is
/// a no-op.
#[no_mangle]
pub unsafe extern "C" fn diffuse_report_free(r: *mut DiffuseReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
