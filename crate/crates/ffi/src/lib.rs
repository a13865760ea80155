//! C ABI over the numrange library.
//!
//! Every fallible call returns an [`NrStatus`] and writes results through out
//! pointers. Complex vectors are interleaved `re, im` doubles, so a vector of
//! dimension `n` occupies `2n` doubles. The message of the last failure on the
//! calling thread is available from [`nr_last_error`].

use numrange::bloch::{r_star, s_star, BlochInputs};
use numrange::geometry::{spiral_radius, starlike_radius};
use numrange::linalg::C64;
use numrange::oracle::{sup_re_pairing, Mode, OracleConfig};
use numrange::resolvent::{nullp_radius, solve_resolvent, SolverConfig};
use numrange::{load_map, Error, HoloMap};
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes shared by every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    DimensionMismatch = 5,
    Domain = 6,
    InfiniteInput = 7,
    Precondition = 8,
    ConditionFailed = 9,
    NoRoot = 10,
    NoConvergence = 11,
    JacobianSingular = 12,
    SingularPoint = 13,
    Io = 14,
    Panic = 15,
}

/// Opaque handle to a holomorphic map on a ball.
pub struct NrMap {
    inner: HoloMap,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> NrStatus {
    match e {
        Error::DimensionMismatch { .. } => NrStatus::DimensionMismatch,
        Error::SingularPoint(_) => NrStatus::SingularPoint,
        Error::Parse(_) => NrStatus::Parse,
        Error::Validation { .. } => NrStatus::Validation,
        Error::Domain(_) => NrStatus::Domain,
        Error::InfiniteInput(_) => NrStatus::InfiniteInput,
        Error::Precondition(_) => NrStatus::Precondition,
        Error::ConditionFailed(_) => NrStatus::ConditionFailed,
        Error::NoRoot(_) => NrStatus::NoRoot,
        Error::NoConvergence { .. } => NrStatus::NoConvergence,
        Error::JacobianSingular(_) => NrStatus::JacobianSingular,
        Error::Io(_) => NrStatus::Io,
    }
}

struct Fail(NrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(NrStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            NrStatus::Ok
        }
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            NrStatus::Panic
        }
    }
}

fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, by contract, valid for one write
    unsafe { out.write(v) };
    Ok(())
}

fn map_ref<'a>(map: *const NrMap) -> Result<&'a HoloMap, Fail> {
    // SAFETY: handles come from nr_map_from_json and stay valid until freed
    unsafe { map.as_ref() }.map(|m| &m.inner).ok_or_else(|| null("map"))
}

fn read_vec(ptr: *const f64, dim: usize, what: &str) -> Result<Vec<C64>, Fail> {
    if ptr.is_null() {
        return Err(null(what));
    }
    // SAFETY: the caller provides 2·dim doubles
    let s = unsafe { std::slice::from_raw_parts(ptr, 2 * dim) };
    Ok(s.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect())
}

fn write_vec(ptr: *mut f64, v: &[C64], what: &str) -> Result<(), Fail> {
    if ptr.is_null() {
        return Err(null(what));
    }
    // SAFETY: the caller provides room for 2·dim doubles
    let s = unsafe { std::slice::from_raw_parts_mut(ptr, 2 * v.len()) };
    for (pair, z) in s.chunks_exact_mut(2).zip(v) {
        pair[0] = z.re;
        pair[1] = z.im;
    }
    Ok(())
}

fn check_dim(map: &HoloMap, dim: usize) -> Result<(), Fail> {
    if dim != map.dim() {
        return Err(Error::DimensionMismatch { expected: map.dim(), got: dim }.into());
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn nr_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: buf is valid for len bytes and n < len
            unsafe {
                std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Parses a JSON map specification into a new handle, to be released with
/// [`nr_map_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_map_from_json(json: *const c_char, out: *mut *mut NrMap) -> NrStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: NUL-terminated by contract
        let text = unsafe { CStr::from_ptr(json) }.to_str().map_err(|e| Fail(NrStatus::InvalidUtf8, e.to_string()))?;
        let map = load_map(text)?;
        write(out, Box::into_raw(Box::new(NrMap { inner: map })), "out")
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `map` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nr_map_free(map: *mut NrMap) {
    if !map.is_null() {
        // SAFETY: created by Box::into_raw in nr_map_from_json
        drop(unsafe { Box::from_raw(map) });
    }
}

/// # Safety
/// `map` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_map_dim(map: *const NrMap, out: *mut usize) -> NrStatus {
    guard(|| write(out, map_ref(map)?.dim(), "out"))
}

/// # Safety
/// `map` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_map_radius(map: *const NrMap, out: *mut f64) -> NrStatus {
    guard(|| write(out, map_ref(map)?.radius(), "out"))
}

/// `h(x)` for `x` of dimension `dim`.
///
/// # Safety
/// `x` must hold `2·dim` doubles and `out` room for `2·dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn nr_map_eval(map: *const NrMap, x: *const f64, dim: usize, out: *mut f64) -> NrStatus {
    guard(|| {
        let m = map_ref(map)?;
        check_dim(m, dim)?;
        let hx = m.eval(&read_vec(x, dim, "x")?)?;
        write_vec(out, &hx, "out")
    })
}

/// Sampled sup (`inf` nonzero: inf) over `‖x‖ = r` of `Re⟨e^{iθ}(h(x) − s·h(0)), x⟩`
/// with `s = 1` when `subtract_h0` is nonzero.
///
/// # Safety
/// `map` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_sphere_pairing(
    map: *const NrMap,
    r: f64,
    theta: f64,
    subtract_h0: i32,
    inf: i32,
    seed: u64,
    out: *mut f64,
) -> NrStatus {
    guard(|| {
        let m = map_ref(map)?;
        let mode = if inf != 0 { Mode::Inf } else { Mode::Sup };
        let est = sup_re_pairing(m, r, theta, subtract_h0 != 0, mode, &OracleConfig::with_seed(seed))?;
        write(out, est.value, "out")
    })
}

/// Solves `λx − h(x) = z` by damped Newton; `r_cap` may be infinite.
///
/// # Safety
/// `z` must hold `2·dim` doubles, `x_out` room for `2·dim` doubles and
/// `residual` be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_solve_resolvent(
    map: *const NrMap,
    lambda_re: f64,
    lambda_im: f64,
    z: *const f64,
    dim: usize,
    r_cap: f64,
    x_out: *mut f64,
    residual: *mut f64,
) -> NrStatus {
    guard(|| {
        let m = map_ref(map)?;
        check_dim(m, dim)?;
        let z = read_vec(z, dim, "z")?;
        let t = solve_resolvent(m, C64::new(lambda_re, lambda_im), &z, r_cap, &SolverConfig::default())?;
        if !t.converged {
            return Err(Error::NoConvergence { iterations: t.iterations, residual: t.residual }.into());
        }
        write_vec(x_out, &t.solution, "x_out")?;
        if !residual.is_null() {
            write(residual, t.residual, "residual")?;
        }
        Ok(())
    })
}

/// Null-point radius for `‖h(0)‖ = c` and `L`; fails when `L + 4c < 0` does not hold.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_nullp_radius(c: f64, lip: f64, out: *mut f64) -> NrStatus {
    guard(|| {
        let r = nullp_radius(c, lip).ok_or_else(|| Fail(NrStatus::ConditionFailed, format!("L + 4c < 0 fails for c = {c}, L = {lip}")))?;
        write(out, r, "out")
    })
}

/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_starlike_radius(theta: f64, out: *mut f64) -> NrStatus {
    guard(|| write(out, starlike_radius(theta)?, "out"))
}

/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_spiral_radius(theta: f64, out: *mut f64) -> NrStatus {
    guard(|| write(out, spiral_radius(theta)?, "out"))
}

/// Root `r*` of the Bloch profile for hand values of `θ`, `L` and `δ`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nr_bloch_r_star(theta: f64, lip: f64, delta: f64, out: *mut f64) -> NrStatus {
    guard(|| write(out, r_star(&BlochInputs::new(theta, lip, delta)?)?.value, "out"))
}

/// `s*` and `ρ(s*)` for hand values of `θ`, `L` and `δ`.
///
/// # Safety
/// `s_out` and `rho_out` must be valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn nr_bloch_s_star(theta: f64, lip: f64, delta: f64, s_out: *mut f64, rho_out: *mut f64) -> NrStatus {
    guard(|| {
        let s = s_star(&BlochInputs::new(theta, lip, delta)?)?;
        write(s_out, s.value, "s_out")?;
        write(rho_out, s.rho_at, "rho_out")
    })
}
