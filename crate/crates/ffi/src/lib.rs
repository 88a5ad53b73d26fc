//! C ABI over the bergman-muntz library.
//!
//! Every fallible function returns a [`BmStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be read with [`bm_last_error_message`]. Objects cross the boundary as
//! opaque handles that must be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bergman_muntz::disk_space::{norm_sq, DiskFunction};
use bergman_muntz::error::Error;
use bergman_muntz::functions::HalfPlaneFunction;
use bergman_muntz::gammakit::{cgamma, power_inner};
use bergman_muntz::m2_space::m2_kernel;
use bergman_muntz::mellin_bergman::{h_kernel, mb_transform};
use bergman_muntz::sequences::{carleman_ratio, uniqueness_verdict, weierstrass_product, PointSequence, Verdict};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for BmComplex {
    fn from(z: Complex64) -> Self {
        BmComplex { re: z.re, im: z.im }
    }
}

impl From<BmComplex> for Complex64 {
    fn from(z: BmComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Pole = 4,
    Domain = 5,
    NonConvergence = 6,
    InsufficientData = 7,
    Precondition = 8,
    Panic = 9,
}

impl From<&Error> for BmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Pole(_) => BmStatus::Pole,
            Error::Domain(_) => BmStatus::Domain,
            Error::NonConvergence(_) => BmStatus::NonConvergence,
            Error::InsufficientData(_) => BmStatus::InsufficientData,
            Error::Precondition(_) => BmStatus::Precondition,
            Error::Parse(_) => BmStatus::Parse,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmVerdict {
    UniquenessSufficient = 0,
    ZeroSetSufficientDensity = 1,
    ZeroSetSufficientBlaschke = 2,
    Inconclusive = 3,
}

impl From<Verdict> for BmVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::UniquenessSufficient => BmVerdict::UniquenessSufficient,
            Verdict::ZeroSetSufficientDensity => BmVerdict::ZeroSetSufficientDensity,
            Verdict::ZeroSetSufficientBlaschke => BmVerdict::ZeroSetSufficientBlaschke,
            Verdict::Inconclusive => BmVerdict::Inconclusive,
        }
    }
}

/// Finite combination of powers ζ^(λ−1) in the Bergman space of the disk.
pub struct BmDiskFunction {
    f: DiskFunction,
    transform: HalfPlaneFunction,
}

/// Sorted sequence of points in the right half-plane.
pub struct BmSequence {
    seq: PointSequence,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Message of the last failed call on this thread, or NULL.
///
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn bm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

struct Failure(BmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(BmStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BmStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `body` with panics contained and errors recorded. Handles are never
/// mutated after construction, so a caught panic cannot leave one half-updated.
fn guard<F>(body: F) -> BmStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {msg}"));
            BmStatus::Panic
        }
    }
}

/// # Safety
/// `out` must be NULL or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `s` must be NULL or a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("input string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(BmStatus::InvalidUtf8, e.to_string()))
}

/// # Safety
/// `h` must be NULL or a live handle from this library.
unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null("handle"))
}

/// Γ(z).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_cgamma(z: BmComplex, out: *mut BmComplex) -> BmStatus {
    guard(|| write_out(out, cgamma(z.into())?.into()))
}

/// ⟨ζ^α, ζ^β⟩ in the Bergman space of the disk.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_power_inner(alpha: BmComplex, beta: BmComplex, out: *mut BmComplex) -> BmStatus {
    guard(|| write_out(out, power_inner(alpha.into(), beta.into())?.into()))
}

/// Reproducing kernel of ℳ²_ω at (z, w).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_m2_kernel(z: BmComplex, w: BmComplex, out: *mut BmComplex) -> BmStatus {
    guard(|| write_out(out, m2_kernel(z.into(), w.into())?.into()))
}

/// Reproducing kernel of the image space ℋ at (z, w).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_h_kernel(z: BmComplex, w: BmComplex, out: *mut BmComplex) -> BmStatus {
    guard(|| write_out(out, h_kernel(z.into(), w.into())?.into()))
}

fn disk_handle(f: DiskFunction) -> *mut BmDiskFunction {
    let transform = mb_transform(&f);
    Box::into_raw(Box::new(BmDiskFunction { f, transform }))
}

/// Σ c_k ζ^(λ_k − 1) from parallel arrays of length `len`.
///
/// # Safety
/// `lambdas` and `coeffs` must point to `len` readable values (or be NULL
/// when `len` is 0); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_disk_function_new(
    lambdas: *const BmComplex,
    coeffs: *const BmComplex,
    len: usize,
    out: *mut *mut BmDiskFunction,
) -> BmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let terms: Vec<(Complex64, Complex64)> = if len == 0 {
            Vec::new()
        } else {
            if lambdas.is_null() || coeffs.is_null() {
                return Err(null("term array"));
            }
            let l = std::slice::from_raw_parts(lambdas, len);
            let c = std::slice::from_raw_parts(coeffs, len);
            l.iter().zip(c).map(|(&a, &b)| (a.into(), b.into())).collect()
        };
        let f = DiskFunction::new(terms)?;
        out.write(disk_handle(f));
        Ok(())
    })
}

/// Parses `[{"lambda": [re, im], "coeff": [re, im]}, ...]`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_disk_function_from_json(json: *const c_char, out: *mut *mut BmDiskFunction) -> BmStatus {
    guard(|| {
        let text = read_str(json)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f: DiskFunction =
            serde_json::from_str(text).map_err(|e| Failure(BmStatus::Parse, format!("disk function: {e}")))?;
        out.write(disk_handle(f));
        Ok(())
    })
}

/// # Safety
/// `h` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_disk_function_free(h: *mut BmDiskFunction) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// ‖f‖² in the Bergman space of the disk.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_disk_function_norm_sq(h: *const BmDiskFunction, out: *mut f64) -> BmStatus {
    guard(|| write_out(out, norm_sq(&handle(h)?.f)))
}

/// Mellin–Bergman transform of `h` evaluated at z.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_mb_transform_eval(h: *const BmDiskFunction, z: BmComplex, out: *mut BmComplex) -> BmStatus {
    guard(|| write_out(out, handle(h)?.transform.eval(z.into())?.into()))
}

fn sequence_handle(seq: PointSequence) -> *mut BmSequence {
    Box::into_raw(Box::new(BmSequence { seq }))
}

/// Explicit points, sorted by modulus internally.
///
/// # Safety
/// `points` must point to `len` readable values (or be NULL when `len` is
/// 0); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_sequence_from_points(
    points: *const BmComplex,
    len: usize,
    out: *mut *mut BmSequence,
) -> BmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pts = if len == 0 {
            Vec::new()
        } else if points.is_null() {
            return Err(null("points"));
        } else {
            std::slice::from_raw_parts(points, len)
                .iter()
                .map(|&z| z.into())
                .collect()
        };
        out.write(sequence_handle(PointSequence::from_points(pts)?));
        Ok(())
    })
}

/// Parses `{"points": [[re, im], ...]}` or `{"rule": {...}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_sequence_from_json(json: *const c_char, out: *mut *mut BmSequence) -> BmStatus {
    guard(|| {
        let text = read_str(json)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let seq: PointSequence =
            serde_json::from_str(text).map_err(|e| Failure(BmStatus::Parse, format!("point sequence: {e}")))?;
        out.write(sequence_handle(seq));
        Ok(())
    })
}

/// # Safety
/// `h` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_sequence_free(h: *mut BmSequence) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of points, or 0 for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bm_sequence_len(h: *const BmSequence) -> usize {
    h.as_ref().map_or(0, |s| s.seq.len())
}

/// Completeness verdict for the powers ζ^(z_j − 1).
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_sequence_verdict(h: *const BmSequence, eps0: f64, out: *mut BmVerdict) -> BmStatus {
    guard(|| write_out(out, uniqueness_verdict(&handle(h)?.seq, eps0)?.verdict.into()))
}

/// Full sequence report as a JSON string, released with [`bm_string_free`].
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_sequence_report_json(h: *const BmSequence, eps0: f64, out: *mut *mut c_char) -> BmStatus {
    guard(|| {
        let report = uniqueness_verdict(&handle(h)?.seq, eps0)?;
        let text = serde_json::to_string(&report).map_err(|e| Failure(BmStatus::Parse, e.to_string()))?;
        let c = CString::new(text).map_err(|e| Failure(BmStatus::Parse, e.to_string()))?;
        write_out(out, c.into_raw())
    })
}

/// (1/log R) Σ_{|z_j| ≤ R} Re(1/z_j), for R > 1.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_carleman_ratio(h: *const BmSequence, r: f64, out: *mut f64) -> BmStatus {
    guard(|| write_out(out, carleman_ratio(&handle(h)?.seq, r)?))
}

/// Π (1 − z²/z_j²).
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_weierstrass_product(h: *const BmSequence, z: BmComplex, out: *mut BmComplex) -> BmStatus {
    guard(|| write_out(out, weierstrass_product(&handle(h)?.seq, z.into())?.value.into()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> BmComplex {
        BmComplex { re, im }
    }

    fn last_error() -> String {
        let p = bm_last_error_message();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
    }

    #[test]
    fn scalar_functions() {
        let mut out = c(0.0, 0.0);
        unsafe {
            assert_eq!(bm_cgamma(c(5.0, 0.0), &mut out), BmStatus::Ok);
            assert!((out.re - 24.0).abs() < 1e-12);
            assert!(bm_last_error_message().is_null());

            assert_eq!(bm_m2_kernel(c(1.0, 0.0), c(1.0, 0.0), &mut out), BmStatus::Ok);
            assert!((out.re - 1.0 / (8.0 * PI)).abs() < 1e-15);
            assert_eq!(bm_h_kernel(c(1.0, 0.0), c(1.0, 0.0), &mut out), BmStatus::Ok);
            assert!((out.re - 1.0 / (2.0 * PI)).abs() < 1e-15);

            // Δ = {|ζ − 1| < 1} with normalised area: the mean of |ζ|² is 1 + 1/2.
            assert_eq!(bm_power_inner(c(1.0, 0.0), c(1.0, 0.0), &mut out), BmStatus::Ok);
            assert!((out.re - 1.5).abs() < 1e-14);
        }
    }

    #[test]
    fn errors_are_reported() {
        let mut out = c(0.0, 0.0);
        unsafe {
            assert_eq!(bm_cgamma(c(-2.0, 0.0), &mut out), BmStatus::Pole);
            assert!(last_error().contains("pole"));
            assert_eq!(bm_m2_kernel(c(-2.0, 0.0), c(0.5, 0.0), &mut out), BmStatus::Domain);
            assert_eq!(bm_cgamma(c(1.0, 0.0), ptr::null_mut()), BmStatus::NullPointer);
            assert_eq!(bm_cgamma(c(1.0, 0.0), &mut out), BmStatus::Ok);
            assert!(bm_last_error_message().is_null());
        }
    }

    #[test]
    fn disk_function_handle() {
        let lambdas = [c(1.0, 0.0), c(2.0, 0.0)];
        let coeffs = [c(1.0, 0.0), c(1.0, 0.0)];
        let mut h = ptr::null_mut();
        let mut v = c(0.0, 0.0);
        let mut n = 0.0;
        unsafe {
            assert_eq!(
                bm_disk_function_new(lambdas.as_ptr(), coeffs.as_ptr(), 2, &mut h),
                BmStatus::Ok
            );
            // 1 + ζ ↦ 1 + (z+1)/2.
            assert_eq!(bm_mb_transform_eval(h, c(3.0, 0.0), &mut v), BmStatus::Ok);
            assert!((v.re - 3.0).abs() < 1e-12);
            assert_eq!(bm_disk_function_norm_sq(h, &mut n), BmStatus::Ok);
            // ‖1 + ζ‖² = 1 + 2 Re⟨ζ, 1⟩ + ‖ζ‖² = 1 + 2 + 3/2 by the mean-value property.
            assert!((n - 4.5).abs() < 1e-13);
            bm_disk_function_free(h);

            let json = CString::new(r#"[{"lambda": [2, 0], "coeff": [1, 0]}]"#).unwrap();
            assert_eq!(bm_disk_function_from_json(json.as_ptr(), &mut h), BmStatus::Ok);
            bm_disk_function_free(h);
            let bad = CString::new(r#"[{"lambda": [-1, 0], "coeff": [1, 0]}]"#).unwrap();
            assert_eq!(bm_disk_function_from_json(bad.as_ptr(), &mut h), BmStatus::Parse);
            assert_eq!(
                bm_mb_transform_eval(ptr::null(), c(1.0, 0.0), &mut v),
                BmStatus::NullPointer
            );
            bm_disk_function_free(ptr::null_mut());
        }
    }

    #[test]
    fn sequence_handle_round_trip() {
        let mut h = ptr::null_mut();
        let mut verdict = BmVerdict::Inconclusive;
        let mut v = c(0.0, 0.0);
        let mut ratio = 0.0;
        unsafe {
            let json = CString::new(r#"{"rule": {"kind": "arith", "params": {"a": 3}, "r_max": 3e5}}"#).unwrap();
            assert_eq!(bm_sequence_from_json(json.as_ptr(), &mut h), BmStatus::Ok);
            assert_eq!(bm_sequence_len(h), 100_000);
            assert_eq!(bm_sequence_verdict(h, 1.0, &mut verdict), BmStatus::Ok);
            assert_eq!(verdict, BmVerdict::ZeroSetSufficientDensity);
            assert_eq!(bm_weierstrass_product(h, c(1.5, 0.0), &mut v), BmStatus::Ok);
            assert!((v.re - 2.0 / PI).abs() < 1e-4);
            assert_eq!(bm_carleman_ratio(h, 0.5, &mut ratio), BmStatus::Precondition);

            let mut s = ptr::null_mut();
            assert_eq!(bm_sequence_report_json(h, 1.0, &mut s), BmStatus::Ok);
            let text = CStr::from_ptr(s).to_str().unwrap();
            assert!(text.contains("\"verdict\":\"ZeroSetSufficientDensity\""));
            bm_string_free(s);
            bm_sequence_free(h);

            let pts = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
            assert_eq!(bm_sequence_from_points(pts.as_ptr(), 3, &mut h), BmStatus::Ok);
            assert_eq!(bm_carleman_ratio(h, 3.0, &mut ratio), BmStatus::Ok);
            let expect = (1.0 + 0.5 + 1.0 / 3.0) / 3f64.ln();
            assert!((ratio - expect).abs() < 1e-14);
            bm_sequence_free(h);
            assert_eq!(bm_sequence_len(ptr::null()), 0);
        }
    }

    #[test]
    fn version_is_nul_terminated() {
        let v = unsafe { CStr::from_ptr(bm_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
