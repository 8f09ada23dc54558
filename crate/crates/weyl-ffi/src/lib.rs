//! C ABI for the Weyl-sum laboratory: opaque phase handles, plain-C result
//! structs, and integer error codes. Every function is safe to call with
//! null pointers (rejected with `WEYL_ERR_NULL`); ownership of handles
//! passes to the caller, who must release them with [`weyl_phase_free`].

use std::os::raw::c_char;

use weyl_lab::arc::cf_approx;
use weyl_lab::disc::disc_for_phase;
use weyl_lab::phase::PhaseVector;
use weyl_lab::repcount::{r_count, RepQuery};
use weyl_lab::sums::{prefix_max, weyl_sum};
use weyl_lab::weights::WeightSeq;
use weyl_lab::{dims, LabError};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylStatus {
    /// Success.
    WeylOk = 0,
    /// A parameter failed validation.
    WeylErrValidation = 2,
    /// The requested computation exceeds the work budget.
    WeylErrBudget = 3,
    /// Integer overflow / range error inside the computation.
    WeylErrRange = 4,
    /// A required pointer argument was null.
    WeylErrNull = 5,
}

fn status_of(e: &LabError) -> WeylStatus {
    match e {
        LabError::Validation(_) => WeylStatus::WeylErrValidation,
        LabError::Budget { .. } => WeylStatus::WeylErrBudget,
        LabError::Range(_) => WeylStatus::WeylErrRange,
    }
}

/// Opaque handle to a phase vector `(x_1, .., x_d)`.
pub struct WeylPhase {
    inner: PhaseVector,
}

/// A complex value as a plain C pair.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct WeylComplex {
    pub re: f64,
    pub im: f64,
}

/// Representation-count result for `R_d(k, N)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct WeylRepCount {
    pub total: u64,
    pub diagonal: u64,
    pub nondiagonal: u64,
}

/// Continued-fraction approximation `x ~ a/q + xi`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct WeylRational {
    pub a: i64,
    pub q: u64,
    pub xi: f64,
}

/// Creates a phase handle from `len` coefficients in `[0, 1)`. On success
/// writes the new handle to `out`; the caller owns it.
///
/// # Safety
/// `coeffs` must point to `len` readable doubles and `out` must be a valid
/// destination for one pointer.
#[no_mangle]
pub unsafe extern "C" fn weyl_phase_new(
    coeffs: *const f64,
    len: usize,
    out: *mut *mut WeylPhase,
) -> WeylStatus {
    if coeffs.is_null() || out.is_null() {
        return WeylStatus::WeylErrNull;
    }
    let slice = std::slice::from_raw_parts(coeffs, len);
    match PhaseVector::new(slice.to_vec()) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WeylPhase { inner }));
            WeylStatus::WeylOk
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a handle created by [`weyl_phase_new`]. Null is a no-op.
///
/// # Safety
/// `phase` must be null or a pointer previously returned by
/// [`weyl_phase_new`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn weyl_phase_free(phase: *mut WeylPhase) {
    if !phase.is_null() {
        drop(Box::from_raw(phase));
    }
}

/// Degree `d` of the phase behind the handle.
///
/// # Safety
/// `phase` must be a live handle from [`weyl_phase_new`].
#[no_mangle]
pub unsafe extern "C" fn weyl_phase_degree(phase: *const WeylPhase) -> u32 {
    if phase.is_null() {
        return 0;
    }
    (*phase).inner.degree()
}

/// Evaluates `S_d(x; N)` with unit weights into `out`.
///
/// # Safety
/// `phase` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_eval(
    phase: *const WeylPhase,
    n: u64,
    out: *mut WeylComplex,
) -> WeylStatus {
    if phase.is_null() || out.is_null() {
        return WeylStatus::WeylErrNull;
    }
    match weyl_sum(&(*phase).inner, &WeightSeq::Ones, n) {
        Ok(s) => {
            *out = WeylComplex {
                re: s.value.re,
                im: s.value.im,
            };
            WeylStatus::WeylOk
        }
        Err(e) => status_of(&e),
    }
}

/// Writes `max_{M <= N} |S_d(x; M)|` to `out_max` and the smallest
/// attaining `M` to `out_argmax` (either may be null to skip it).
///
/// # Safety
/// `phase` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_prefix_max(
    phase: *const WeylPhase,
    n: u64,
    out_max: *mut f64,
    out_argmax: *mut u64,
) -> WeylStatus {
    if phase.is_null() {
        return WeylStatus::WeylErrNull;
    }
    match prefix_max(&(*phase).inner, &WeightSeq::Ones, n) {
        Ok((m, at)) => {
            if !out_max.is_null() {
                *out_max = m;
            }
            if !out_argmax.is_null() {
                *out_argmax = at;
            }
            WeylStatus::WeylOk
        }
        Err(e) => status_of(&e),
    }
}

/// Exact extreme discrepancy of `x_1 n + .. + x_d n^d` mod 1, `n <= N`.
///
/// # Safety
/// `phase` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_discrepancy(
    phase: *const WeylPhase,
    n: u64,
    out: *mut f64,
) -> WeylStatus {
    if phase.is_null() || out.is_null() {
        return WeylStatus::WeylErrNull;
    }
    match disc_for_phase(&(*phase).inner, n) {
        Ok(r) => {
            *out = r.value;
            WeylStatus::WeylOk
        }
        Err(e) => status_of(&e),
    }
}

/// Counts `R_d(k, N)` quadruples with its diagonal breakdown.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_rep_count(
    d: u32,
    k: i64,
    n: u64,
    out: *mut WeylRepCount,
) -> WeylStatus {
    if out.is_null() {
        return WeylStatus::WeylErrNull;
    }
    match r_count(RepQuery {
        d,
        k: k as i128,
        n,
    }) {
        Ok(r) => {
            // The C surface is 64-bit; counts beyond it are a range error.
            let (Ok(total), Ok(diagonal), Ok(nondiagonal)) = (
                u64::try_from(r.total),
                u64::try_from(r.diagonal),
                u64::try_from(r.nondiagonal),
            ) else {
                return WeylStatus::WeylErrRange;
            };
            *out = WeylRepCount {
                total,
                diagonal,
                nondiagonal,
            };
            WeylStatus::WeylOk
        }
        Err(e) => status_of(&e),
    }
}

/// Best continued-fraction convergent of `x` with denominator at most
/// `qmax`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_cf_approx(
    x: f64,
    qmax: u64,
    out: *mut WeylRational,
) -> WeylStatus {
    if out.is_null() {
        return WeylStatus::WeylErrNull;
    }
    match cf_approx(x, qmax) {
        Ok(r) => {
            *out = WeylRational {
                a: r.a,
                q: r.q,
                xi: r.xi,
            };
            WeylStatus::WeylOk
        }
        Err(e) => status_of(&e),
    }
}

/// Dimension exponent `s(d, alpha)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_s_dim(d: u32, alpha: f64, out: *mut f64) -> WeylStatus {
    if out.is_null() {
        return WeylStatus::WeylErrNull;
    }
    match dims::s_dim(d, alpha) {
        Ok(v) => {
            *out = v;
            WeylStatus::WeylOk
        }
        Err(e) => status_of(&e),
    }
}

/// Dimension exponent `u(d, alpha)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_u_dim(d: u32, alpha: f64, out: *mut f64) -> WeylStatus {
    if out.is_null() {
        return WeylStatus::WeylErrNull;
    }
    match dims::u_dim(d, alpha) {
        Ok(v) => {
            *out = v;
            WeylStatus::WeylOk
        }
        Err(e) => status_of(&e),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn weyl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn phase_lifecycle_and_eval() {
        unsafe {
            let coeffs = [0.0f64, 1.0 / 7.0];
            let mut h: *mut WeylPhase = ptr::null_mut();
            assert_eq!(weyl_phase_new(coeffs.as_ptr(), 2, &mut h), WeylStatus::WeylOk);
            assert_eq!(weyl_phase_degree(h), 2);
            let mut z = WeylComplex::default();
            assert_eq!(weyl_eval(h, 7, &mut z), WeylStatus::WeylOk);
            let mag = (z.re * z.re + z.im * z.im).sqrt();
            assert!((mag - 7f64.sqrt()).abs() < 1e-9);
            weyl_phase_free(h);
        }
    }

    #[test]
    fn null_and_validation_codes() {
        unsafe {
            let mut h: *mut WeylPhase = ptr::null_mut();
            assert_eq!(
                weyl_phase_new(ptr::null(), 2, &mut h),
                WeylStatus::WeylErrNull
            );
            let bad = [1.5f64];
            assert_eq!(
                weyl_phase_new(bad.as_ptr(), 1, &mut h),
                WeylStatus::WeylErrValidation
            );
            let mut z = WeylComplex::default();
            assert_eq!(weyl_eval(ptr::null(), 5, &mut z), WeylStatus::WeylErrNull);
            weyl_phase_free(ptr::null_mut()); // no-op
        }
    }

    #[test]
    fn rep_count_taxicab() {
        unsafe {
            let mut r = WeylRepCount::default();
            assert_eq!(weyl_rep_count(3, 0, 12, &mut r), WeylStatus::WeylOk);
            assert_eq!((r.total, r.nondiagonal), (284, 8));
            assert_eq!(
                weyl_rep_count(1, 0, 12, &mut r),
                WeylStatus::WeylErrValidation
            );
        }
    }

    #[test]
    fn cf_and_dims() {
        unsafe {
            let mut r = WeylRational::default();
            assert_eq!(weyl_cf_approx(0.5, 10, &mut r), WeylStatus::WeylOk);
            assert_eq!((r.a, r.q), (1, 2));
            let mut v = 0.0f64;
            assert_eq!(weyl_s_dim(2, 0.5, &mut v), WeylStatus::WeylOk);
            assert_eq!(v, 2.0);
            assert_eq!(weyl_u_dim(2, 0.6, &mut v), WeylStatus::WeylOk);
            assert!((v - 1.75).abs() < 1e-12);
            assert_eq!(weyl_s_dim(2, 0.1, &mut v), WeylStatus::WeylErrValidation);
        }
    }

    #[test]
    fn discrepancy_and_prefix() {
        unsafe {
            let coeffs = [0.618033988749f64];
            let mut h: *mut WeylPhase = ptr::null_mut();
            assert_eq!(weyl_phase_new(coeffs.as_ptr(), 1, &mut h), WeylStatus::WeylOk);
            let mut dval = 0.0f64;
            assert_eq!(weyl_discrepancy(h, 100, &mut dval), WeylStatus::WeylOk);
            assert!(dval >= 1.0 && dval <= 10.0, "D = {dval}");
            let mut m = 0.0f64;
            let mut at = 0u64;
            assert_eq!(weyl_prefix_max(h, 100, &mut m, &mut at), WeylStatus::WeylOk);
            assert!(m >= 1.0 && at >= 1);
            weyl_phase_free(h);
        }
    }

    #[test]
    fn version_is_nul_terminated() {
        let p = weyl_version();
        let s = unsafe { std::ffi::CStr::from_ptr(p) };
        assert_eq!(s.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
