//! C ABI for the cylsa solid-angle library.
//!
//! The surface is a classified scene behind an opaque handle plus plain
//! functions returning status codes; every output goes through caller-owned
//! pointers. `include/cylsa.h` is regenerated by the build script.

use std::os::raw::c_char;

use cylsa::analytic::omega;
use cylsa::geometry::{classify, CanonicalCase, CaseId, CylinderScene};
use cylsa::oracle::{mc_omega_case, quad_omega};
use cylsa::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CysaStatus {
    CysaOk = 0,
    CysaInvalidScene = 1,
    CysaSourceInsideDetector = 2,
    CysaAdjacentCap = 3,
    CysaDomainError = 4,
    CysaNumericalInconsistency = 5,
    CysaNonConvergence = 6,
    CysaNullPointer = 7,
}

fn status_of(err: &Error) -> CysaStatus {
    match err {
        Error::InvalidScene(_) => CysaStatus::CysaInvalidScene,
        Error::SourceInsideDetector => CysaStatus::CysaSourceInsideDetector,
        Error::AdjacentCap => CysaStatus::CysaAdjacentCap,
        Error::Domain(_) | Error::SurfaceNotPresent { .. } => CysaStatus::CysaDomainError,
        Error::NumericalInconsistency { .. } => CysaStatus::CysaNumericalInconsistency,
        Error::NonConvergence { .. } => CysaStatus::CysaNonConvergence,
    }
}

/// Classified scene handle. Create with `cysa_case_new`, release with
/// `cysa_case_free`.
pub struct CysaCase {
    inner: CanonicalCase,
}

/// Classify a scene described in the source frame (emitter at the origin,
/// emission axis along +x, cylinder axis parallel to z).
///
/// On success writes a heap-allocated handle to `out` and returns
/// `CysaOk`; on failure `out` is untouched.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cysa_case_new(
    r: f64,
    d: f64,
    z1: f64,
    z2: f64,
    alpha: f64,
    out: *mut *mut CysaCase,
) -> CysaStatus {
    if out.is_null() {
        return CysaStatus::CysaNullPointer;
    }
    match classify(&CylinderScene { r, d, z1, z2, alpha }) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(CysaCase { inner }));
            CysaStatus::CysaOk
        }
        Err(e) => status_of(&e),
    }
}

/// Release a handle returned by `cysa_case_new`. A null pointer is a no-op.
///
/// # Safety
/// `case` must be null or a pointer previously returned by `cysa_case_new`
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cysa_case_free(case: *mut CysaCase) {
    if !case.is_null() {
        drop(Box::from_raw(case));
    }
}

/// Case identifier: 1, 2 or 3 (0 for a null handle).
///
/// # Safety
/// `case` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cysa_case_id(case: *const CysaCase) -> i32 {
    match case.as_ref() {
        None => 0,
        Some(c) => match c.inner.case_id {
            CaseId::I => 1,
            CaseId::II => 2,
            CaseId::III => 3,
        },
    }
}

/// Canonical parameters of a classified scene. Any output pointer may be
/// null to skip that field.
///
/// # Safety
/// `case` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cysa_case_params(
    case: *const CysaCase,
    l1: *mut f64,
    l2: *mut f64,
    d: *mut f64,
    r: *mut f64,
    alpha_abs: *mut f64,
) -> CysaStatus {
    let Some(c) = case.as_ref() else {
        return CysaStatus::CysaNullPointer;
    };
    if let Some(p) = l1.as_mut() {
        *p = c.inner.l1;
    }
    if let Some(p) = l2.as_mut() {
        *p = c.inner.l2;
    }
    if let Some(p) = d.as_mut() {
        *p = c.inner.d;
    }
    if let Some(p) = r.as_mut() {
        *p = c.inner.r;
    }
    if let Some(p) = alpha_abs.as_mut() {
        *p = c.inner.alpha_abs;
    }
    CysaStatus::CysaOk
}

/// Closed-form emission fraction of a classified scene. `omega_cyl` and
/// `omega_circ` may be null; they receive the lateral-surface and end-disk
/// contributions.
///
/// # Safety
/// `case` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cysa_solid_angle(
    case: *const CysaCase,
    value: *mut f64,
    omega_cyl: *mut f64,
    omega_circ: *mut f64,
) -> CysaStatus {
    let Some(c) = case.as_ref() else {
        return CysaStatus::CysaNullPointer;
    };
    if value.is_null() {
        return CysaStatus::CysaNullPointer;
    }
    match omega(&c.inner) {
        Ok(sa) => {
            *value = sa.value;
            let (cyl, circ) = match (c.inner.case_id, sa.breakdown) {
                (_, Some(b)) => (b.cyl, b.circ),
                (CaseId::I, None) => (sa.value, 0.0),
                _ => (0.0, sa.value),
            };
            if let Some(p) = omega_cyl.as_mut() {
                *p = cyl;
            }
            if let Some(p) = omega_circ.as_mut() {
                *p = circ;
            }
            CysaStatus::CysaOk
        }
        Err(e) => status_of(&e),
    }
}

/// One-shot convenience: classify and evaluate in a single call.
///
/// # Safety
/// `value` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cysa_solid_angle_scene(
    r: f64,
    d: f64,
    z1: f64,
    z2: f64,
    alpha: f64,
    value: *mut f64,
) -> CysaStatus {
    if value.is_null() {
        return CysaStatus::CysaNullPointer;
    }
    match classify(&CylinderScene { r, d, z1, z2, alpha }).and_then(|c| omega(&c)) {
        Ok(sa) => {
            *value = sa.value;
            CysaStatus::CysaOk
        }
        Err(e) => status_of(&e),
    }
}

/// Reference value by adaptive quadrature of the master integral.
/// `achieved_tol` (nullable) receives the achieved error bound.
///
/// # Safety
/// `case` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cysa_quad_estimate(
    case: *const CysaCase,
    abs_tol: f64,
    value: *mut f64,
    achieved_tol: *mut f64,
) -> CysaStatus {
    let Some(c) = case.as_ref() else {
        return CysaStatus::CysaNullPointer;
    };
    if value.is_null() {
        return CysaStatus::CysaNullPointer;
    }
    match quad_omega(&c.inner, abs_tol) {
        Ok(est) => {
            *value = est.value;
            if let Some(p) = achieved_tol.as_mut() {
                *p = est.uncertainty;
            }
            CysaStatus::CysaOk
        }
        Err(e) => status_of(&e),
    }
}

/// Monte Carlo estimate by the cosine-sampled ray tracer. Deterministic for
/// fixed (scene, n, seed). `std_err` (nullable) receives the standard error.
/// Requires n >= 10000.
///
/// # Safety
/// `case` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cysa_mc_estimate(
    case: *const CysaCase,
    n: u64,
    seed: u64,
    value: *mut f64,
    std_err: *mut f64,
) -> CysaStatus {
    let Some(c) = case.as_ref() else {
        return CysaStatus::CysaNullPointer;
    };
    if value.is_null() {
        return CysaStatus::CysaNullPointer;
    }
    if n < 10_000 {
        return CysaStatus::CysaInvalidScene;
    }
    let est = mc_omega_case(&c.inner, n, seed);
    *value = est.value;
    if let Some(p) = std_err.as_mut() {
        *p = est.uncertainty;
    }
    CysaStatus::CysaOk
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cysa_status_message(status: CysaStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        CysaStatus::CysaOk => b"ok\0",
        CysaStatus::CysaInvalidScene => b"invalid scene\0",
        CysaStatus::CysaSourceInsideDetector => b"source lies inside the detector\0",
        CysaStatus::CysaAdjacentCap => b"near end plane passes through the source\0",
        CysaStatus::CysaDomainError => b"argument outside the valid domain\0",
        CysaStatus::CysaNumericalInconsistency => b"result outside [0, 1] beyond tolerance\0",
        CysaStatus::CysaNonConvergence => b"quadrature did not converge\0",
        CysaStatus::CysaNullPointer => b"null pointer argument\0",
    };
    msg.as_ptr() as *const c_char
}
