//! C ABI over the equiaffine curve library.
//!
//! Curves are opaque handles created by the `eqa_curve_*` constructors and
//! released with [`eqa_curve_free`]. Strings returned through out-pointers
//! are heap allocated and must be released with [`eqa_string_free`]. Every
//! fallible call returns a status code; on failure a human-readable message
//! is available through [`eqa_last_error`] until the next call on the same
//! thread. All entry points catch panics and convert them to
//! `EQA_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use equiaffine::curve::{make_catalog, SampledCurve};
use equiaffine::formats;
use equiaffine::group::random_map;
use equiaffine::invariants::check_regular;
use equiaffine::linalg::{Mat, Vector};
use equiaffine::reconstruct::integrate_frame;
use equiaffine::{
    arc_length, check_equivalence, invariant_profile, reparametrize, CurveProvider, Error, Result,
};

/// Outcome of a library call. Values above `EQA_STATUS_DISTINCT` are
/// errors; `eqa_last_error` describes the most recent one.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EqaStatus {
    /// Success. For equivalence checks: the curves are equivalent.
    Ok = 0,
    /// The equivalence check completed and the curves are not equivalent.
    Distinct = 1,
    /// Malformed input: JSON, CSV, catalog name, or parameters.
    Parse = 2,
    /// The curve fails the regularity requirement somewhere on its domain.
    Degenerate = 3,
    /// Dimension or grid mismatch between inputs.
    Dimension = 4,
    /// An initial frame whose determinant is not 1.
    NotUnimodular = 5,
    /// Frame integration lost unimodularity beyond the drift budget.
    Drift = 6,
    /// Any other failure, including caught panics.
    Internal = 7,
    /// A required pointer argument was null.
    NullArgument = 8,
}

/// Opaque curve handle.
pub struct EqaCurve {
    inner: Box<dyn CurveProvider>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean: Vec<u8> = msg.bytes().filter(|&b| b != 0).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).expect("nul bytes removed");
    });
}

fn fail(e: &Error) -> EqaStatus {
    set_error(&e.to_string());
    match e.exit_code() {
        2 => EqaStatus::Parse,
        3 => EqaStatus::Degenerate,
        4 => EqaStatus::Dimension,
        5 => EqaStatus::NotUnimodular,
        6 => EqaStatus::Drift,
        _ => EqaStatus::Internal,
    }
}

fn null_arg(which: &str) -> EqaStatus {
    set_error(&format!("null argument: {which}"));
    EqaStatus::NullArgument
}

fn guard<F: FnOnce() -> EqaStatus>(f: F) -> EqaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            EqaStatus::Internal
        }
    }
}

unsafe fn export_string(s: String, out: *mut *mut c_char) -> EqaStatus {
    match CString::new(s) {
        Ok(cs) => {
            *out = cs.into_raw();
            EqaStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior nul byte");
            EqaStatus::Internal
        }
    }
}

unsafe fn export_curve(provider: Box<dyn CurveProvider>, out: *mut *mut EqaCurve) -> EqaStatus {
    *out = Box::into_raw(Box::new(EqaCurve { inner: provider }));
    EqaStatus::Ok
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, which: &str) -> std::result::Result<&'a str, EqaStatus> {
    if ptr.is_null() {
        return Err(null_arg(which));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("argument {which} is not valid UTF-8"));
        EqaStatus::Parse
    })
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn eqa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next library call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn eqa_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn eqa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build a named catalog curve (`circle`, `ellipse`, `moment`, `helix`,
/// `parabola`) from `nparams` shape parameters.
///
/// # Safety
/// `name` must be NUL-terminated, `params` must point to `nparams` doubles
/// (null allowed when `nparams` is 0), and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqa_curve_catalog(
    name: *const c_char,
    params: *const f64,
    nparams: usize,
    out: *mut *mut EqaCurve,
) -> EqaStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let name = match utf8_arg(name, "name") {
            Ok(s) => s,
            Err(status) => return status,
        };
        if params.is_null() && nparams > 0 {
            return null_arg("params");
        }
        let params = if nparams == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(params, nparams)
        };
        match make_catalog(name, params) {
            Ok(curve) => export_curve(Box::new(curve), out),
            Err(e) => fail(&e),
        }
    })
}

/// Build a curve from spec JSON: `{"kind":"catalog"|"polynomial"|"sampled", ...}`.
/// Sampled specs without an `fd_order` field use order 4.
///
/// # Safety
/// `json` must be NUL-terminated and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqa_curve_from_json(
    json: *const c_char,
    out: *mut *mut EqaCurve,
) -> EqaStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let text = match utf8_arg(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match formats::curve_from_json(text, "curve json", 4) {
            Ok(provider) => export_curve(provider, out),
            Err(e) => fail(&e),
        }
    })
}

/// Build a curve from `npoints` samples of an n-dimensional curve on the
/// uniform grid `t0 + i*h`. `points` is row major: sample i occupies
/// `points[i*n .. (i+1)*n]`. `fd_order` must be 2, 4, or 6.
///
/// # Safety
/// `points` must point to `npoints * n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqa_curve_sampled(
    n: usize,
    t0: f64,
    h: f64,
    fd_order: usize,
    points: *const f64,
    npoints: usize,
    out: *mut *mut EqaCurve,
) -> EqaStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        if points.is_null() {
            return null_arg("points");
        }
        let flat = std::slice::from_raw_parts(points, npoints.saturating_mul(n));
        let rows: Result<Vec<Vector>> = flat
            .chunks(n.max(1))
            .map(|row| Vector::new(row.to_vec()))
            .collect();
        let built = rows.and_then(|rows| SampledCurve::new(t0, h, rows, fd_order));
        match built {
            Ok(curve) => export_curve(Box::new(curve), out),
            Err(e) => fail(&e),
        }
    })
}

/// Release a curve handle. Null is ignored.
///
/// # Safety
/// `curve` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn eqa_curve_free(curve: *mut EqaCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Ambient dimension of the curve, or 0 for a null handle.
///
/// # Safety
/// `curve` must be a live handle from this library, or null.
#[no_mangle]
pub unsafe extern "C" fn eqa_curve_dim(curve: *const EqaCurve) -> usize {
    if curve.is_null() {
        0
    } else {
        (*curve).inner.dim()
    }
}

/// Parameter domain [a, b] of the curve.
///
/// # Safety
/// `curve` must be a live handle or null; `a` and `b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqa_curve_domain(
    curve: *const EqaCurve,
    a: *mut f64,
    b: *mut f64,
) -> EqaStatus {
    guard(|| {
        if curve.is_null() {
            return null_arg("curve");
        }
        if a.is_null() || b.is_null() {
            return null_arg("a/b");
        }
        let (lo, hi) = (*curve).inner.domain();
        *a = lo;
        *b = hi;
        EqaStatus::Ok
    })
}

/// Total equiaffine arc length over the curve's domain, from an `npts`-point
/// table (forced odd, at least 3).
///
/// # Safety
/// `curve` must be a live handle or null; `total` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqa_arc_length(
    curve: *const EqaCurve,
    npts: usize,
    total: *mut f64,
) -> EqaStatus {
    guard(|| {
        if curve.is_null() {
            return null_arg("curve");
        }
        if total.is_null() {
            return null_arg("total");
        }
        match arc_length(&*(*curve).inner, npts) {
            Ok(table) => {
                *total = table.total();
                EqaStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Curvature profile in natural parameter as CSV (`s,chi_1,...,chi_{n-1}`),
/// evaluated on an `npts`-point grid. The curve must be regular with
/// positive orientation over its whole domain.
///
/// # Safety
/// `curve` must be a live handle or null; `out_csv` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqa_profile_csv(
    curve: *const EqaCurve,
    npts: usize,
    out_csv: *mut *mut c_char,
) -> EqaStatus {
    guard(|| {
        if curve.is_null() {
            return null_arg("curve");
        }
        if out_csv.is_null() {
            return null_arg("out_csv");
        }
        let provider = &*(*curve).inner;
        let result = (|| -> Result<String> {
            check_regular(provider, npts)?;
            let natural = reparametrize(provider, npts)?;
            let profile = invariant_profile(&natural, npts)?;
            Ok(formats::profile_to_csv(&profile))
        })();
        match result {
            Ok(csv) => export_string(csv, out_csv),
            Err(e) => fail(&e),
        }
    })
}

/// Decide special-affine equivalence of two curves at tolerance `tol` on an
/// `npts`-point grid. Returns `EQA_STATUS_OK` when equivalent,
/// `EQA_STATUS_DISTINCT` when not. When `report_json` is non-null it
/// receives the full report (deviations, recovered map, residual) for either
/// verdict.
///
/// # Safety
/// `curve1` and `curve2` must be live handles or null; `report_json` must be
/// writable or null.
#[no_mangle]
pub unsafe extern "C" fn eqa_check_equivalence(
    curve1: *const EqaCurve,
    curve2: *const EqaCurve,
    npts: usize,
    tol: f64,
    report_json: *mut *mut c_char,
) -> EqaStatus {
    guard(|| {
        if curve1.is_null() || curve2.is_null() {
            return null_arg("curve1/curve2");
        }
        let c1 = &*(*curve1).inner;
        let c2 = &*(*curve2).inner;
        match check_equivalence(c1, c2, npts, tol) {
            Ok(report) => {
                let verdict = if report.equivalent {
                    EqaStatus::Ok
                } else {
                    EqaStatus::Distinct
                };
                if !report_json.is_null() {
                    let status = export_string(formats::report_to_json(&report), report_json);
                    if status != EqaStatus::Ok {
                        return status;
                    }
                }
                verdict
            }
            Err(e) => fail(&e),
        }
    })
}

/// Reconstruct a curve from curvature-spec JSON
/// (`{"n", "L", "channels":[...]}`) by integrating the frame system at step
/// `h` from the identity frame at the origin. Writes the node positions as
/// CSV (`s,x_1,...,x_n`).
///
/// # Safety
/// `spec_json` must be NUL-terminated and `out_csv` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqa_reconstruct_csv(
    spec_json: *const c_char,
    h: f64,
    out_csv: *mut *mut c_char,
) -> EqaStatus {
    guard(|| {
        if out_csv.is_null() {
            return null_arg("out_csv");
        }
        let text = match utf8_arg(spec_json, "spec_json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let result = (|| -> Result<String> {
            let spec = formats::curvature_spec_from_json(text, "curvature json")?;
            let n = spec.dim();
            let rec = integrate_frame(&spec, Mat::identity(n), Vector::zeros(n), h)?;
            let (ts, points): (Vec<f64>, Vec<Vector>) = rec
                .trace()
                .iter()
                .map(|state| (state.s, state.p.clone()))
                .unzip();
            Ok(formats::samples_to_csv("s", &ts, &points))
        })();
        match result {
            Ok(csv) => export_string(csv, out_csv),
            Err(e) => fail(&e),
        }
    })
}

/// Seeded random special-affine map of dimension `n` as JSON
/// (`{"n","B","tau"}`). The same `(n, seed)` always yields the same map.
///
/// # Safety
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqa_random_map_json(
    n: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> EqaStatus {
    guard(|| {
        if out_json.is_null() {
            return null_arg("out_json");
        }
        if n < 2 {
            set_error(&format!("dimension must be >= 2, got {n}"));
            return EqaStatus::Parse;
        }
        export_string(formats::map_to_json(&random_map(n, seed)), out_json)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    unsafe fn catalog(name: &str, params: &[f64]) -> *mut EqaCurve {
        let cname = CString::new(name).unwrap();
        let mut handle: *mut EqaCurve = ptr::null_mut();
        let status = eqa_curve_catalog(
            cname.as_ptr(),
            params.as_ptr(),
            params.len(),
            &mut handle,
        );
        assert_eq!(status, EqaStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_owned();
        eqa_string_free(ptr);
        s
    }

    #[test]
    fn catalog_roundtrip_and_dim() {
        unsafe {
            let circle = catalog("circle", &[2.0]);
            assert_eq!(eqa_curve_dim(circle), 2);
            let (mut a, mut b) = (0.0, 0.0);
            assert_eq!(eqa_curve_domain(circle, &mut a, &mut b), EqaStatus::Ok);
            assert!(a == 0.0 && (b - std::f64::consts::TAU).abs() < 1e-12);
            eqa_curve_free(circle);
        }
    }

    #[test]
    fn arc_length_matches_circle_formula() {
        unsafe {
            let circle = catalog("circle", &[2.0]);
            let mut total = 0.0;
            assert_eq!(eqa_arc_length(circle, 501, &mut total), EqaStatus::Ok);
            let expected = std::f64::consts::TAU * 2.0f64.powf(2.0 / 3.0);
            assert!((total - expected).abs() < 1e-8, "total = {total}");
            eqa_curve_free(circle);
        }
    }

    #[test]
    fn profile_header_and_unit_circle_curvature() {
        unsafe {
            let circle = catalog("circle", &[1.0]);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(eqa_profile_csv(circle, 201, &mut out), EqaStatus::Ok);
            let csv = take_string(out);
            let mut lines = csv.lines();
            assert_eq!(lines.next(), Some("s,chi_1"));
            let first: Vec<f64> = lines
                .next()
                .unwrap()
                .split(',')
                .map(|v| v.parse().unwrap())
                .collect();
            assert!((first[1] + 1.0).abs() < 1e-8);
            eqa_curve_free(circle);
        }
    }

    #[test]
    fn equivalence_verdicts() {
        unsafe {
            let e1 = catalog("ellipse", &[1.0, 2.0]);
            let e2 = catalog("ellipse", &[2.0, 1.0]);
            let e3 = catalog("ellipse", &[1.0, 3.0]);
            let mut report: *mut c_char = ptr::null_mut();
            assert_eq!(
                eqa_check_equivalence(e1, e2, 201, 1e-5, &mut report),
                EqaStatus::Ok
            );
            let text = take_string(report);
            assert!(text.contains("\"equivalent\": true"), "report = {text}");
            assert_eq!(
                eqa_check_equivalence(e1, e3, 201, 1e-5, ptr::null_mut()),
                EqaStatus::Distinct
            );
            eqa_curve_free(e1);
            eqa_curve_free(e2);
            eqa_curve_free(e3);
        }
    }

    #[test]
    fn sampled_curve_from_flat_buffer() {
        unsafe {
            let h = 1e-2;
            let count = 401;
            let mut flat = Vec::with_capacity(2 * count);
            for i in 0..count {
                let t = -2.0 + h * i as f64;
                flat.push(t.cos());
                flat.push(t.sin());
            }
            let mut handle: *mut EqaCurve = ptr::null_mut();
            let status = eqa_curve_sampled(2, -2.0, h, 4, flat.as_ptr(), count, &mut handle);
            assert_eq!(status, EqaStatus::Ok);
            let mut total = 0.0;
            assert_eq!(eqa_arc_length(handle, 201, &mut total), EqaStatus::Ok);
            eqa_curve_free(handle);
        }
    }

    #[test]
    fn curve_json_and_error_reporting() {
        unsafe {
            let good = CString::new(r#"{"kind":"catalog","name":"helix","params":[1,2,0.5]}"#)
                .unwrap();
            let mut handle: *mut EqaCurve = ptr::null_mut();
            assert_eq!(eqa_curve_from_json(good.as_ptr(), &mut handle), EqaStatus::Ok);
            assert_eq!(eqa_curve_dim(handle), 3);
            eqa_curve_free(handle);

            let bad = CString::new(r#"{"kind":"mystery"}"#).unwrap();
            let mut handle: *mut EqaCurve = ptr::null_mut();
            assert_eq!(
                eqa_curve_from_json(bad.as_ptr(), &mut handle),
                EqaStatus::Parse
            );
            let msg = CStr::from_ptr(eqa_last_error()).to_str().unwrap();
            assert!(msg.contains("curve json"), "msg = {msg}");
        }
    }

    #[test]
    fn degenerate_curve_reports_status() {
        unsafe {
            let line = CString::new(
                r#"{"kind":"polynomial","n":2,"coeffs":[[0,1],[0,1]],"domain":[0,1]}"#,
            )
            .unwrap();
            let mut handle: *mut EqaCurve = ptr::null_mut();
            assert_eq!(eqa_curve_from_json(line.as_ptr(), &mut handle), EqaStatus::Ok);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                eqa_profile_csv(handle, 101, &mut out),
                EqaStatus::Degenerate
            );
            eqa_curve_free(handle);
        }
    }

    #[test]
    fn reconstruct_matches_circle_closure() {
        unsafe {
            let spec = CString::new(
                r#"{"n":2,"L":6.283185307179586,"channels":[{"kind":"const","value":-1.0}]}"#,
            )
            .unwrap();
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(eqa_reconstruct_csv(spec.as_ptr(), 1e-3, &mut out), EqaStatus::Ok);
            let csv = take_string(out);
            let last = csv.lines().last().unwrap();
            let vals: Vec<f64> = last.split(',').map(|v| v.parse().unwrap()).collect();
            assert!(vals[1].abs() < 1e-5 && vals[2].abs() < 1e-5, "end = {last}");
        }
    }

    #[test]
    fn random_map_is_deterministic() {
        unsafe {
            let mut a: *mut c_char = ptr::null_mut();
            let mut b: *mut c_char = ptr::null_mut();
            assert_eq!(eqa_random_map_json(3, 7, &mut a), EqaStatus::Ok);
            assert_eq!(eqa_random_map_json(3, 7, &mut b), EqaStatus::Ok);
            let (sa, sb) = (take_string(a), take_string(b));
            assert_eq!(sa, sb);
            let mut c: *mut c_char = ptr::null_mut();
            assert_eq!(eqa_random_map_json(1, 0, &mut c), EqaStatus::Parse);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            assert_eq!(eqa_curve_dim(ptr::null()), 0);
            let mut total = 0.0;
            assert_eq!(
                eqa_arc_length(ptr::null(), 101, &mut total),
                EqaStatus::NullArgument
            );
            let circle = catalog("circle", &[1.0]);
            assert_eq!(
                eqa_arc_length(circle, 101, ptr::null_mut()),
                EqaStatus::NullArgument
            );
            eqa_curve_free(circle);
            eqa_curve_free(ptr::null_mut());
            eqa_string_free(ptr::null_mut());
        }
    }
}
