//! C ABI over `nsbounds`.
//!
//! Every fallible function returns an [`NsbStatus`] and writes its result
//! through an out-pointer. On failure the out-pointer is left untouched and
//! [`nsb_last_error`] holds a message for the calling thread. Handles are
//! opaque; free them with the matching `_free` function. Strings returned by
//! the library are freed with [`nsb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use nsbounds::config::RunConfig;
use nsbounds::forces::force_certificate;
use nsbounds::report::{CertificateReport, InflowSource};
use nsbounds::wellposedness::{FluidParams, GradBoundChoice, Status};
use nsbounds::{ChannelGeometry, Error};

/// Result codes. Certification outcome is not an error; it is reported in
/// [`NsbCertificateValues::certified`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidGeometry = 3,
    InvalidParameter = 4,
    IncompatibleInflow = 5,
    InvalidGrid = 6,
    Config = 7,
    NotCertified = 8,
    NonCubicBox = 9,
    CondaViolated = 10,
    SharpBoundInapplicable = 11,
    NoConvergence = 12,
    Panic = 13,
}

impl From<&Error> for NsbStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Geometry(_) | Error::VSpaceDenominator(_) => Self::InvalidGeometry,
            Error::ExponentOutOfRange(_) | Error::InvalidParameter { .. } => Self::InvalidParameter,
            Error::IncompatibleInflow(_) => Self::IncompatibleInflow,
            Error::Grid(_) | Error::EvenNodeCount(_) => Self::InvalidGrid,
            Error::SharpBoundInapplicable(_) => Self::SharpBoundInapplicable,
            Error::NonCubicBox { .. } => Self::NonCubicBox,
            Error::CondaViolated { .. } => Self::CondaViolated,
            Error::NoConvergence { .. } => Self::NoConvergence,
            Error::Config { .. } => Self::Config,
            Error::NotCertified { .. } => Self::NotCertified,
        }
    }
}

/// Channel and obstacle description.
pub struct NsbGeometry {
    inner: ChannelGeometry,
}

/// An evaluated certificate together with the inputs that produced it.
pub struct NsbCertificate {
    report: CertificateReport,
}

/// Numeric fields of a certificate. Absent values are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsbCertificateValues {
    pub certified: bool,
    pub phi: f64,
    pub phi_alternative: f64,
    pub threshold: f64,
    pub margin: f64,
    pub beta: f64,
    pub grad_bound_rough: f64,
    pub grad_bound_sharp: f64,
    pub bogovskii_m: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsbForceBounds {
    /// When false the bounds are formal values without a guarantee.
    pub certified: bool,
    pub grad_u_bound: f64,
    pub drag_bound: f64,
    pub lift_bound: f64,
    pub psi: f64,
    pub drag_bound_general: f64,
    pub lift_bound_general: f64,
    pub q1_l3: f64,
    pub q3_l3: f64,
    pub q1_h1: f64,
    pub q3_h1: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(NsbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(NsbStatus::from(&e), e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NsbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NsbStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic".into());
            NsbStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(NsbStatus::NullPointer, format!("`{name}` is NULL")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `s` must be NULL or a NUL-terminated string.
unsafe fn path_arg<'a>(s: *const c_char, name: &str) -> Result<&'a Path, Fail> {
    non_null(s, name)?;
    // SAFETY: non-null and NUL-terminated per the caller contract.
    let s = unsafe { CStr::from_ptr(s) };
    s.to_str()
        .map(Path::new)
        .map_err(|_| Fail(NsbStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

fn into_out<T>(out: *mut *mut T, value: T) {
    // SAFETY: callers check `out` for NULL first.
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nsb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL after a
/// successful call. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn nsb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be NULL or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn nsb_geometry_new(
    half_width: f64,
    a: f64,
    b: f64,
    c: f64,
    obstacle_volume: f64,
    out: *mut *mut NsbGeometry,
) -> NsbStatus {
    guard(|| {
        non_null(out, "out")?;
        let inner = ChannelGeometry::new(half_width, a, b, c, obstacle_volume)?;
        into_out(out, NsbGeometry { inner });
        Ok(())
    })
}

/// # Safety
/// `geometry` must be NULL or a handle from [`nsb_geometry_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nsb_geometry_free(geometry: *mut NsbGeometry) {
    if !geometry.is_null() {
        // SAFETY: allocated by Box in nsb_geometry_new.
        drop(unsafe { Box::from_raw(geometry) });
    }
}

/// Writes the constant `M` of the inflow extension.
///
/// # Safety
/// `geometry` must be a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nsb_geometry_bogovskii_m(geometry: *const NsbGeometry, out: *mut f64) -> NsbStatus {
    guard(|| {
        non_null(geometry, "geometry")?;
        non_null(out, "out")?;
        // SAFETY: both pointers checked above.
        unsafe { *out = (*geometry).inner.bogovskii_m() };
        Ok(())
    })
}

/// Writes whether the obstacle volume guarantees the cube-root branch, the
/// precondition of the explicit drag/lift bound.
///
/// # Safety
/// `geometry` must be a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nsb_geometry_conda(geometry: *const NsbGeometry, out: *mut bool) -> NsbStatus {
    guard(|| {
        non_null(geometry, "geometry")?;
        non_null(out, "out")?;
        // SAFETY: both pointers checked above.
        unsafe { *out = (*geometry).inner.conda() };
        Ok(())
    })
}

fn certify_source(geom: &ChannelGeometry, eta: f64, source: &InflowSource, compat_tol: f64) -> Result<NsbCertificate, Fail> {
    let fluid = FluidParams::new(eta)?;
    Ok(NsbCertificate {
        report: CertificateReport::evaluate(geom, &fluid, source, compat_tol)?,
    })
}

/// Certifies the cosine inflow of the given amplitude.
///
/// # Safety
/// `geometry` must be a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nsb_certify_analytic(
    geometry: *const NsbGeometry,
    viscosity: f64,
    amplitude: f64,
    out: *mut *mut NsbCertificate,
) -> NsbStatus {
    guard(|| {
        non_null(geometry, "geometry")?;
        non_null(out, "out")?;
        // SAFETY: checked above.
        let g = unsafe { &(*geometry).inner };
        let c = certify_source(g, viscosity, &InflowSource::Analytic(amplitude), nsbounds::inflow::DEFAULT_COMPAT_TOL)?;
        into_out(out, c);
        Ok(())
    })
}

/// Certifies an inflow sampled on a grid read from a `y,z,h1,h2,h3` CSV file.
///
/// # Safety
/// `geometry` must be a live handle, `grid_csv` a NUL-terminated path, and
/// `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nsb_certify_sampled(
    geometry: *const NsbGeometry,
    viscosity: f64,
    grid_csv: *const c_char,
    compat_tol: f64,
    out: *mut *mut NsbCertificate,
) -> NsbStatus {
    guard(|| {
        non_null(geometry, "geometry")?;
        non_null(out, "out")?;
        // SAFETY: checked above / caller contract.
        let (g, path) = unsafe { (&(*geometry).inner, path_arg(grid_csv, "grid_csv")?) };
        let source = InflowSource::Sampled { grid_file: path.to_path_buf() };
        into_out(out, certify_source(g, viscosity, &source, compat_tol)?);
        Ok(())
    })
}

/// Certifies the run described by a configuration file, as `nsbounds certify` does.
///
/// # Safety
/// `config_path` must be a NUL-terminated path and `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nsb_certify_config(config_path: *const c_char, out: *mut *mut NsbCertificate) -> NsbStatus {
    guard(|| {
        non_null(out, "out")?;
        // SAFETY: caller contract.
        let path = unsafe { path_arg(config_path, "config_path")? };
        let cfg = RunConfig::from_path(path)?;
        into_out(out, certify_source(&cfg.geometry()?, cfg.viscosity, &cfg.inflow, cfg.compat_tol)?);
        Ok(())
    })
}

/// # Safety
/// `certificate` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nsb_certificate_free(certificate: *mut NsbCertificate) {
    if !certificate.is_null() {
        // SAFETY: allocated by Box in one of the certify functions.
        drop(unsafe { Box::from_raw(certificate) });
    }
}

/// # Safety
/// `certificate` must be a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nsb_certificate_values(
    certificate: *const NsbCertificate,
    out: *mut NsbCertificateValues,
) -> NsbStatus {
    guard(|| {
        non_null(certificate, "certificate")?;
        non_null(out, "out")?;
        // SAFETY: checked above.
        let r = unsafe { &(*certificate).report };
        let v = NsbCertificateValues {
            certified: r.status == Status::Certified,
            phi: r.phi,
            phi_alternative: r.phi_alternative.unwrap_or(f64::NAN),
            threshold: r.threshold,
            margin: r.margin,
            beta: r.beta,
            grad_bound_rough: r.grad_bound_rough,
            grad_bound_sharp: r.grad_bound_sharp.unwrap_or(f64::NAN),
            bogovskii_m: r.bogovskii_m,
        };
        // SAFETY: checked above.
        unsafe { *out = v };
        Ok(())
    })
}

/// Writes the certificate JSON (numbers as 17-digit decimal strings).
/// Free the string with [`nsb_string_free`].
///
/// # Safety
/// `certificate` must be a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nsb_certificate_to_json(
    certificate: *const NsbCertificate,
    out: *mut *mut c_char,
) -> NsbStatus {
    guard(|| {
        non_null(certificate, "certificate")?;
        non_null(out, "out")?;
        // SAFETY: checked above.
        let json = unsafe { (*certificate).report.to_json() };
        let c = CString::new(json).expect("JSON has no interior NUL");
        // SAFETY: checked above.
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nsb_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Drag and lift bounds for the cosine inflow. Needs a cubic box with the
/// cube-root branch guaranteed. Uncertified inputs still return `NSB_STATUS_OK`
/// with `certified = false` and formal values.
///
/// # Safety
/// `geometry` must be a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nsb_forces(
    geometry: *const NsbGeometry,
    viscosity: f64,
    amplitude: f64,
    sharp_gradient_bound: bool,
    out: *mut NsbForceBounds,
) -> NsbStatus {
    guard(|| {
        non_null(geometry, "geometry")?;
        non_null(out, "out")?;
        // SAFETY: checked above.
        let g = unsafe { &(*geometry).inner };
        let fluid = FluidParams::new(viscosity)?;
        let choice = if sharp_gradient_bound { GradBoundChoice::Sharp } else { GradBoundChoice::Rough };
        let r = force_certificate(g, &fluid, amplitude, choice)?;
        let b = r.bounds;
        let v = NsbForceBounds {
            certified: r.certificate.is_certified(),
            grad_u_bound: b.grad_u_bound,
            drag_bound: b.drag_bound,
            lift_bound: b.lift_bound,
            psi: b.psi,
            drag_bound_general: b.drag_bound_general,
            lift_bound_general: b.lift_bound_general,
            q1_l3: b.q.q1_l3,
            q3_l3: b.q.q3_l3,
            q1_h1: b.q.q1_h1,
            q3_h1: b.q.q3_h1,
        };
        // SAFETY: checked above.
        unsafe { *out = v };
        Ok(())
    })
}
