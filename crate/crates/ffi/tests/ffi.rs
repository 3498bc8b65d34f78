use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use nsbounds_ffi::*;

struct Geometry(*mut NsbGeometry);

impl Geometry {
    fn new(l: f64, a: f64, b: f64, c: f64, vol: f64) -> Self {
        let mut g = ptr::null_mut();
        assert_eq!(unsafe { nsb_geometry_new(l, a, b, c, vol, &mut g) }, NsbStatus::Ok);
        Self(g)
    }
}

impl Drop for Geometry {
    fn drop(&mut self) {
        unsafe { nsb_geometry_free(self.0) }
    }
}

fn certify(g: &Geometry, eta: f64, amp: f64) -> *mut NsbCertificate {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { nsb_certify_analytic(g.0, eta, amp, &mut c) }, NsbStatus::Ok);
    c
}

fn values(c: *const NsbCertificate) -> NsbCertificateValues {
    let mut v = NsbCertificateValues {
        certified: false,
        phi: 0.0,
        phi_alternative: 0.0,
        threshold: 0.0,
        margin: 0.0,
        beta: 0.0,
        grad_bound_rough: 0.0,
        grad_bound_sharp: 0.0,
        bogovskii_m: 0.0,
    };
    assert_eq!(unsafe { nsb_certificate_values(c, &mut v) }, NsbStatus::Ok);
    v
}

#[test]
fn certificate_matches_the_rust_api() {
    let g = Geometry::new(1.0, 0.8, 0.8, 0.8, 3.1);
    let geom = nsbounds::ChannelGeometry::new(1.0, 0.8, 0.8, 0.8, 3.1).unwrap();
    let amp = 3e-8;
    let c = certify(&g, 1.0, amp);
    let v = values(c);
    let r = nsbounds::certify(
        &geom,
        &nsbounds::FluidParams::new(1.0).unwrap(),
        &nsbounds::InflowDatum::analytic(amp).unwrap(),
        nsbounds::inflow::DEFAULT_COMPAT_TOL,
    )
    .unwrap();
    assert_eq!((v.certified, v.phi, v.threshold, v.beta), (r.is_certified(), r.phi, r.threshold, r.beta));
    assert_eq!(v.phi_alternative, r.phi_alternative.unwrap());

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { nsb_certificate_to_json(c, &mut json) }, NsbStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    unsafe { nsb_string_free(json) };
    unsafe { nsb_certificate_free(c) };
    assert!(text.contains("\"status\": \"Certified\""));
    assert_eq!(nsbounds::report::CertificateReport::from_json(&text).unwrap().phi, r.phi);
}

#[test]
fn uncertified_input_is_not_an_error() {
    let g = Geometry::new(1.0, 0.8, 0.8, 0.8, 3.1);
    let c = certify(&g, 1.0, 1.0);
    let v = values(c);
    unsafe { nsb_certificate_free(c) };
    assert!(!v.certified && v.margin < 0.0);
}

#[test]
fn force_bounds_and_preconditions() {
    let g = Geometry::new(1.0, 0.8, 0.8, 0.8, 3.1);
    let mut f = std::mem::MaybeUninit::<NsbForceBounds>::uninit();
    assert_eq!(unsafe { nsb_forces(g.0, 1.0, 0.0, true, f.as_mut_ptr()) }, NsbStatus::Ok);
    let f = unsafe { f.assume_init() };
    assert!(f.certified);
    assert_eq!((f.drag_bound, f.lift_bound, f.psi), (0.0, 0.0, 0.0));

    let small = Geometry::new(1.0, 0.5, 0.5, 0.5, 0.3);
    let mut f = std::mem::MaybeUninit::<NsbForceBounds>::uninit();
    assert_eq!(unsafe { nsb_forces(small.0, 1.0, 0.0, false, f.as_mut_ptr()) }, NsbStatus::CondaViolated);
    let msg = unsafe { CStr::from_ptr(nsb_last_error()) }.to_str().unwrap();
    assert!(msg.contains("general drag/lift bound"));
}

#[test]
fn config_and_sampled_entry_points() {
    let d = tempfile::TempDir::new().unwrap();
    let cfg = d.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "channel.L = 1\nbox.a = 0.5\nbox.b = 0.5\nbox.c = 0.5\nobstacle.volume = 0.5\nfluid.viscosity = 2\ninflow.type = analytic\ninflow.amplitude = 0\n",
    )
    .unwrap();
    let path = CString::new(cfg.to_str().unwrap()).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { nsb_certify_config(path.as_ptr(), &mut c) }, NsbStatus::Ok);
    assert!(values(c).certified);
    unsafe { nsb_certificate_free(c) };

    let missing = CString::new(d.path().join("none.cfg").to_str().unwrap()).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { nsb_certify_config(missing.as_ptr(), &mut c) }, NsbStatus::Config);
    assert!(c.is_null());

    let csv = d.path().join("grid.csv");
    std::fs::write(&csv, "y,z,h1,h2,h3\n-1,-1,0,0,0\n-1,0,0,0,0\n-1,1,0,0,0\n0,-1,0,0,0\n0,0,1,0,0\n0,1,0,0,0\n1,-1,0,0,0\n1,0,0,0,0\n1,1,0.5,0,0\n").unwrap();
    let g = Geometry::new(1.0, 0.5, 0.5, 0.5, 0.5);
    let p = CString::new(csv.to_str().unwrap()).unwrap();
    assert_eq!(unsafe { nsb_certify_sampled(g.0, 1.0, p.as_ptr(), 1e-8, &mut c) }, NsbStatus::IncompatibleInflow);
    assert_eq!(unsafe { nsb_certify_sampled(g.0, 1.0, ptr::null(), 1e-8, &mut c) }, NsbStatus::NullPointer);
}

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_against_generated_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("nsbounds.h").is_file());
    let lib = target_dir().join("libnsbounds_ffi.a");
    assert!(lib.is_file(), "static library not found at {}", lib.display());
    let out = tempfile::TempDir::new().unwrap();
    let exe = out.path().join("smoke");
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(&header_dir)
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
