//! Closed-form norm bounds of the extension fields and the drag/lift bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ChannelGeometry;
use crate::inflow::{InflowDatum, DEFAULT_COMPAT_TOL};
use crate::sobolev::EmbeddingBounds;
use crate::wellposedness::{certify, Certificate, FluidParams, GradBoundChoice, Warning};

/// Upper bounds for `||q_i||_{L^3}` and `||grad q_i||_{L^2}` with `eps = (L-a)/(2a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QNormBounds {
    #[serde(with = "crate::report::dec17")]
    pub q1_l3: f64,
    #[serde(with = "crate::report::dec17")]
    pub q3_l3: f64,
    #[serde(with = "crate::report::dec17")]
    pub q1_h1: f64,
    #[serde(with = "crate::report::dec17")]
    pub q3_h1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBounds {
    pub q: QNormBounds,
    pub grad_u_bound: f64,
    /// `Psi`, bounding both `|drag|` and `|lift|`.
    pub drag_bound: f64,
    pub lift_bound: f64,
    pub psi: f64,
    /// The general bound evaluated with `q_1` and `q_3`; equal to `psi` for a cubic box.
    pub drag_bound_general: f64,
    pub lift_bound_general: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceReport {
    pub certificate: Certificate,
    pub bounds: ForceBounds,
    pub grad_bound_choice: GradBoundChoice,
    pub warnings: Vec<Warning>,
}

fn sq(x: f64) -> f64 {
    x * x
}

pub fn q_norm_bounds(geom: &ChannelGeometry) -> QNormBounds {
    let (l, a, b, c) = (geom.half_width(), geom.a(), geom.b(), geom.c());
    let s = (1.0 / sq(a) + 1.0 / sq(b) + 1.0 / sq(c)).sqrt();
    let lead = (a * b * c).cbrt() / a * (l + a);
    let q1_l3 = lead * (1.0 + 0.75 * (sq(b) + sq(c)).sqrt() * s);
    let q3_l3 = lead * (1.0 + 0.75 * (sq(a) + sq(b)).sqrt() * s);

    let k = 64.0 / 9.0;
    let ra = (k / sq(a) + 1.0 / sq(b) + 1.0 / sq(c)).sqrt();
    let rb = (1.0 / sq(a) + k / sq(b) + 1.0 / sq(c)).sqrt();
    let rc = (1.0 / sq(a) + 1.0 / sq(b) + k / sq(c)).sqrt();
    let pre = 3.0 * (b * c * (l - a)).sqrt();
    let ratio = 0.75 * (l + a) / (l - a);
    let q1_h1 = pre * (s + 1.0 / a + 0.5 / b + 0.5 / c + ratio * ((b + c) / a * ra + rb + rc));
    let q3_h1 = pre * (s + 1.0 / c + 0.5 / a + 0.5 / b + ratio * ((a + b) / c * rc + ra + rb));
    QNormBounds {
        q1_l3,
        q3_l3,
        q1_h1,
        q3_h1,
    }
}

/// `(2 eta ||grad q|| + ||grad u|| ||q||_{L^3} / sqrt(J6)) ||grad u||`
pub fn drag_lift_bound_general(eta: f64, j6_lb: f64, grad_u_bound: f64, q_l3: f64, q_h1: f64) -> f64 {
    (2.0 * eta * q_h1 + grad_u_bound * q_l3 / j6_lb.sqrt()) * grad_u_bound
}

pub fn require_cube_conda(geom: &ChannelGeometry) -> Result<()> {
    if !geom.is_cubic_box() {
        return Err(Error::NonCubicBox {
            a: geom.a(),
            b: geom.b(),
            c: geom.c(),
        });
    }
    if !geom.conda() {
        return Err(Error::CondaViolated {
            volume: geom.obstacle_volume(),
            threshold: ChannelGeometry::break_even_volume(geom.half_width()),
        });
    }
    Ok(())
}

/// `Psi = 6 eta sqrt(L-a) (2 + sqrt3 + sqrt82 (L+a)/(L-a)) g
///      + (1 + 3 sqrt6 / 4) 2 pi^(1/3) (L+a) / (pi^2 - 2/L^2 (3(|Q|-|K|)/(2pi))^(2/3))^(1/2) g^2`
/// for a cubic box `a = b = c` under the large-obstacle condition.
pub fn psi_bound(geom: &ChannelGeometry, eta: f64, grad_u_bound: f64) -> Result<f64> {
    require_cube_conda(geom)?;
    let (l, a) = (geom.half_width(), geom.a());
    let g = grad_u_bound;
    let linear = 6.0 * eta * (l - a).sqrt() * (2.0 + 3f64.sqrt() + 82f64.sqrt() * (l + a) / (l - a));
    let cube_root = (3.0 / (2.0 * PI) * geom.fluid_volume()).powf(2.0 / 3.0);
    let quadratic = (1.0 + 0.75 * 6f64.sqrt()) * 2.0 * PI.cbrt() * (l + a)
        / (PI * PI - 2.0 / (l * l) * cube_root).sqrt();
    Ok(linear * g + quadratic * g * g)
}

/// Certificate and force bounds for the cosine inflow of amplitude `amplitude`.
///
/// Returns the bounds even when the datum is not certified; they are then
/// formal values and the certificate status says so. Use
/// [`force_certificate_strict`] to turn that case into an error.
pub fn force_certificate(
    geom: &ChannelGeometry,
    fluid: &FluidParams,
    amplitude: f64,
    choice: GradBoundChoice,
) -> Result<ForceReport> {
    require_cube_conda(geom)?;
    let datum = InflowDatum::analytic(amplitude)?;
    let certificate = certify(geom, fluid, &datum, DEFAULT_COMPAT_TOL)?;
    let g = match certificate.grad_bound(choice) {
        Some(g) => g,
        None => return Err(Error::SharpBoundInapplicable(certificate.phi)),
    };
    let q = q_norm_bounds(geom);
    let eb = EmbeddingBounds::compute(geom)?;
    let psi = psi_bound(geom, fluid.eta, g)?;
    let bounds = ForceBounds {
        q,
        grad_u_bound: g,
        drag_bound: psi,
        lift_bound: psi,
        psi,
        drag_bound_general: drag_lift_bound_general(fluid.eta, eb.j6_lb, g, q.q1_l3, q.q1_h1),
        lift_bound_general: drag_lift_bound_general(fluid.eta, eb.j6_lb, g, q.q3_l3, q.q3_h1),
    };
    let warnings = certificate.warnings.clone();
    Ok(ForceReport {
        certificate,
        bounds,
        grad_bound_choice: choice,
        warnings,
    })
}

pub fn force_certificate_strict(
    geom: &ChannelGeometry,
    fluid: &FluidParams,
    amplitude: f64,
    choice: GradBoundChoice,
) -> Result<ForceReport> {
    let r = force_certificate(geom, fluid, amplitude, choice)?;
    if !r.certificate.is_certified() {
        return Err(Error::NotCertified {
            phi: r.certificate.phi,
            threshold: r.certificate.threshold,
        });
    }
    Ok(r)
}

/// Largest amplitude of the cosine inflow admitted by the explicit
/// drag/lift bound, with `Phi` in its alternative closed form.
pub fn admissible_amplitude_alternative(geom: &ChannelGeometry, eta: f64) -> Result<f64> {
    require_cube_conda(geom)?;
    let (l, a) = (geom.half_width(), geom.a());
    let m_const = geom.bogovskii_m();
    let fv = geom.fluid_volume();
    let num = (PI * PI - 2.0 / (l * l) * (3.0 / (2.0 * PI) * fv).powf(2.0 / 3.0)).sqrt();
    let den = eta
        + 1.0 / (5f64.sqrt() * PI) * (7f64.powf(7.0 / 3.0) / 3.0).powf(0.25) * (0.75 * fv).powf(1.0 / 6.0);
    Ok(eta * eta / (4.0 * 2f64.sqrt() * PI.cbrt()) * l.sqrt() * (l - a)
        / (2f64.sqrt() * (1.0 + m_const) * l + (l - a) * PI)
        * num
        / (den * den))
}
