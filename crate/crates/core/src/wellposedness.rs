//! Existence/uniqueness threshold, contraction factor and a-priori gradient bounds.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ChannelGeometry;
use crate::inflow::{self, InflowDatum, InflowNorms};
use crate::sobolev::{l3_prefactor, EmbeddingBounds};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidParams {
    /// Kinematic viscosity.
    #[serde(with = "crate::report::dec17")]
    pub eta: f64,
}

impl FluidParams {
    pub fn new(eta: f64) -> Result<Self> {
        if eta > 0.0 && eta.is_finite() {
            Ok(Self { eta })
        } else {
            Err(Error::InvalidParameter {
                name: "fluid.viscosity",
                value: eta,
                reason: "must be finite and positive",
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Certified,
    NotCertified,
}

/// Which gradient bound feeds the force estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradBoundChoice {
    #[default]
    Rough,
    Sharp,
}

pub const WARN_PHI_FACTOR_L: &str = "phi_factor_l";
pub const WARN_UNCERTIFIED: &str = "uncertified_formal_values";
pub const WARN_SHARP_INAPPLICABLE: &str = "sharp_bound_inapplicable";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub code: String,
    pub message: String,
}

impl Warning {
    fn new(code: &str, message: String) -> Self {
        Self {
            code: code.to_string(),
            message,
        }
    }
}

/// Outcome of [`certify`]. When `status` is `NotCertified` the numbers are
/// formal evaluations of the same formulas and carry no guarantee.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub norms: InflowNorms,
    pub bogovskii_m: f64,
    pub embedding: EmbeddingBounds,
    pub phi: f64,
    /// Alternative value of `Phi` for the cosine profile (see [`inflow::phi_cosine_alternative`]).
    pub phi_alternative: Option<f64>,
    pub threshold: f64,
    pub margin: f64,
    pub beta: f64,
    pub grad_bound_rough: f64,
    /// `None` when the denominator of the sharp bound is not positive.
    pub grad_bound_sharp: Option<f64>,
    pub status: Status,
    pub warnings: Vec<Warning>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn grad_bound(&self, choice: GradBoundChoice) -> Option<f64> {
        match choice {
            GradBoundChoice::Rough => Some(self.grad_bound_rough),
            GradBoundChoice::Sharp => self.grad_bound_sharp,
        }
    }

    /// Human-readable statement of what the certificate guarantees.
    pub fn claim(&self) -> &'static str {
        match self.status {
            Status::Certified => {
                "a weak solution exists; it is unique in the ball of the fixed-point argument"
            }
            Status::NotCertified => "no existence or uniqueness guarantee",
        }
    }
}

/// `eta^2/(2 sqrt 2) * sqrt(J6) S3 / (1 + sqrt(S3) eta)^2`
pub fn threshold_general(s3_lb: f64, j6_lb: f64, eta: f64) -> f64 {
    let r = 1.0 + s3_lb.sqrt() * eta;
    eta * eta / (2.0 * SQRT_2) * j6_lb.sqrt() * s3_lb / (r * r)
}

/// The threshold written directly in the geometry:
/// `eta^2/(4 sqrt2 pi^(1/3)) (pi^2 - 2m^2/L^2)^(1/2) / (eta + c3 m^(1/2))^2`
/// with `c3` the geometry-free factor of the `L^3` embedding.
pub fn threshold_explicit(geom: &ChannelGeometry, eta: f64) -> f64 {
    let m = geom.min_branch().m;
    let l = geom.half_width();
    let num = (PI * PI - 2.0 / (l * l) * m * m).sqrt();
    let den = eta + l3_prefactor() * m.sqrt();
    eta * eta / (4.0 * SQRT_2 * PI.cbrt()) * num / (den * den)
}

/// Contraction factor of the fixed-point map on its invariant ball.
pub fn contraction_beta(phi: f64, s3_lb: f64, s6_lb: f64, j6_lb: f64, eta: f64) -> f64 {
    let x = s3_lb.sqrt() * eta;
    SQRT_2 / x * (1.0 / j6_lb.sqrt() + 1.0 / s6_lb.sqrt()) * (1.0 + 1.0 / x) * phi
}

/// `sqrt2 [1 + 2/(sqrt(J6 S3) eta) * N Phi^2 / (D - N Phi)] Phi` with
/// `N = sqrt2 (sqrt S6 + sqrt J6)(1 + sqrt(S3) eta)` and `D = sqrt(J6 S6) S3 eta^2`.
pub fn gradient_bound_sharp(phi: f64, s3_lb: f64, s6_lb: f64, j6_lb: f64, eta: f64) -> Result<f64> {
    let n = SQRT_2 * (s6_lb.sqrt() + j6_lb.sqrt()) * (1.0 + s3_lb.sqrt() * eta);
    let d = (j6_lb * s6_lb).sqrt() * s3_lb * eta * eta;
    let den = d - n * phi;
    if den <= 0.0 {
        return Err(Error::SharpBoundInapplicable(den));
    }
    Ok(SQRT_2 * (1.0 + 2.0 / ((j6_lb * s3_lb).sqrt() * eta) * n * phi * phi / den) * phi)
}

/// `(sqrt2 + 1/(sqrt(S3) eta)) Phi`
pub fn gradient_bound_rough(phi: f64, s3_lb: f64, eta: f64) -> f64 {
    (SQRT_2 + 1.0 / (s3_lb.sqrt() * eta)) * phi
}

/// Stokes estimate `sqrt2 (Phi + ||g||_{3/2} / (sqrt(S3) eta))` for an external force of
/// the given `L^{3/2}` norm.
pub fn stokes_gradient_bound(phi: f64, g_norm_3_2: f64, s3_lb: f64, eta: f64) -> f64 {
    SQRT_2 * (phi + g_norm_3_2 / (s3_lb.sqrt() * eta))
}

/// Runs the whole chain: embedding bounds, inflow norms, `Phi`, threshold,
/// contraction factor and gradient bounds.
pub fn certify(
    geom: &ChannelGeometry,
    fluid: &FluidParams,
    datum: &InflowDatum,
    compat_tol: f64,
) -> Result<Certificate> {
    inflow::compatibility_check(datum, geom, compat_tol)?;
    let eb = EmbeddingBounds::compute(geom)?;
    let norms = inflow::inflow_norms(datum, geom)?;
    let m_const = geom.bogovskii_m();
    let phi = inflow::phi_of_h(&norms, m_const, geom);
    let eta = fluid.eta;
    let threshold = threshold_explicit(geom, eta);
    let status = if phi <= threshold {
        Status::Certified
    } else {
        Status::NotCertified
    };
    let mut warnings = Vec::new();

    let phi_alternative = match datum {
        InflowDatum::Analytic { amplitude } => {
            let alt = inflow::phi_cosine_alternative(*amplitude, m_const, geom);
            warnings.push(Warning::new(
                WARN_PHI_FACTOR_L,
                format!(
                    "for the cosine inflow, Phi from the boundary norms is {phi:e} while the \
                     closed form sqrt(2L)((1+M)/(L-a) + pi/(sqrt(2) L)) A gives {alt:e}; they differ \
                     by the factor L = {}. The certificate uses the former",
                    geom.half_width()
                ),
            ));
            Some(alt)
        }
        InflowDatum::Sampled(_) => None,
    };

    let beta = contraction_beta(phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta);
    let grad_bound_rough = gradient_bound_rough(phi, eb.s3_lb, eta);
    let grad_bound_sharp = match gradient_bound_sharp(phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta) {
        Ok(v) => Some(v),
        Err(e) => {
            warnings.push(Warning::new(WARN_SHARP_INAPPLICABLE, e.to_string()));
            None
        }
    };
    if status == Status::NotCertified {
        warnings.push(Warning::new(
            WARN_UNCERTIFIED,
            format!("Phi = {phi:e} exceeds the threshold {threshold:e}; beta and gradient bounds are formal values"),
        ));
    } else {
        debug_assert!(beta < 1.0 && grad_bound_sharp.is_some());
    }

    Ok(Certificate {
        norms,
        bogovskii_m: m_const,
        embedding: eb,
        phi,
        phi_alternative,
        threshold,
        margin: threshold - phi,
        beta,
        grad_bound_rough,
        grad_bound_sharp,
        status,
        warnings,
    })
}
