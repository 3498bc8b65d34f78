//! Explicit lower bounds for the embedding constants
//!
//! * `S_p`: `V*(Omega) ⊂ L^p`, fields vanishing on the inlet and the walls;
//! * `J_p`: `V(Omega) ⊂ L^p`, fields vanishing on the walls only;
//!
//! together with the Gagliardo-Nirenberg constant `C(p)`.
//!
//! Every `*_coeff_*` function returns a coefficient `k` with
//! `||u||_p <= k ||grad u||_2`; the corresponding constant is bounded below
//! by `1 / k^2`. The returned numbers are valid bounds, not the sharp constants.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::geometry::{Branch, ChannelGeometry};

/// Smallest exponent accepted by [`gn_constant`]: the Gamma arguments blow
/// up as `p -> 2+`.
pub const MIN_EXPONENT: f64 = 2.0 + 1e-6;

/// Lower bounds for the embedding constants of one geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingBounds {
    pub s2_lb: f64,
    pub s3_lb: f64,
    pub s6_lb: f64,
    pub j2_lb: f64,
    pub j6_lb: f64,
    /// Value of the Poincare minimum used for all bounds.
    pub m: f64,
    pub branch: Branch,
}

impl EmbeddingBounds {
    pub fn compute(geom: &ChannelGeometry) -> Result<Self> {
        let mb = geom.min_branch();
        let inv_sq = |k: f64| 1.0 / (k * k);
        Ok(Self {
            s2_lb: inv_sq(poincare_coeff_vstar(geom)),
            s3_lb: inv_sq(l3_coeff_vstar(geom)),
            s6_lb: inv_sq(l6_coeff_vstar()),
            j2_lb: inv_sq(poincare_coeff_v(geom)?),
            j6_lb: inv_sq(l6_coeff_v(geom)?),
            m: mb.m,
            branch: mb.branch,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnConstant {
    pub p: f64,
    pub value: f64,
}

/// `||u||_2 <= (m / pi) ||grad u||_2` on `V*`.
pub fn poincare_coeff_vstar(geom: &ChannelGeometry) -> f64 {
    geom.min_branch().m / PI
}

/// `||u||_6 <= 2 / (sqrt(3) pi^(2/3)) ||grad u||_2` on `V*`, independent of the domain.
pub fn l6_coeff_vstar() -> f64 {
    2.0 / (3f64.sqrt() * PI.powf(2.0 / 3.0))
}

/// `pi^2 - 2 m^2 / L^2`, the denominator shared by the `V(Omega)` bounds.
fn v_space_denominator(geom: &ChannelGeometry) -> Result<f64> {
    let m = geom.min_branch().m;
    let l = geom.half_width();
    let d = PI * PI - 2.0 * (m * m) / (l * l);
    if d > 0.0 {
        Ok(d)
    } else {
        Err(Error::VSpaceDenominator(d))
    }
}

/// `||u||_2 <= sqrt(3) / sqrt(pi^2 / m^2 - 2 / L^2) ||grad u||_2` on `V`.
pub fn poincare_coeff_v(geom: &ChannelGeometry) -> Result<f64> {
    let m = geom.min_branch().m;
    let d = v_space_denominator(geom)?;
    // pi^2/m^2 - 2/L^2 = d / m^2
    Ok(3f64.sqrt() * m / d.sqrt())
}

/// `||u||_6 <= 2 pi^(1/3) / sqrt(pi^2 - 2 m^2 / L^2) ||grad u||_2` on `V`.
pub fn l6_coeff_v(geom: &ChannelGeometry) -> Result<f64> {
    let d = v_space_denominator(geom)?;
    Ok(2.0 * PI.cbrt() / d.sqrt())
}

/// The optimal Gagliardo-Nirenberg constant `C(p)` in three dimensions, `p in (2, 6]`.
///
/// Exponents in `(2, 2 + 1e-6)` are rejected as well: the Gamma ratio
/// `Gamma((p+2)/(p-2)) / Gamma((10-p)/(2(p-2)))` is evaluated through
/// `ln Gamma` and loses accuracy as both arguments diverge.
pub fn gn_constant(p: f64) -> Result<GnConstant> {
    if !(p > 2.0 && p <= 6.0) || p < MIN_EXPONENT {
        return Err(Error::ExponentOutOfRange(p));
    }
    let base = ((p * p - 4.0) / (24.0 * PI)).powf(3.0 * (p - 2.0) / (4.0 * p));
    let log_ratio = ln_gamma((p + 2.0) / (p - 2.0)) - ln_gamma((10.0 - p) / (2.0 * (p - 2.0)));
    let gamma_part = (log_ratio * (p - 2.0) / (2.0 * p)).exp();
    let tail = ((10.0 - p) / (2.0 * (p + 2.0))).powf((10.0 - p) / (4.0 * p));
    Ok(GnConstant {
        p,
        value: base * gamma_part * tail,
    })
}

/// `||u||_p <= 2^((p-2)/(2p)) C(p) (m / pi)^((4p - p^2 + 12) / (2p(p+2))) ||grad u||_2` on `V*`.
pub fn lp_coeff_vstar(geom: &ChannelGeometry, p: f64) -> Result<f64> {
    let c = gn_constant(p)?.value;
    let exponent = (4.0 * p - p * p + 12.0) / (2.0 * p * (p + 2.0));
    Ok(2f64.powf((p - 2.0) / (2.0 * p)) * c * poincare_coeff_vstar(geom).powf(exponent))
}

/// Geometry-free factor of the `L^3` coefficient:
/// `(1/sqrt 5) (7^(7/3) / 3)^(1/4) (1 / (2 pi^5))^(1/6)`.
pub fn l3_prefactor() -> f64 {
    (7f64.powf(7.0 / 3.0) / 3.0).powf(0.25) * (1.0 / (2.0 * PI.powi(5))).powf(1.0 / 6.0)
        / 5f64.sqrt()
}

/// `||u||_3 <= l3_prefactor() m^(1/2) ||grad u||_2` on `V*`; also `1/sqrt(S_3)`.
pub fn l3_coeff_vstar(geom: &ChannelGeometry) -> f64 {
    l3_prefactor() * geom.min_branch().m.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * y.abs()
    }

    fn box_branch_geometry() -> ChannelGeometry {
        ChannelGeometry::new(1.0, 0.2, 0.2, 0.2, 0.05).unwrap()
    }

    fn cube_root_geometry() -> ChannelGeometry {
        // |Q| - |K| = 3
        ChannelGeometry::new(1.0, 0.9, 0.9, 0.9, 5.0).unwrap()
    }

    #[test]
    fn vstar_poincare_branches() {
        assert!(close(
            poincare_coeff_vstar(&box_branch_geometry()),
            4.0 / (3.0 * PI),
            1e-15
        ));
        assert!(close(
            poincare_coeff_vstar(&cube_root_geometry()),
            (9.0 / (2.0 * PI)).cbrt() / PI,
            1e-15
        ));
        assert!(4.0 / (3.0 * PI) <= 0.43);
    }

    #[test]
    fn l6_vstar_value() {
        // 40-digit reference: 0.53831455174200805...
        assert!(close(l6_coeff_vstar(), 0.53831455174200805, 1e-15));
        let s6 = 1.0 / l6_coeff_vstar().powi(2);
        assert!(close(s6, 3.0 * PI.powf(4.0 / 3.0) / 4.0, 1e-14));
    }

    #[test]
    fn v_space_box_branch() {
        let g = box_branch_geometry();
        let kappa = poincare_coeff_v(&g).unwrap();
        let expected = 3f64.sqrt() / (9.0 * PI * PI / 16.0 - 2.0).sqrt();
        assert!(close(kappa, expected, 1e-14));
        // The largest value the formula can reach, well above 0.46 L.
        assert!(close(kappa, 0.9190632388646799, 1e-13));
        let c6 = l6_coeff_v(&g).unwrap();
        assert!(close(c6, 2.0 * PI.cbrt() / (PI * PI - 32.0 / 9.0).sqrt(), 1e-14));
    }

    #[test]
    fn v_space_coefficients_dominate_vstar() {
        for g in [box_branch_geometry(), cube_root_geometry()] {
            assert!(poincare_coeff_v(&g).unwrap() >= poincare_coeff_vstar(&g));
            assert!(l6_coeff_v(&g).unwrap() >= l6_coeff_vstar());
        }
    }

    #[test]
    fn l6_v_limit_as_obstacle_fills_channel() {
        // Box at its largest admissible size; the fluid volume shrinks to zero.
        let a = 1.0 - 1e-12;
        let g = ChannelGeometry::new(1.0, a, a, a, 8.0 * (1.0 - 1e-9)).unwrap();
        let c6 = l6_coeff_v(&g).unwrap();
        assert!(close(c6, 2.0 / PI.powf(2.0 / 3.0), 1e-5));
    }

    #[test]
    fn gn_endpoint_identity() {
        let c6 = gn_constant(6.0).unwrap().value;
        assert!((2f64.cbrt() * c6 - 2.0 / (3f64.sqrt() * PI.powf(2.0 / 3.0))).abs() <= 1e-12);
    }

    #[test]
    fn gn_constant_p4_closed_form() {
        // Gamma(3) = 2, Gamma(3/2) = sqrt(pi)/2
        let expected = (1.0 / (4.0 * PI)).powf(3.0 / 8.0) * (4.0 / PI.sqrt()).powf(0.25);
        assert!(close(gn_constant(4.0).unwrap().value, expected, 1e-13));
        // 40-digit reference of the same expression
        assert!(close(expected, 0.47442499832879435, 1e-14));
    }

    #[test]
    fn gn_constant_domain() {
        assert_eq!(gn_constant(2.0), Err(Error::ExponentOutOfRange(2.0)));
        assert!(gn_constant(6.0 + 1e-12).is_err());
        assert!(gn_constant(1.0 + 1e-9).is_err());
        assert!(gn_constant(f64::NAN).is_err());
        assert!(gn_constant(2.0 + 1e-7).is_err());
        assert!(gn_constant(MIN_EXPONENT).is_ok());
    }

    #[test]
    fn gn_positive_and_finite_on_grid() {
        for i in 0..=4000 {
            let p = MIN_EXPONENT + (6.0 - MIN_EXPONENT) * i as f64 / 4000.0;
            let c = gn_constant(p).unwrap().value;
            assert!(c.is_finite() && c > 0.0, "p = {p}: {c}");
        }
    }

    #[test]
    fn lp_reduces_to_endpoints() {
        for g in [box_branch_geometry(), cube_root_geometry()] {
            assert!(close(lp_coeff_vstar(&g, 6.0).unwrap(), l6_coeff_vstar(), 1e-12));
            assert!(close(lp_coeff_vstar(&g, 3.0).unwrap(), l3_coeff_vstar(&g), 1e-12));
            let near = lp_coeff_vstar(&g, 6.0 - 1e-6).unwrap();
            assert!((near - l6_coeff_vstar()).abs() < 1e-4);
        }
    }

    #[test]
    fn l3_scales_with_sqrt_m() {
        let g = box_branch_geometry();
        assert!(close(
            l3_coeff_vstar(&g),
            l3_prefactor() * (4.0f64 / 3.0).sqrt(),
            1e-15
        ));
        let small = ChannelGeometry::new(0.5, 0.1, 0.1, 0.1, 0.001).unwrap();
        assert!(close(l3_coeff_vstar(&g), 2f64.sqrt() * l3_coeff_vstar(&small), 1e-14));
    }

    #[test]
    fn embedding_bounds_ordering() {
        for g in [box_branch_geometry(), cube_root_geometry()] {
            let e = EmbeddingBounds::compute(&g).unwrap();
            assert!(e.j2_lb <= e.s2_lb);
            assert!(e.j6_lb <= e.s6_lb);
            assert!([e.s2_lb, e.s3_lb, e.s6_lb, e.j2_lb, e.j6_lb]
                .iter()
                .all(|v| *v > 0.0));
        }
    }
}
