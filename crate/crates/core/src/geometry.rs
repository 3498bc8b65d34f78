//! Channel and obstacle geometry.
//!
//! The channel is the cube `Q = (-L, L)^3`; the obstacle `K` enters every
//! bound only through its volume `|K|` and an enclosing box
//! `P = (-a, a) x (-b, b) x (-c, c)`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Numerical coefficients of the explicit solenoidal-extension constant M.
const M_COEFF_CONST: f64 = 327.23;
const M_COEFF_SQRT_SIGMA: f64 = 445.17;
const M_COEFF_SIGMA: f64 = 153.85;
const M_COEFF_INNER_CONST: f64 = 22.4;
const M_COEFF_INNER_SQRT_SIGMA: f64 = 15.79;

/// A constraint of [`ChannelGeometry`] that failed validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryViolation {
    /// Some input is NaN or infinite.
    NonFinite,
    /// `a < L` does not hold.
    BoxExceedsChannel { a: f64, half_width: f64 },
    /// `b <= a` does not hold.
    BOverA { a: f64, b: f64 },
    /// `c <= b` does not hold.
    COverB { b: f64, c: f64 },
    /// `c > 0` does not hold.
    NonPositiveC { c: f64 },
    /// `|K| > 0` does not hold.
    NonPositiveVolume { volume: f64 },
    /// `|K| <= 8abc` does not hold.
    VolumeExceedsBox { volume: f64, box_volume: f64 },
}

impl fmt::Display for GeometryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::NonFinite => write!(f, "all geometry inputs must be finite"),
            Self::BoxExceedsChannel { a, half_width } => {
                write!(f, "a < L violated (a = {a}, L = {half_width})")
            }
            Self::BOverA { a, b } => write!(f, "b <= a violated (a = {a}, b = {b})"),
            Self::COverB { b, c } => write!(f, "c <= b violated (b = {b}, c = {c})"),
            Self::NonPositiveC { c } => write!(f, "c > 0 violated (c = {c})"),
            Self::NonPositiveVolume { volume } => {
                write!(f, "vol_K > 0 violated (vol_K = {volume})")
            }
            Self::VolumeExceedsBox { volume, box_volume } => write!(
                f,
                "vol_K <= 8abc violated (vol_K = {volume}, 8abc = {box_volume})"
            ),
        }
    }
}

/// Channel half-width `L`, obstacle bounding-box half-extents `a >= b >= c`
/// and obstacle volume `|K|`.
///
/// Construct through [`ChannelGeometry::new`]; every value of this type
/// satisfies `L > a >= b >= c > 0` and `0 < |K| <= 8abc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry", into = "RawGeometry")]
pub struct ChannelGeometry {
    half_width: f64,
    a: f64,
    b: f64,
    c: f64,
    obstacle_volume: f64,
}

#[derive(Serialize, Deserialize)]
struct RawGeometry {
    #[serde(rename = "L", with = "crate::report::dec17")]
    half_width: f64,
    #[serde(with = "crate::report::dec17")]
    a: f64,
    #[serde(with = "crate::report::dec17")]
    b: f64,
    #[serde(with = "crate::report::dec17")]
    c: f64,
    #[serde(with = "crate::report::dec17")]
    obstacle_volume: f64,
}

impl TryFrom<RawGeometry> for ChannelGeometry {
    type Error = Error;

    fn try_from(raw: RawGeometry) -> Result<Self> {
        Self::new(raw.half_width, raw.a, raw.b, raw.c, raw.obstacle_volume)
    }
}

impl From<ChannelGeometry> for RawGeometry {
    fn from(g: ChannelGeometry) -> Self {
        Self {
            half_width: g.half_width,
            a: g.a,
            b: g.b,
            c: g.c,
            obstacle_volume: g.obstacle_volume,
        }
    }
}

/// Collects every violated constraint instead of stopping at the first.
pub fn validate(
    half_width: f64,
    a: f64,
    b: f64,
    c: f64,
    obstacle_volume: f64,
) -> std::result::Result<(), Vec<GeometryViolation>> {
    if ![half_width, a, b, c, obstacle_volume]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(vec![GeometryViolation::NonFinite]);
    }
    let mut violations = Vec::new();
    if a >= half_width {
        violations.push(GeometryViolation::BoxExceedsChannel { a, half_width });
    }
    if b > a {
        violations.push(GeometryViolation::BOverA { a, b });
    }
    if c > b {
        violations.push(GeometryViolation::COverB { b, c });
    }
    if c <= 0.0 {
        violations.push(GeometryViolation::NonPositiveC { c });
    }
    if obstacle_volume <= 0.0 {
        violations.push(GeometryViolation::NonPositiveVolume {
            volume: obstacle_volume,
        });
    }
    let box_volume = 8.0 * a * b * c;
    if obstacle_volume > box_volume {
        violations.push(GeometryViolation::VolumeExceedsBox {
            volume: obstacle_volume,
            box_volume,
        });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Which argument attains `min{ (3(|Q|-|K|)/(2 pi))^(1/3), 4L/3 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Faber-Krahn branch: radius of the ball with the measure of the doubled domain.
    CubeRoot,
    /// Dirichlet eigenvalue of the doubled box `(-L, 3L) x (-L, L)^2`.
    Box,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CubeRoot => "CubeRoot",
            Self::Box => "Box",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinBranch {
    pub m: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogovskiiConstants {
    pub sigma: f64,
    pub gamma: f64,
    pub m: f64,
}

impl ChannelGeometry {
    pub fn new(half_width: f64, a: f64, b: f64, c: f64, obstacle_volume: f64) -> Result<Self> {
        validate(half_width, a, b, c, obstacle_volume).map_err(Error::Geometry)?;
        Ok(Self {
            half_width,
            a,
            b,
            c,
            obstacle_volume,
        })
    }

    /// `L`
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `|K|`
    pub fn obstacle_volume(&self) -> f64 {
        self.obstacle_volume
    }

    /// `|Q| = 8 L^3`
    pub fn channel_volume(&self) -> f64 {
        8.0 * self.half_width.powi(3)
    }

    /// `|Q| - |K|`, strictly positive.
    pub fn fluid_volume(&self) -> f64 {
        self.channel_volume() - self.obstacle_volume
    }

    pub fn is_cubic_box(&self) -> bool {
        self.a == self.b && self.b == self.c
    }

    /// Returns `(sigma, gamma)`.
    pub fn sigma_gamma(&self) -> (f64, f64) {
        let (l, a, b, c) = (self.half_width, self.a, self.b, self.c);
        let s1 = a + b + c;
        let s2 = a * b + a * c + b * c;
        let s3 = a * b * c;
        let l2 = l * l;
        let l3 = l2 * l;
        let sigma = 7.0 * l3 - s1 * l2 - s2 * l - s3;
        let gamma = 6.0 * l3 - 2.0 * s1 * l2 - 2.0 * s2 * l + 6.0 * s3;
        (sigma, gamma)
    }

    /// The constant `M` of the explicit solenoidal extension of the inflow datum.
    pub fn bogovskii_m(&self) -> f64 {
        let (sigma, gamma) = self.sigma_gamma();
        let (l, a, b, c) = (self.half_width, self.a, self.b, self.c);
        let gap = l - a;
        let gap_32 = gap * gap.sqrt();
        let sqrt_sigma = sigma.sqrt();
        let inner = M_COEFF_INNER_CONST + M_COEFF_INNER_SQRT_SIGMA * sqrt_sigma / gap_32;
        let bracket = M_COEFF_CONST
            + M_COEFF_SQRT_SIGMA * sqrt_sigma / gap_32
            + M_COEFF_SIGMA * sigma / gap.powi(3)
            + 144.0 * l * l / (gap * gap) * inner * inner;
        let prefactor = (12.0 * (1.0 + 16.0 / gamma * (l.powi(3) - a * b * c))).sqrt();
        prefactor * bracket.sqrt()
    }

    pub fn bogovskii_constants(&self) -> BogovskiiConstants {
        let (sigma, gamma) = self.sigma_gamma();
        BogovskiiConstants {
            sigma,
            gamma,
            m: self.bogovskii_m(),
        }
    }

    /// Obstacle volume at which both arguments of the Poincare minimum coincide,
    /// i.e. `|Q| / (|Q| - |K|) = 81 / (16 pi)`.
    pub fn break_even_volume(half_width: f64) -> f64 {
        8.0 / 81.0 * (81.0 - 16.0 * PI) * half_width.powi(3)
    }

    /// `min{ (3(|Q|-|K|)/(2 pi))^(1/3), 4L/3 }` with the attaining branch.
    ///
    /// The branch is decided by comparing `|K|` with [`Self::break_even_volume`],
    /// which is the exact equivalent of comparing the two arguments and keeps
    /// the choice consistent with [`Self::conda`]. Ties go to `CubeRoot`.
    pub fn min_branch(&self) -> MinBranch {
        let cube_root = (3.0 * self.fluid_volume() / (2.0 * PI)).cbrt();
        let box_value = 4.0 * self.half_width / 3.0;
        if self.obstacle_volume >= Self::break_even_volume(self.half_width) {
            MinBranch {
                m: cube_root,
                branch: Branch::CubeRoot,
            }
        } else {
            MinBranch {
                m: box_value,
                branch: Branch::Box,
            }
        }
    }

    /// `|K| > (8/81)(81 - 16 pi) L^3`, which forces the cube-root branch.
    pub fn conda(&self) -> bool {
        self.obstacle_volume > Self::break_even_volume(self.half_width)
    }

    /// The same geometry with one parameter replaced, re-validated.
    pub fn with_a(&self, a: f64) -> Result<Self> {
        Self::new(self.half_width, a, self.b, self.c, self.obstacle_volume)
    }

    pub fn with_obstacle_volume(&self, volume: f64) -> Result<Self> {
        Self::new(self.half_width, self.a, self.b, self.c, volume)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * y.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn accepts_strict_configuration() {
        assert!(ChannelGeometry::new(1.0, 0.5, 0.5, 0.5, 0.3).is_ok());
    }

    #[test]
    fn rejects_box_touching_channel() {
        let err = ChannelGeometry::new(1.0, 1.0, 0.5, 0.5, 0.3).unwrap_err();
        let Error::Geometry(v) = err else {
            panic!("wrong error")
        };
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("a < L violated"));
    }

    #[test]
    fn rejects_oversized_obstacle() {
        let Error::Geometry(v) = ChannelGeometry::new(1.0, 0.5, 0.5, 0.5, 2.0).unwrap_err() else {
            panic!("wrong error")
        };
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("vol_K <= 8abc violated"));
    }

    #[test]
    fn reports_every_violation() {
        let Error::Geometry(v) = ChannelGeometry::new(1.0, 0.5, 0.6, -0.1, -1.0).unwrap_err() else {
            panic!("wrong error")
        };
        assert!(v.contains(&GeometryViolation::BOverA { a: 0.5, b: 0.6 }));
        assert!(v.contains(&GeometryViolation::NonPositiveC { c: -0.1 }));
        assert!(v.contains(&GeometryViolation::NonPositiveVolume { volume: -1.0 }));
    }

    #[test]
    fn rejects_nan() {
        assert_eq!(
            ChannelGeometry::new(f64::NAN, 0.5, 0.5, 0.5, 0.1).unwrap_err(),
            Error::Geometry(vec![GeometryViolation::NonFinite])
        );
    }

    #[test]
    fn sigma_gamma_hand_values() {
        let g = ChannelGeometry::new(2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(g.sigma_gamma(), (37.0, 18.0));
        let g = ChannelGeometry::new(1.0, 0.5, 0.5, 0.5, 0.3).unwrap();
        assert_eq!(g.sigma_gamma(), (4.625, 2.25));
    }

    #[test]
    fn gamma_factorizes_for_cubes() {
        for &(l, a) in &[(1.0, 0.3), (2.5, 1.7), (10.0, 9.99), (0.01, 0.004)] {
            let g = ChannelGeometry::new(l, a, a, a, a * a * a).unwrap();
            let (_, gamma) = g.sigma_gamma();
            // absolute scale: gamma cancels down from terms of size L^3
            assert!((gamma - 6.0 * (l - a) * (l - a) * (l + a)).abs() <= 1e-14 * 6.0 * l * l * l);
        }
    }

    // Reference values from a 40-digit evaluation of the same formula.
    #[test]
    fn bogovskii_m_matches_high_precision() {
        let g = ChannelGeometry::new(2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(close(g.bogovskii_m(), 26478.604150252628854820304, 1e-12));
        let g = ChannelGeometry::new(1.0, 0.8, 0.8, 0.8, 3.1).unwrap();
        assert!(close(g.bogovskii_m(), 256311.16154052085149679098, 1e-12));
    }

    #[test]
    fn bogovskii_m_grows_as_box_approaches_wall() {
        let near = ChannelGeometry::new(1.0, 0.9, 0.25, 0.25, 0.01).unwrap();
        let far = ChannelGeometry::new(1.0, 0.5, 0.25, 0.25, 0.01).unwrap();
        assert!(close(near.bogovskii_m(), 1257357.7398902125092810472, 1e-12));
        assert!(close(far.bogovskii_m(), 24748.267950902654784108783, 1e-12));
        assert!(near.bogovskii_m() > far.bogovskii_m());
    }

    #[test]
    fn min_branch_examples() {
        let g = ChannelGeometry::new(1.0, 0.9, 0.9, 0.9, 5.0).unwrap();
        let mb = g.min_branch();
        assert_eq!(mb.branch, Branch::CubeRoot);
        assert!(close(mb.m, (9.0 / (2.0 * PI)).cbrt(), 1e-15));
        assert!((mb.m - 1.127).abs() < 1e-3);

        let g = ChannelGeometry::new(1.0, 0.2, 0.2, 0.2, 0.05).unwrap();
        let mb = g.min_branch();
        assert_eq!(mb.branch, Branch::Box);
        assert_eq!(mb.m, 4.0 / 3.0);
        assert!((3.0 * 7.95 / (2.0 * PI)).cbrt() > 4.0 / 3.0);
    }

    #[test]
    fn break_even_ratio() {
        let l: f64 = 1.3;
        let q = 8.0 * l.powi(3);
        let k = ChannelGeometry::break_even_volume(l);
        assert!(close(q / (q - k), 81.0 / (16.0 * PI), 1e-14));
    }

    #[test]
    fn tie_reports_cube_root() {
        let l = 1.0;
        let k = ChannelGeometry::break_even_volume(l);
        let g = ChannelGeometry::new(l, 0.9, 0.9, 0.9, k).unwrap();
        let mb = g.min_branch();
        assert_eq!(mb.branch, Branch::CubeRoot);
        assert!((mb.m - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn conda_examples() {
        assert!((ChannelGeometry::break_even_volume(1.0) - 3.0355079054383514).abs() < 1e-15);
        let g = ChannelGeometry::new(1.0, 0.8, 0.8, 0.8, 3.1).unwrap();
        assert!(g.conda());
        assert_eq!(g.min_branch().branch, Branch::CubeRoot);
        let g = ChannelGeometry::new(1.0, 0.5, 0.5, 0.5, 0.3).unwrap();
        assert!(!g.conda());
        let g = ChannelGeometry::new(1.0, 0.9, 0.1, 0.1, 0.05).unwrap();
        assert!(!g.conda());
    }

    #[test]
    fn serde_roundtrip_revalidates() {
        let g = ChannelGeometry::new(1.0, 0.5, 0.4, 0.3, 0.2).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"L\":\"1.0000000000000000e0\""));
        let back: ChannelGeometry = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad = s.replace("\"a\":\"5.0000000000000000e-1\"", "\"a\":\"1.5\"");
        assert_ne!(bad, s);
        assert!(serde_json::from_str::<ChannelGeometry>(&bad).is_err());
    }
}
