//! JSON reports. Every number is written as a decimal string with 17
//! significant digits so that a report read back reproduces the exact `f64`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forces::{ForceReport, QNormBounds};
use crate::geometry::{Branch, ChannelGeometry};
use crate::inflow::{InflowDatum, SampledInflow};
use crate::sobolev::EmbeddingBounds;
use crate::wellposedness::{certify, Certificate, FluidParams, GradBoundChoice, Status, Warning};

/// `f64` as a 17-significant-digit decimal string.
pub mod dec17 {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn format(x: f64) -> String {
        format!("{x:.16e}")
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(*x))
    }

    struct Dec;

    impl<'de> Visitor<'de> for Dec {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a decimal number or a string holding one")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            v.trim().parse().map_err(|_| E::custom(format!("invalid decimal `{v}`")))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(Dec)
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_str(&super::format(*v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            #[derive(Deserialize)]
            struct W(#[serde(with = "super")] f64);
            Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    #[serde(with = "dec17")]
    pub lower_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    #[serde(rename = "S2")]
    pub s2: LowerBound,
    #[serde(rename = "S3")]
    pub s3: LowerBound,
    #[serde(rename = "S6")]
    pub s6: LowerBound,
    #[serde(rename = "J2")]
    pub j2: LowerBound,
    #[serde(rename = "J6")]
    pub j6: LowerBound,
    #[serde(with = "dec17")]
    pub m: f64,
    pub branch: Branch,
}

impl From<&EmbeddingBounds> for EmbeddingReport {
    fn from(e: &EmbeddingBounds) -> Self {
        let lb = |v| LowerBound { lower_bound: v };
        Self {
            s2: lb(e.s2_lb),
            s3: lb(e.s3_lb),
            s6: lb(e.s6_lb),
            j2: lb(e.j2_lb),
            j6: lb(e.j6_lb),
            m: e.m,
            branch: e.branch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InflowKind {
    Analytic,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormsReport {
    #[serde(with = "dec17")]
    pub l2: f64,
    #[serde(with = "dec17")]
    pub grad_l2: f64,
    #[serde(with = "dec17")]
    pub div_l2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflowReport {
    #[serde(rename = "type")]
    pub kind: InflowKind,
    #[serde(with = "dec17::option", default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_file: Option<PathBuf>,
    #[serde(with = "dec17")]
    pub compat_tol: f64,
    pub norms: NormsReport,
}

/// Where the inflow datum came from; needed to re-evaluate a report.
#[derive(Debug, Clone, PartialEq)]
pub enum InflowSource {
    Analytic(f64),
    Sampled { grid_file: PathBuf },
}

impl InflowSource {
    pub fn load(&self, geom: &ChannelGeometry) -> Result<InflowDatum> {
        match self {
            Self::Analytic(a) => InflowDatum::analytic(*a),
            Self::Sampled { grid_file } => Ok(InflowDatum::Sampled(SampledInflow::from_csv_path(
                grid_file,
                geom.half_width(),
            )?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub geometry: ChannelGeometry,
    pub fluid: FluidParams,
    pub inflow: InflowReport,
    pub embedding_bounds: EmbeddingReport,
    #[serde(with = "dec17")]
    pub bogovskii_m: f64,
    #[serde(with = "dec17")]
    pub phi: f64,
    #[serde(with = "dec17::option", default, skip_serializing_if = "Option::is_none")]
    pub phi_alternative: Option<f64>,
    #[serde(with = "dec17")]
    pub threshold: f64,
    #[serde(with = "dec17")]
    pub margin: f64,
    #[serde(with = "dec17")]
    pub beta: f64,
    #[serde(with = "dec17")]
    pub grad_bound_rough: f64,
    #[serde(with = "dec17::option")]
    pub grad_bound_sharp: Option<f64>,
    pub status: Status,
    pub claim: String,
    pub warnings: Vec<Warning>,
}

impl CertificateReport {
    pub fn new(
        geom: &ChannelGeometry,
        fluid: &FluidParams,
        source: &InflowSource,
        compat_tol: f64,
        cert: &Certificate,
    ) -> Self {
        let (kind, amplitude, grid_file) = match source {
            InflowSource::Analytic(a) => (InflowKind::Analytic, Some(*a), None),
            InflowSource::Sampled { grid_file } => (InflowKind::Sampled, None, Some(grid_file.clone())),
        };
        Self {
            geometry: *geom,
            fluid: *fluid,
            inflow: InflowReport {
                kind,
                amplitude,
                grid_file,
                compat_tol,
                norms: NormsReport {
                    l2: cert.norms.l2,
                    grad_l2: cert.norms.grad_l2,
                    div_l2: cert.norms.div_l2,
                },
            },
            embedding_bounds: EmbeddingReport::from(&cert.embedding),
            bogovskii_m: cert.bogovskii_m,
            phi: cert.phi,
            phi_alternative: cert.phi_alternative,
            threshold: cert.threshold,
            margin: cert.margin,
            beta: cert.beta,
            grad_bound_rough: cert.grad_bound_rough,
            grad_bound_sharp: cert.grad_bound_sharp,
            status: cert.status,
            claim: cert.claim().to_string(),
            warnings: cert.warnings.clone(),
        }
    }

    /// Evaluates the inputs and builds the report.
    pub fn evaluate(
        geom: &ChannelGeometry,
        fluid: &FluidParams,
        source: &InflowSource,
        compat_tol: f64,
    ) -> Result<Self> {
        let datum = source.load(geom)?;
        let cert = certify(geom, fluid, &datum, compat_tol)?;
        Ok(Self::new(geom, fluid, source, compat_tol, &cert))
    }

    pub fn source(&self) -> Result<InflowSource> {
        match self.inflow.kind {
            InflowKind::Analytic => self
                .inflow
                .amplitude
                .map(InflowSource::Analytic)
                .ok_or_else(|| Error::Grid("analytic inflow without amplitude".into())),
            InflowKind::Sampled => self
                .inflow
                .grid_file
                .clone()
                .map(|grid_file| InflowSource::Sampled { grid_file })
                .ok_or_else(|| Error::Grid("sampled inflow without grid_file".into())),
        }
    }

    /// Re-runs the evaluation from the inputs recorded in the report.
    pub fn reevaluate(&self) -> Result<Self> {
        Self::evaluate(&self.geometry, &self.fluid, &self.source()?, self.inflow.compat_tol)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Grid(format!("certificate JSON: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Grid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcesJson {
    pub q_bounds: QNormBounds,
    #[serde(with = "dec17")]
    pub grad_u_bound: f64,
    pub grad_bound: GradBoundChoice,
    #[serde(with = "dec17")]
    pub drag_bound: f64,
    #[serde(with = "dec17")]
    pub lift_bound: f64,
    #[serde(with = "dec17")]
    pub psi: f64,
    #[serde(with = "dec17")]
    pub drag_bound_general: f64,
    #[serde(with = "dec17")]
    pub lift_bound_general: f64,
    pub status: Status,
    pub certificate: CertificateReport,
    pub warnings: Vec<Warning>,
}

impl ForcesJson {
    pub fn new(r: &ForceReport, geom: &ChannelGeometry, fluid: &FluidParams, amplitude: f64) -> Self {
        let b = &r.bounds;
        Self {
            q_bounds: b.q,
            grad_u_bound: b.grad_u_bound,
            grad_bound: r.grad_bound_choice,
            drag_bound: b.drag_bound,
            lift_bound: b.lift_bound,
            psi: b.psi,
            drag_bound_general: b.drag_bound_general,
            lift_bound_general: b.lift_bound_general,
            status: r.certificate.status,
            certificate: CertificateReport::new(
                geom,
                fluid,
                &InflowSource::Analytic(amplitude),
                crate::inflow::DEFAULT_COMPAT_TOL,
                &r.certificate,
            ),
            warnings: r.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inflow::DEFAULT_COMPAT_TOL;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct T {
        #[serde(with = "dec17")]
        x: f64,
        #[serde(with = "dec17::option")]
        y: Option<f64>,
    }

    #[test]
    fn dec17_roundtrips_exactly() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            let t = T { x, y: Some(x * 7.0) };
            let s = serde_json::to_string(&t).unwrap();
            let back: T = serde_json::from_str(&s).unwrap();
            assert_eq!(back.x.to_bits(), x.to_bits());
            assert_eq!(back, t);
        }
        let n: T = serde_json::from_str(r#"{"x": 2, "y": null}"#).unwrap();
        assert_eq!(n, T { x: 2.0, y: None });
        assert!(serde_json::from_str::<T>(r#"{"x": "abc", "y": null}"#).is_err());
        assert_eq!(dec17::format(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn certificate_roundtrip_is_bit_identical() {
        let g = ChannelGeometry::new(1.3, 0.9, 0.5, 0.4, 1.1).unwrap();
        let f = FluidParams::new(0.7).unwrap();
        let r = CertificateReport::evaluate(&g, &f, &InflowSource::Analytic(1e-3), DEFAULT_COMPAT_TOL).unwrap();
        let text = r.to_json();
        let back = CertificateReport::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.reevaluate().unwrap().to_json(), text);
        assert!(text.contains("\"lower_bound\""));
    }
}
