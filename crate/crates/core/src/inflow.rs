//! Inlet velocity datum `h` on `Gamma_I = {-L} x (-L, L)^2` and the size functional `Phi(h)`.

use std::f64::consts::{PI, SQRT_2};
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{BoundaryNodeViolation, Error, Result};
use crate::geometry::ChannelGeometry;
use crate::oracle::quadrature::{node, simpson_2d_samples};

/// Boundary nodes may carry `|h| <= DEFAULT_COMPAT_TOL * max |h|`.
pub const DEFAULT_COMPAT_TOL: f64 = 1e-8;

/// Velocity samples on the closed uniform grid over `[-L, L]^2`, node
/// `(i, j)` at `y_i = -L + 2L i / (n_y - 1)`, `z_j = -L + 2L j / (n_z - 1)`,
/// stored row-major with `y` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledInflow {
    n_y: usize,
    n_z: usize,
    values: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InflowDatum {
    /// `h = A cos(pi y / 2L) cos(pi z / 2L) e_1`
    Analytic { amplitude: f64 },
    Sampled(SampledInflow),
}

/// `||h||`, `||grad h||` and `||d h_2/dy + d h_3/dz||` in `L^2(Gamma_I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflowNorms {
    pub l2: f64,
    pub grad_l2: f64,
    pub div_l2: f64,
}

impl InflowNorms {
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            l2: c * self.l2,
            grad_l2: c * self.grad_l2,
            div_l2: c * self.div_l2,
        }
    }
}

#[derive(Deserialize)]
struct CsvRow {
    y: f64,
    z: f64,
    h1: f64,
    h2: f64,
    h3: f64,
}

impl SampledInflow {
    pub fn new(n_y: usize, n_z: usize, values: Vec<[f64; 3]>) -> Result<Self> {
        for n in [n_y, n_z] {
            if n < 3 || n % 2 == 0 {
                return Err(Error::EvenNodeCount(n));
            }
        }
        if values.len() != n_y * n_z {
            return Err(Error::Grid(format!(
                "{} x {} grid needs {} samples, got {}",
                n_y,
                n_z,
                n_y * n_z,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| v.iter().any(|x| !x.is_finite())) {
            return Err(Error::Grid(format!("sample {k} is not finite")));
        }
        Ok(Self { n_y, n_z, values })
    }

    /// Samples `f(y, z)` on the closed grid over `[-L, L]^2`.
    pub fn from_fn(
        n_y: usize,
        n_z: usize,
        half_width: f64,
        f: impl Fn(f64, f64) -> [f64; 3],
    ) -> Result<Self> {
        let l = half_width;
        let mut values = Vec::with_capacity(n_y * n_z);
        for i in 0..n_y {
            let y = node(-l, l, n_y, i);
            for j in 0..n_z {
                values.push(f(y, node(-l, l, n_z, j)));
            }
        }
        Self::new(n_y, n_z, values)
    }

    /// Reads a CSV file with header `y,z,h1,h2,h3`. The grid shape is inferred
    /// from the leading run of equal `y`, and every coordinate is checked
    /// against the node positions for half-width `half_width`.
    pub fn from_csv_path(path: impl AsRef<Path>, half_width: f64) -> Result<Self> {
        let path = path.as_ref();
        let reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Grid(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(reader, half_width)
    }

    pub fn from_csv_str(text: &str, half_width: f64) -> Result<Self> {
        let reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        Self::from_csv_reader(reader, half_width)
    }

    fn from_csv_reader<R: std::io::Read>(mut reader: csv::Reader<R>, half_width: f64) -> Result<Self> {
        let header = reader
            .headers()
            .map_err(|e| Error::Grid(e.to_string()))?
            .iter()
            .collect::<Vec<_>>()
            .join(",");
        if header != "y,z,h1,h2,h3" {
            return Err(Error::Grid(format!("expected header `y,z,h1,h2,h3`, got `{header}`")));
        }
        let rows = reader
            .deserialize::<CsvRow>()
            .enumerate()
            .map(|(k, r)| r.map_err(|e| Error::Grid(format!("data row {}: {e}", k + 1))))
            .collect::<Result<Vec<_>>>()?;
        let first_y = rows
            .first()
            .ok_or_else(|| Error::Grid("no data rows".into()))?
            .y;
        let n_z = rows.iter().take_while(|r| r.y == first_y).count();
        if n_z == 0 || rows.len() % n_z != 0 {
            return Err(Error::Grid(format!(
                "{} rows do not form a tensor grid with {n_z} nodes per y-row",
                rows.len()
            )));
        }
        let n_y = rows.len() / n_z;
        let l = half_width;
        let tol = 1e-9 * l;
        for (k, r) in rows.iter().enumerate() {
            let (i, j) = (k / n_z, k % n_z);
            if n_y < 2 || n_z < 2 {
                break;
            }
            let (y, z) = (node(-l, l, n_y, i), node(-l, l, n_z, j));
            if (r.y - y).abs() > tol || (r.z - z).abs() > tol {
                return Err(Error::Grid(format!(
                    "data row {}: node ({i}, {j}) expected at (y={y}, z={z}), found (y={}, z={})",
                    k + 1,
                    r.y,
                    r.z
                )));
            }
        }
        Self::new(n_y, n_z, rows.iter().map(|r| [r.h1, r.h2, r.h3]).collect())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_y, self.n_z)
    }

    pub fn values(&self) -> &[[f64; 3]] {
        &self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n_y: self.n_y,
            n_z: self.n_z,
            values: self.values.iter().map(|v| v.map(|x| c * x)).collect(),
        }
    }

    fn at(&self, i: usize, j: usize) -> [f64; 3] {
        self.values[i * self.n_z + j]
    }
}

impl InflowDatum {
    pub fn analytic(amplitude: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "inflow.amplitude",
                value: amplitude,
                reason: "must be finite and nonnegative",
            });
        }
        Ok(Self::Analytic { amplitude })
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, Self::Analytic { .. })
    }
}

/// Checks that `h` vanishes on the boundary of the inlet face.
///
/// The tolerance is relative to `max |h|` over the grid; the cosine profile
/// always passes.
pub fn compatibility_check(datum: &InflowDatum, geom: &ChannelGeometry, compat_tol: f64) -> Result<()> {
    let s = match datum {
        InflowDatum::Analytic { .. } => return Ok(()),
        InflowDatum::Sampled(s) => s,
    };
    let mag = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let scale = s.values.iter().map(|&v| mag(v)).fold(0.0, f64::max);
    let l = geom.half_width();
    let (n_y, n_z) = s.shape();
    let mut bad = Vec::new();
    for i in 0..n_y {
        for j in 0..n_z {
            if i != 0 && j != 0 && i + 1 != n_y && j + 1 != n_z {
                continue;
            }
            let m = mag(s.at(i, j));
            if m > compat_tol * scale {
                bad.push(BoundaryNodeViolation {
                    i,
                    j,
                    y: node(-l, l, n_y, i),
                    z: node(-l, l, n_z, j),
                    magnitude: m,
                });
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::IncompatibleInflow(bad))
    }
}

/// First derivative of equispaced samples: fourth-order central differences in
/// the interior, fourth-order one-sided stencils on the two outer layers.
/// Grids with fewer than five nodes fall back to second order.
fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    if n < 5 {
        return (0..n)
            .map(|i| match i {
                0 => (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h),
                _ if i + 1 == n => (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h),
                _ => (f[i + 1] - f[i - 1]) / (2.0 * h),
            })
            .collect();
    }
    let lead = |g: &dyn Fn(usize) -> f64, first: bool| {
        if first {
            (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * h)
        } else {
            (-3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) / (12.0 * h)
        }
    };
    (0..n)
        .map(|i| {
            if i < 2 {
                lead(&|k| f[k], i == 0)
            } else if i + 2 >= n {
                -lead(&|k| f[n - 1 - k], i + 1 == n)
            } else {
                (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h)
            }
        })
        .collect()
}

fn sampled_norms(s: &SampledInflow, half_width: f64) -> Result<InflowNorms> {
    let l = half_width;
    let (n_y, n_z) = s.shape();
    let h_y = 2.0 * l / (n_y - 1) as f64;
    let h_z = 2.0 * l / (n_z - 1) as f64;

    // d/dz along each y-row, d/dy along each z-column; layout [comp][i * n_z + j]
    let mut dz = [vec![0.0; n_y * n_z], vec![0.0; n_y * n_z], vec![0.0; n_y * n_z]];
    let mut dy = dz.clone();
    for c in 0..3 {
        let rows: Vec<Vec<f64>> = (0..n_y)
            .into_par_iter()
            .map(|i| derivative(&(0..n_z).map(|j| s.at(i, j)[c]).collect::<Vec<_>>(), h_z))
            .collect();
        for (i, row) in rows.into_iter().enumerate() {
            dz[c][i * n_z..(i + 1) * n_z].copy_from_slice(&row);
        }
        let cols: Vec<Vec<f64>> = (0..n_z)
            .into_par_iter()
            .map(|j| derivative(&(0..n_y).map(|i| s.at(i, j)[c]).collect::<Vec<_>>(), h_y))
            .collect();
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                dy[c][i * n_z + j] = v;
            }
        }
    }

    let sq: Vec<f64> = s.values.iter().map(|v| v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).collect();
    let gsq: Vec<f64> = (0..n_y * n_z)
        .map(|k| (0..3).map(|c| dy[c][k] * dy[c][k] + dz[c][k] * dz[c][k]).sum())
        .collect();
    let dsq: Vec<f64> = (0..n_y * n_z)
        .map(|k| {
            let d = dy[1][k] + dz[2][k];
            d * d
        })
        .collect();
    let integrate = |f: &[f64]| simpson_2d_samples(f, [n_y, n_z], [-l, -l], [l, l]);
    Ok(InflowNorms {
        l2: integrate(&sq)?.max(0.0).sqrt(),
        grad_l2: integrate(&gsq)?.max(0.0).sqrt(),
        div_l2: integrate(&dsq)?.max(0.0).sqrt(),
    })
}

/// The three boundary norms entering `Phi(h)`.
pub fn inflow_norms(datum: &InflowDatum, geom: &ChannelGeometry) -> Result<InflowNorms> {
    match datum {
        InflowDatum::Analytic { amplitude } => Ok(InflowNorms {
            l2: amplitude * geom.half_width(),
            grad_l2: amplitude * PI / SQRT_2,
            div_l2: 0.0,
        }),
        InflowDatum::Sampled(s) => sampled_norms(s, geom.half_width()),
    }
}

/// `Phi(h) = sqrt(2L) [ (1+M)/(L-a) ||h|| + ||grad h|| + M ||div h|| ]`
pub fn phi_of_h(norms: &InflowNorms, bogovskii_m: f64, geom: &ChannelGeometry) -> f64 {
    let l = geom.half_width();
    (2.0 * l).sqrt()
        * ((1.0 + bogovskii_m) / (l - geom.a()) * norms.l2 + norms.grad_l2 + bogovskii_m * norms.div_l2)
}

/// `sqrt(2L) ((1+M)/(L-a) + pi/(sqrt(2) L)) A`: the value of `Phi` stated for
/// the cosine profile in the drag/lift estimate. It equals [`phi_of_h`] of
/// the same profile divided by `L`.
pub fn phi_cosine_alternative(amplitude: f64, bogovskii_m: f64, geom: &ChannelGeometry) -> f64 {
    let l = geom.half_width();
    (2.0 * l).sqrt() * ((1.0 + bogovskii_m) / (l - geom.a()) + PI / (SQRT_2 * l)) * amplitude
}

/// The cosine profile `A cos(pi y / 2L) cos(pi z / 2L) e_1`.
pub fn cosine_profile(amplitude: f64, half_width: f64) -> impl Fn(f64, f64) -> [f64; 3] {
    let k = PI / (2.0 * half_width);
    move |y, z| [amplitude * (k * y).cos() * (k * z).cos(), 0.0, 0.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(l: f64) -> ChannelGeometry {
        ChannelGeometry::new(l, 0.5 * l, 0.5 * l, 0.5 * l, 0.3 * l.powi(3)).unwrap()
    }

    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / y.abs()
    }

    #[test]
    fn analytic_closed_forms() {
        let g = geom(1.0);
        let n = inflow_norms(&InflowDatum::analytic(1.0).unwrap(), &g).unwrap();
        assert_eq!(n.l2, 1.0);
        assert!((n.grad_l2 - PI / SQRT_2).abs() < 1e-15);
        assert_eq!(n.div_l2, 0.0);
        let z = inflow_norms(&InflowDatum::analytic(0.0).unwrap(), &g).unwrap();
        assert_eq!((z.l2, z.grad_l2, z.div_l2), (0.0, 0.0, 0.0));
        assert!(InflowDatum::analytic(-1.0).is_err());
    }

    #[test]
    fn sampled_cosine_matches_closed_form() {
        for l in [1.0, 1.7] {
            let g = geom(l);
            let amp = 2.5;
            let s = SampledInflow::from_fn(257, 257, l, cosine_profile(amp, l)).unwrap();
            let n = inflow_norms(&InflowDatum::Sampled(s), &g).unwrap();
            assert!(rel(n.l2, amp * l) < 1e-8);
            assert!(rel(n.grad_l2, amp * PI / SQRT_2) < 1e-8);
            assert_eq!(n.div_l2, 0.0);
        }
    }

    #[test]
    fn derivative_exact_on_quartics() {
        let h = 0.1;
        let f: Vec<f64> = (0..9).map(|i| (i as f64 * h).powi(4) - 2.0 * (i as f64 * h)).collect();
        let d = derivative(&f, h);
        for (i, v) in d.iter().enumerate() {
            let x = i as f64 * h;
            assert!((v - (4.0 * x.powi(3) - 2.0)).abs() < 1e-11, "{i}: {v}");
        }
        let d3 = derivative(&[0.0, 1.0, 4.0], 1.0);
        assert_eq!(d3, vec![0.0, 2.0, 4.0]);
    }

    #[test]
    fn divergence_of_solenoidal_tangential_field() {
        // h_2 = d psi/dz, h_3 = -d psi/dy with psi vanishing to second order
        let l = 1.0;
        let k = PI / (2.0 * l);
        let s = SampledInflow::from_fn(129, 129, l, |y, z| {
            let (cy, cz) = ((k * y).cos(), (k * z).cos());
            let (sy, sz) = ((k * y).sin(), (k * z).sin());
            [0.0, -2.0 * k * cy * cy * cz * sz, 2.0 * k * cy * sy * cz * cz]
        })
        .unwrap();
        let n = inflow_norms(&InflowDatum::Sampled(s), &geom(l)).unwrap();
        assert!(n.div_l2 < 1e-6 * n.grad_l2, "{:?}", n);
    }

    #[test]
    fn compatibility() {
        let g = geom(1.0);
        assert!(compatibility_check(&InflowDatum::analytic(3.0).unwrap(), &g, 1e-8).is_ok());
        let zero = SampledInflow::from_fn(5, 5, 1.0, |_, _| [0.0; 3]).unwrap();
        assert!(compatibility_check(&InflowDatum::Sampled(zero), &g, 1e-8).is_ok());

        let mut values = SampledInflow::from_fn(5, 5, 1.0, cosine_profile(1.0, 1.0)).unwrap().values;
        for v in values.iter_mut() {
            if v[0].abs() < 1e-12 {
                *v = [0.0; 3];
            }
        }
        values[2] = [1e-3, 0.0, 0.0];
        let bad = SampledInflow::new(5, 5, values).unwrap();
        match compatibility_check(&InflowDatum::Sampled(bad), &g, 1e-8) {
            Err(Error::IncompatibleInflow(v)) => {
                assert_eq!(v.len(), 1);
                assert_eq!((v[0].i, v[0].j), (0, 2));
                assert_eq!(v[0].magnitude, 1e-3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_roundtrip_and_diagnostics() {
        let l = 1.0;
        let s = SampledInflow::from_fn(5, 3, l, cosine_profile(1.0, l)).unwrap();
        let mut text = String::from("y,z,h1,h2,h3\n");
        for i in 0..5 {
            for j in 0..3 {
                let v = s.at(i, j);
                text += &format!(
                    "{:?},{:?},{:?},{:?},{:?}\n",
                    node(-l, l, 5, i),
                    node(-l, l, 3, j),
                    v[0],
                    v[1],
                    v[2]
                );
            }
        }
        assert_eq!(SampledInflow::from_csv_str(&text, l).unwrap(), s);
        assert!(SampledInflow::from_csv_str("a,b\n1,2\n", l).is_err());
        let shifted = text.replacen("-1.0,-1.0", "-1.0,-0.9", 1);
        assert!(SampledInflow::from_csv_str(&shifted, l).is_err());
        assert!(SampledInflow::from_csv_str("y,z,h1,h2,h3\n", l).is_err());
        let even = SampledInflow::from_fn(4, 3, l, cosine_profile(1.0, l));
        assert_eq!(even, Err(Error::EvenNodeCount(4)));
    }

    #[test]
    fn phi_zero_linear_and_closed_form() {
        let g = geom(1.3);
        let m = g.bogovskii_m();
        let zero = InflowNorms { l2: 0.0, grad_l2: 0.0, div_l2: 0.0 };
        assert_eq!(phi_of_h(&zero, m, &g), 0.0);
        let n = InflowNorms { l2: 0.7, grad_l2: 1.1, div_l2: 0.2 };
        assert!(rel(phi_of_h(&n.scaled(3.0), m, &g), 3.0 * phi_of_h(&n, m, &g)) < 1e-15);

        let (l, a) = (g.half_width(), g.a());
        let na = inflow_norms(&InflowDatum::analytic(1.0).unwrap(), &g).unwrap();
        let expect = (2.0 * l).sqrt() * ((1.0 + m) * l / (l - a) + PI / SQRT_2);
        assert!(rel(phi_of_h(&na, m, &g), expect) < 1e-14);
        assert!(rel(phi_cosine_alternative(1.0, m, &g) * l, expect) < 1e-14);
    }
}
