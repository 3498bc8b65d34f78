//! The extension fields `q = xi e + (1/2) grad xi x (e x r)`, i.e.
//! `q = (1/2) curl(xi (e x r))`, with `xi(x, y, z) = phi(x/a) phi(y/b) phi(z/c)`.

use serde::{Deserialize, Serialize};

use super::cutoff::CutoffProfile;
use crate::error::Result;
use crate::geometry::ChannelGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// Streamwise, drag direction.
    E1,
    /// Lift direction.
    E3,
}

impl Axis {
    pub fn unit(self) -> [f64; 3] {
        match self {
            Self::E1 => [1.0, 0.0, 0.0],
            Self::E3 => [0.0, 0.0, 1.0],
        }
    }
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionField {
    half: [f64; 3],
    cutoff: CutoffProfile,
    axis: Axis,
}

impl ExtensionField {
    /// Field with an arbitrary `eps > 0`.
    pub fn new(geom: &ChannelGeometry, eps: f64, axis: Axis) -> Result<Self> {
        Ok(Self {
            half: [geom.a(), geom.b(), geom.c()],
            cutoff: CutoffProfile::new(eps)?,
            axis,
        })
    }

    /// Field with `eps = (L - a) / (2a)`, the largest value keeping the
    /// support inside the channel with margin.
    pub fn standard(geom: &ChannelGeometry, axis: Axis) -> Self {
        let eps = standard_eps(geom);
        Self::new(geom, eps, axis).expect("eps is positive for a valid geometry")
    }

    pub fn eps(&self) -> f64 {
        self.cutoff.eps()
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Half-extents of the box `P`.
    pub fn half_extents(&self) -> [f64; 3] {
        self.half
    }

    /// Half-extents of the support, `(1 + eps) (a, b, c)`.
    pub fn support_half_extents(&self) -> [f64; 3] {
        self.half.map(|h| (1.0 + self.eps()) * h)
    }

    /// `xi`, `grad xi` and the Hessian of `xi`.
    fn xi(&self, p: [f64; 3]) -> (f64, [f64; 3], [[f64; 3]; 3]) {
        let f: Vec<_> = (0..3).map(|d| self.cutoff.eval(p[d] / self.half[d])).collect();
        let v = [f[0].value, f[1].value, f[2].value];
        let d1 = [0, 1, 2].map(|d| f[d].d1 / self.half[d]);
        let d2 = [0, 1, 2].map(|d| f[d].d2 / (self.half[d] * self.half[d]));
        let others = |d: usize| {
            (0..3)
                .filter(|&k| k != d)
                .map(|k| v[k])
                .product::<f64>()
        };
        let grad = [0, 1, 2].map(|d| d1[d] * others(d));
        let mut hess = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                hess[i][j] = if i == j {
                    d2[i] * others(i)
                } else {
                    let k = 3 - i - j;
                    d1[i] * d1[j] * v[k]
                };
            }
        }
        (v[0] * v[1] * v[2], grad, hess)
    }

    /// `q(p)`
    pub fn eval(&self, p: [f64; 3]) -> [f64; 3] {
        self.eval_with_jacobian(p).0
    }

    /// `q(p)` and its Jacobian `J[i][j] = d q_i / d x_j`.
    pub fn eval_with_jacobian(&self, p: [f64; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
        let e = self.axis.unit();
        let (xi, g, h) = self.xi(p);
        let w = cross(e, p);
        let gw = cross(g, w);
        let q = [0, 1, 2].map(|i| xi * e[i] + 0.5 * gw[i]);
        let mut jac = [[0.0; 3]; 3];
        for j in 0..3 {
            let mut ej = [0.0; 3];
            ej[j] = 1.0;
            let hj = [h[0][j], h[1][j], h[2][j]];
            let a = cross(hj, w);
            let b = cross(g, cross(e, ej));
            for i in 0..3 {
                jac[i][j] = g[j] * e[i] + 0.5 * (a[i] + b[i]);
            }
        }
        (q, jac)
    }
}

pub fn standard_eps(geom: &ChannelGeometry) -> f64 {
    (geom.half_width() - geom.a()) / (2.0 * geom.a())
}
