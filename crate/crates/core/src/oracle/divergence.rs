//! Divergence residuals of vector fields sampled on a node grid.

use rayon::prelude::*;

use super::quadrature::node;
use super::{BoxDomain, GridSpec};

fn grid_points(domain: &BoxDomain, grid: &GridSpec) -> Vec<[f64; 3]> {
    let [nx, ny, nz] = grid.n;
    let mut pts = Vec::with_capacity(grid.len());
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                pts.push([
                    node(domain.lo[0], domain.hi[0], nx, i),
                    node(domain.lo[1], domain.hi[1], ny, j),
                    node(domain.lo[2], domain.hi[2], nz, k),
                ]);
            }
        }
    }
    pts
}

/// Central-difference divergence at one point.
pub fn central_divergence<F>(field: &F, p: [f64; 3], step: f64) -> f64
where
    F: Fn([f64; 3]) -> [f64; 3],
{
    (0..3)
        .map(|d| {
            let mut fwd = p;
            let mut bwd = p;
            fwd[d] += step;
            bwd[d] -= step;
            (field(fwd)[d] - field(bwd)[d]) / (2.0 * step)
        })
        .sum()
}

/// `max |div f|` over the grid nodes, with central differences of width `step`.
pub fn divergence_residual_fd<F>(field: F, domain: &BoxDomain, grid: &GridSpec, step: f64) -> f64
where
    F: Fn([f64; 3]) -> [f64; 3] + Sync,
{
    grid_points(domain, grid)
        .par_iter()
        .map(|&p| central_divergence(&field, p, step).abs())
        .reduce(|| 0.0, f64::max)
}

/// `max |trace J|` over the grid nodes for an analytic Jacobian `J[i][j] = d f_i / d x_j`.
pub fn divergence_residual_jacobian<J>(jacobian: J, domain: &BoxDomain, grid: &GridSpec) -> f64
where
    J: Fn([f64; 3]) -> [[f64; 3]; 3] + Sync,
{
    grid_points(domain, grid)
        .par_iter()
        .map(|&p| {
            let j = jacobian(p);
            (j[0][0] + j[1][1] + j[2][2]).abs()
        })
        .reduce(|| 0.0, f64::max)
}
