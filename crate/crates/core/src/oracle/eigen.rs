//! Smallest Dirichlet eigenvalue of the 7-point Laplacian on a box.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::quadrature::pairwise_sum;
use super::{BoxDomain, GridSpec};
use crate::error::{Error, Result};

const MAX_OUTER: usize = 500;
const MAX_INNER: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenEstimate {
    pub lambda: f64,
    /// `||A v - lambda v|| / lambda` at exit, `||v|| = 1`.
    pub residual: f64,
    pub iterations: usize,
    /// Largest mesh width over the three axes.
    pub h: f64,
}

struct Laplacian {
    n: [usize; 3],
    inv_h2: [f64; 3],
}

impl Laplacian {
    fn new(domain: &BoxDomain, grid: &GridSpec) -> Self {
        let mut inv_h2 = [0.0; 3];
        for d in 0..3 {
            let h = domain.extent(d) / (grid.n[d] + 1) as f64;
            inv_h2[d] = 1.0 / (h * h);
        }
        Self { n: grid.n, inv_h2 }
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let [nx, ny, nz] = self.n;
        let [cx, cy, cz] = self.inv_h2;
        let diag = 2.0 * (cx + cy + cz);
        let slab = ny * nz;
        out.par_chunks_mut(slab).enumerate().for_each(|(i, o)| {
            for j in 0..ny {
                for k in 0..nz {
                    let idx = i * slab + j * nz + k;
                    let mut s = diag * v[idx];
                    if i > 0 {
                        s -= cx * v[idx - slab];
                    }
                    if i + 1 < nx {
                        s -= cx * v[idx + slab];
                    }
                    if j > 0 {
                        s -= cy * v[idx - nz];
                    }
                    if j + 1 < ny {
                        s -= cy * v[idx + nz];
                    }
                    if k > 0 {
                        s -= cz * v[idx - 1];
                    }
                    if k + 1 < nz {
                        s -= cz * v[idx + 1];
                    }
                    o[j * nz + k] = s;
                }
            }
        });
    }

    fn slab(&self) -> usize {
        self.n[1] * self.n[2]
    }
}

/// Dot product reduced per slab, then pairwise in slab order.
fn dot(x: &[f64], y: &[f64], slab: usize) -> f64 {
    let partial: Vec<f64> = x
        .par_chunks(slab)
        .zip(y.par_chunks(slab))
        .map(|(a, b)| {
            let t: Vec<f64> = a.iter().zip(b).map(|(p, q)| p * q).collect();
            pairwise_sum(&t)
        })
        .collect();
    pairwise_sum(&partial)
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Conjugate gradients for `A x = b`, starting from the given `x`.
fn cg(op: &Laplacian, b: &[f64], x: &mut [f64], rel_tol: f64) {
    let slab = op.slab();
    let mut ax = vec![0.0; b.len()];
    op.apply(x, &mut ax);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r, slab);
    let target = rel_tol * rel_tol * dot(b, b, slab);
    let mut ap = ax;
    for _ in 0..MAX_INNER {
        if rr <= target {
            break;
        }
        op.apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap, slab);
        axpy(alpha, &p, x);
        axpy(-alpha, &ap, &mut r);
        let rr_new = dot(&r, &r, slab);
        let beta = rr_new / rr;
        rr = rr_new;
        p.par_iter_mut().zip(r.par_iter()).for_each(|(pi, ri)| *pi = ri + beta * *pi);
    }
}

/// Inverse power iteration (zero shift, CG inner solves) for the smallest
/// eigenvalue of the Dirichlet finite-difference Laplacian with `grid.n`
/// interior unknowns per axis. Stops once the relative eigen-residual drops
/// below `tol`.
pub fn box_eigenvalue_fd(domain: &BoxDomain, grid: &GridSpec, tol: f64) -> Result<EigenEstimate> {
    let op = Laplacian::new(domain, grid);
    let slab = op.slab();
    let size = grid.len();
    let h = (0..3)
        .map(|d| domain.extent(d) / (grid.n[d] + 1) as f64)
        .fold(0.0, f64::max);

    // A positive start vector; it has a component along the ground state.
    let mut v = vec![1.0 / (size as f64).sqrt(); size];
    let mut av = vec![0.0; size];
    op.apply(&v, &mut av);
    let mut lambda = dot(&v, &av, slab);
    let mut residual = f64::INFINITY;

    for it in 1..=MAX_OUTER {
        let mut w: Vec<f64> = v.iter().map(|x| x / lambda).collect();
        cg(&op, &v, &mut w, (1e-3 * tol).max(1e-14));
        let norm = dot(&w, &w, slab).sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        v = w;
        op.apply(&v, &mut av);
        lambda = dot(&v, &av, slab);
        let r: Vec<f64> = av.iter().zip(&v).map(|(a, x)| a - lambda * x).collect();
        residual = dot(&r, &r, slab).sqrt() / lambda;
        if residual <= tol {
            return Ok(EigenEstimate {
                lambda,
                residual,
                iterations: it,
                h,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_OUTER,
        residual,
    })
}

/// `sum_i pi^2 / (hi_i - lo_i)^2`, the continuum ground state of the box.
pub fn box_eigenvalue_exact(domain: &BoxDomain) -> f64 {
    (0..3).map(|d| (PI / domain.extent(d)).powi(2)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ground state of the discrete operator: `sum_d (4/h_d^2) sin^2(pi h_d / (2 l_d))`.
    fn discrete_exact(domain: &BoxDomain, grid: &GridSpec) -> f64 {
        (0..3)
            .map(|d| {
                let l = domain.extent(d);
                let h = l / (grid.n[d] + 1) as f64;
                4.0 / (h * h) * (PI * h / (2.0 * l)).sin().powi(2)
            })
            .sum()
    }

    #[test]
    fn matches_discrete_spectrum() {
        let d = BoxDomain::new([0.0; 3], [1.0, 2.0, 0.5]).unwrap();
        let g = GridSpec::new([9, 15, 7]).unwrap();
        let est = box_eigenvalue_fd(&d, &g, 1e-10).unwrap();
        let exact = discrete_exact(&d, &g);
        assert!((est.lambda - exact).abs() <= 1e-10 * exact, "{} vs {exact}", est.lambda);
    }

    #[test]
    fn pi_cube_approaches_three() {
        let d = BoxDomain::new([0.0; 3], [PI; 3]).unwrap();
        let est = box_eigenvalue_fd(&d, &GridSpec::uniform(16).unwrap(), 1e-10).unwrap();
        assert!((est.lambda - 3.0).abs() < 0.01 * 3.0);
        assert!(est.lambda < 3.0);
        assert_eq!(box_eigenvalue_exact(&d), 3.0);
    }

    #[test]
    fn deterministic_across_runs() {
        let d = BoxDomain::doubled_channel(1.0).unwrap();
        let g = GridSpec::uniform(8).unwrap();
        let a = box_eigenvalue_fd(&d, &g, 1e-10).unwrap();
        let b = box_eigenvalue_fd(&d, &g, 1e-10).unwrap();
        assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
    }
}
