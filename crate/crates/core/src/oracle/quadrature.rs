//! Composite Simpson quadrature on tensor grids with a fixed reduction order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::{BoxDomain, GridSpec};

const PAIRWISE_BLOCK: usize = 64;

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is reproducible regardless of how the input was produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Composite Simpson weights for `n` equispaced nodes spanning `[lo, hi]`.
pub fn simpson_weights(n: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::EvenNodeCount(n));
    }
    let h = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect())
}

/// Node `i` of `n` equispaced nodes on `[lo, hi]`; both ends are exact.
pub fn node(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

pub fn simpson_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Result<f64> {
    let w = simpson_weights(n, lo, hi)?;
    let terms: Vec<f64> = (0..n).map(|i| w[i] * f(node(lo, hi, n, i))).collect();
    Ok(pairwise_sum(&terms))
}

/// Tensor-product Simpson rule on `nodes[0] x nodes[1]` samples given row-major
/// (first index outer).
pub fn simpson_2d_samples(
    samples: &[f64],
    nodes: [usize; 2],
    lo: [f64; 2],
    hi: [f64; 2],
) -> Result<f64> {
    let wy = simpson_weights(nodes[0], lo[0], hi[0])?;
    let wz = simpson_weights(nodes[1], lo[1], hi[1])?;
    if samples.len() != nodes[0] * nodes[1] {
        return Err(Error::Grid(format!(
            "expected {} samples, got {}",
            nodes[0] * nodes[1],
            samples.len()
        )));
    }
    let rows: Vec<f64> = samples
        .chunks(nodes[1])
        .zip(&wy)
        .map(|(row, &wi)| {
            let t: Vec<f64> = row.iter().zip(&wz).map(|(v, w)| v * w).collect();
            wi * pairwise_sum(&t)
        })
        .collect();
    Ok(pairwise_sum(&rows))
}

/// Tensor-product composite Simpson over a 3D box; `grid.n` are node counts
/// (odd, including both ends). Slabs along the first axis are evaluated in
/// parallel and reduced pairwise in index order.
pub fn simpson_nd<F>(sampler: F, domain: &BoxDomain, grid: &GridSpec) -> Result<f64>
where
    F: Fn([f64; 3]) -> f64 + Sync,
{
    let w: Vec<Vec<f64>> = (0..3)
        .map(|d| simpson_weights(grid.n[d], domain.lo[d], domain.hi[d]))
        .collect::<Result<_>>()?;
    let [nx, ny, nz] = grid.n;
    let slabs: Vec<f64> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let x = node(domain.lo[0], domain.hi[0], nx, i);
            let mut terms = Vec::with_capacity(ny * nz);
            for j in 0..ny {
                let y = node(domain.lo[1], domain.hi[1], ny, j);
                for k in 0..nz {
                    let z = node(domain.lo[2], domain.hi[2], nz, k);
                    terms.push(w[1][j] * w[2][k] * sampler([x, y, z]));
                }
            }
            w[0][i] * pairwise_sum(&terms)
        })
        .collect();
    Ok(pairwise_sum(&slabs))
}

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Composite Simpson on each piece `[breaks[k], breaks[k+1]]` with
/// `nodes_per_piece` nodes; shared endpoints are merged. Integrands that are
/// smooth only piecewise keep the full Simpson order when their kinks sit on
/// the breaks.
pub fn piecewise_simpson(breaks: &[f64], nodes_per_piece: usize) -> Result<Rule1d> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid(format!("breaks must be strictly increasing, got {breaks:?}")));
    }
    let mut nodes = vec![breaks[0]];
    let mut weights = vec![0.0];
    for w in breaks.windows(2) {
        let ws = simpson_weights(nodes_per_piece, w[0], w[1])?;
        *weights.last_mut().expect("nonempty") += ws[0];
        for i in 1..nodes_per_piece {
            nodes.push(node(w[0], w[1], nodes_per_piece, i));
            weights.push(ws[i]);
        }
    }
    Ok(Rule1d { nodes, weights })
}

/// Tensor product of three 1D rules applied to an integrand with `N`
/// outputs. Slabs along the first axis run in parallel; every reduction is
/// pairwise in index order.
pub fn tensor_sum<const N: usize, F>(rules: [&Rule1d; 3], f: F) -> [f64; N]
where
    F: Fn([f64; 3]) -> [f64; N] + Sync,
{
    let [rx, ry, rz] = rules;
    let slabs: Vec<[f64; N]> = (0..rx.nodes.len())
        .into_par_iter()
        .map(|i| {
            let x = rx.nodes[i];
            let mut terms = vec![Vec::with_capacity(ry.nodes.len() * rz.nodes.len()); N];
            for (y, wy) in ry.nodes.iter().zip(&ry.weights) {
                for (z, wz) in rz.nodes.iter().zip(&rz.weights) {
                    let v = f([x, *y, *z]);
                    for k in 0..N {
                        terms[k].push(wy * wz * v[k]);
                    }
                }
            }
            std::array::from_fn(|k| rx.weights[i] * pairwise_sum(&terms[k]))
        })
        .collect();
    std::array::from_fn(|k| pairwise_sum(&slabs.iter().map(|s| s[k]).collect::<Vec<_>>()))
}
