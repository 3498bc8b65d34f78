//! Brute-force numerical checks of the closed-form constants: finite-difference
//! Dirichlet eigenvalues of boxes, tensor Simpson quadrature and divergence
//! residuals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod divergence;
mod eigen;
pub mod quadrature;
pub mod suite;

pub use divergence::{divergence_residual_fd, divergence_residual_jacobian};
pub use eigen::{box_eigenvalue_fd, box_eigenvalue_exact, EigenEstimate};
pub use quadrature::{pairwise_sum, simpson_1d, simpson_nd};
pub use suite::{run_suite, SuiteOptions, SuiteReport, SuiteRow};

/// Axis-aligned box `(lo_0, hi_0) x (lo_1, hi_1) x (lo_2, hi_2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl BoxDomain {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        for d in 0..3 {
            if !(lo[d].is_finite() && hi[d].is_finite() && hi[d] > lo[d]) {
                return Err(Error::Grid(format!(
                    "axis {d}: need lo < hi, got ({}, {})",
                    lo[d], hi[d]
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    /// `Q_+ = (-L, 3L) x (-L, L)^2`, the doubled channel.
    pub fn doubled_channel(half_width: f64) -> Result<Self> {
        let l = half_width;
        Self::new([-l, -l, -l], [3.0 * l, l, l])
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }
}

/// Per-axis point counts. Eigenproblems read them as interior unknowns,
/// Simpson quadrature as node counts including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: [usize; 3],
}

impl GridSpec {
    pub fn new(n: [usize; 3]) -> Result<Self> {
        if let Some(&bad) = n.iter().find(|&&k| k < 3) {
            return Err(Error::Grid(format!("need at least 3 points per axis, got {bad}")));
        }
        Ok(Self { n })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new([n; 3])
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Observed convergence order from two errors at step sizes `h_coarse > h_fine`.
pub fn observed_order(err_coarse: f64, err_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (err_coarse / err_fine).ln() / (h_coarse / h_fine).ln()
}
