//! Piecewise-cubic `C^1` cutoff `phi_eps`, equal to 1 on `[-1, 1]` and
//! supported in `(-1-eps, 1+eps)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    eps: f64,
}

/// `phi_eps(t)` with its first and second derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl CutoffProfile {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Self { eps })
        } else {
            Err(Error::InvalidParameter {
                name: "eps",
                value: eps,
                reason: "must be finite and positive",
            })
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `3 / (2 eps)`
    pub fn sup_d1(&self) -> f64 {
        1.5 / self.eps
    }

    /// `6 / eps^2`
    pub fn sup_d2(&self) -> f64 {
        6.0 / (self.eps * self.eps)
    }

    /// Second derivatives at the breakpoints `|t| = 1` and `|t| = 1 + eps` take
    /// the one-sided limit from the transition band.
    pub fn eval(&self, t: f64) -> CutoffValue {
        let e = self.eps;
        let s = t.abs();
        let sign = if t < 0.0 { -1.0 } else { 1.0 };
        if s < 1.0 {
            CutoffValue { value: 1.0, d1: 0.0, d2: 0.0 }
        } else if s > 1.0 + e {
            CutoffValue { value: 0.0, d1: 0.0, d2: 0.0 }
        } else {
            let e3 = e * e * e;
            // the cubic in factored form (1-u)^2 (1+2u), u = (s-1)/eps, stays in [0, 1]
            let u = ((s - 1.0) / e).min(1.0);
            let value = if s == 1.0 + e { 0.0 } else { (1.0 - u) * (1.0 - u) * (1.0 + 2.0 * u) };
            CutoffValue {
                value,
                d1: sign * 6.0 / e3 * (s - 1.0) * (s - 1.0 - e),
                d2: 6.0 / e3 * (2.0 * s - 2.0 - e),
            }
        }
    }
}

pub fn phi_eps_eval(eps: f64, t: f64) -> Result<CutoffValue> {
    Ok(CutoffProfile::new(eps)?.eval(t))
}
