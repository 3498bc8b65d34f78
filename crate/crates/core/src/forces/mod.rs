//! Solenoidal extensions of `e_1` and `e_3` around the obstacle box and the
//! resulting drag and lift bounds.
//!
//! The volume formulas for drag and lift need the flow field itself; only
//! their norm consequence is evaluated here. [`ExtensionField::eval`] is
//! public so that a user holding an external flow solution can integrate
//! the volume formulas directly.

mod bounds;
mod cutoff;
mod field;

pub use bounds::{
    admissible_amplitude_alternative, drag_lift_bound_general, force_certificate,
    require_cube_conda,
    force_certificate_strict, psi_bound, q_norm_bounds, ForceBounds, ForceReport, QNormBounds,
};
pub use cutoff::{phi_eps_eval, CutoffProfile, CutoffValue};
pub use field::{standard_eps, Axis, ExtensionField};
