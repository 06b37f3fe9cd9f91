//! Fractional isoperimetric problems: functionals, optimality residuals and convexity sampling.

mod convexity;
mod functional;
mod integrand;
mod problem;

pub use convexity::{
    convexity_probe, convexity_probe_in_box, hessian_uvw, ConvexityVerdict, ConvexityWitness, DEFAULT_PROBE_RADIUS,
    PSD_EIGEN_FLOOR,
};
pub use functional::{
    default_gateaux_step, el_residual, eval_constraint, eval_dh, eval_functional, eval_h, eval_j, gateaux_derivative,
    natural_bc_residuals, weighted_pairing, Functional, NodalState,
};
pub(crate) use functional::{el_residual_at, eval_functional_at, natural_bc_residuals_at};
pub use integrand::{audit_partials, AuditBox, FnIntegrand, Integrand, LagrangianSpec, PartialMismatch, Point};
pub use problem::{zero_integrand, BoundaryTrace, EdgeResiduals, IsoperimetricProblem, MultiplierPair};
