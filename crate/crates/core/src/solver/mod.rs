//! Discretise-then-optimise solution of fractional isoperimetric problems.
//!
//! The outer loop is an augmented Lagrangian on the single constraint
//! G[u] = K; each subproblem is minimised by L-BFGS over the free nodes
//! (interior nodes when ψ is prescribed, all nodes otherwise). The cost
//! multiplier is normalised to λ₀ = 1 except in the abnormal case.

mod augmented;
mod gradient;
mod lbfgs;

use serde::Serialize;

pub use augmented::{solve, solve_fixed_boundary, solve_free_boundary};
pub use gradient::discrete_gradient;

use crate::error::{FracError, Result};
use crate::fields::Field2D;
use crate::variational::MultiplierPair;

/// Constraint-gradient norm under which the candidate is declared abnormal.
pub const ABNORMAL_GRADIENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_outer_iters: usize,
    pub max_inner_iters: usize,
    pub grad_tol: f64,
    pub constraint_tol: f64,
    pub penalty_init: f64,
    pub penalty_growth: f64,
    /// Upper bound on the penalty parameter.
    pub penalty_max: f64,
    /// Reserved for randomised strategies; the current solver is fully
    /// deterministic and does not draw from it.
    pub seed: u64,
    /// Starting field; boundary nodes are overwritten by ψ when prescribed.
    pub initial_guess: Option<Field2D>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_outer_iters: 50,
            max_inner_iters: 500,
            grad_tol: 1e-8,
            constraint_tol: 1e-8,
            penalty_init: 10.0,
            penalty_growth: 10.0,
            penalty_max: 1e10,
            seed: 0,
            initial_guess: None,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(FracError::InvalidOptions(msg.to_string()));
        if !(self.grad_tol > 0.0) || !(self.constraint_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.penalty_init > 0.0) || !self.penalty_init.is_finite() {
            return bad("initial penalty must be positive");
        }
        if !(self.penalty_growth > 1.0) {
            return bad("penalty growth must exceed 1");
        }
        if !(self.penalty_max >= self.penalty_init) {
            return bad("penalty cap below the initial penalty");
        }
        if self.max_outer_iters == 0 {
            return bad("need at least one outer iteration");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Converged,
    MaxIters,
    Abnormal,
    Infeasible,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "Converged",
            SolveStatus::MaxIters => "MaxIters",
            SolveStatus::Abnormal => "Abnormal",
            SolveStatus::Infeasible => "Infeasible",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub u: Field2D,
    pub multipliers: MultiplierPair,
    pub objective: f64,
    /// |G[u] − K|; zero when the constraint is inactive.
    pub constraint_violation: f64,
    pub el_residual_max: f64,
    /// Only for free-boundary solves.
    pub nat_bc_residual_max: Option<f64>,
    /// ‖∇J + λ∇G‖∞ over the free nodes.
    pub stationarity: f64,
    pub status: SolveStatus,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    /// Augmented-Lagrangian values after each accepted inner step, one list per outer iteration.
    pub descent_trace: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    status: &'static str,
    objective: f64,
    lambda0: f64,
    lambda: f64,
    constraint_violation: f64,
    el_residual_max: f64,
    nat_bc_residual_max: Option<f64>,
    iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
}

impl SolveReport {
    /// JSON summary; `iterations` counts inner quasi-Newton steps.
    pub fn to_json(&self, field_path: Option<&str>) -> String {
        serde_json::to_string(&ReportJson {
            status: self.status.as_str(),
            objective: self.objective,
            lambda0: self.multipliers.lambda0,
            lambda: self.multipliers.lambda,
            constraint_violation: self.constraint_violation,
            el_residual_max: self.el_residual_max,
            nat_bc_residual_max: self.nat_bc_residual_max,
            iterations: self.inner_iterations,
            field: field_path,
        })
        .expect("report fields are finite")
    }
}
