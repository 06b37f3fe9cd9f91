use super::gradient::discrete_gradient_at;
use super::lbfgs::{inf_norm, minimize, LbfgsSettings};
use super::{SolveOptions, SolveReport, SolveStatus, ABNORMAL_GRADIENT_TOL};
use crate::error::{FracError, Result};
use crate::fields::Field2D;
use crate::fracops::QuadratureWeights;
use crate::variational::{
    el_residual_at, eval_functional_at, natural_bc_residuals_at, Functional, IsoperimetricProblem, MultiplierPair,
    NodalState,
};

/// Splits nodal values into free unknowns and fixed boundary data.
struct Layout {
    base: Field2D,
    free: Vec<usize>,
}

impl Layout {
    fn field(&self, x: &[f64]) -> Field2D {
        let mut values = self.base.values().to_vec();
        for (&k, &v) in self.free.iter().zip(x) {
            values[k] = v;
        }
        Field2D::from_raw(*self.base.grid(), values)
    }

    fn restrict(&self, f: &Field2D) -> Vec<f64> {
        self.free.iter().map(|&k| f.values()[k]).collect()
    }
}

struct Evaluation {
    state: NodalState,
    cost: f64,
    cost_grad: Field2D,
    constraint: f64,
    constraint_grad: Field2D,
}

struct Context<'a> {
    p: &'a IsoperimetricProblem,
    weights: QuadratureWeights,
    layout: Layout,
}

impl Context<'_> {
    fn evaluate(&self, u: &Field2D) -> Result<Evaluation> {
        let state = NodalState::new(self.p, u)?;
        let cost = eval_functional_at(self.p, Functional::Cost, &state)?;
        let cost_grad = discrete_gradient_at(self.p, Functional::Cost, &state, &self.weights)?;
        let (constraint, constraint_grad) = if self.p.constraint_active {
            (
                eval_functional_at(self.p, Functional::Constraint, &state)?,
                discrete_gradient_at(self.p, Functional::Constraint, &state, &self.weights)?,
            )
        } else {
            (0.0, Field2D::zeros(&self.p.grid))
        };
        if !cost.is_finite() || !constraint.is_finite() {
            return Err(FracError::NonFinite { node: (0, 0), value: cost + constraint });
        }
        Ok(Evaluation { state, cost, cost_grad, constraint, constraint_grad })
    }

    fn lagrangian_gradient(&self, e: &Evaluation, lambda: f64) -> Vec<f64> {
        self.layout
            .free
            .iter()
            .map(|&k| e.cost_grad.values()[k] + lambda * e.constraint_grad.values()[k])
            .collect()
    }
}

/// Fixed-boundary solve: requires ψ.
pub fn solve_fixed_boundary(p: &IsoperimetricProblem, opts: &SolveOptions) -> Result<SolveReport> {
    if p.psi.is_none() {
        return Err(FracError::InvalidProblem("fixed-boundary solve needs a boundary trace".into()));
    }
    solve(p, opts)
}

/// Free-boundary solve: ψ must be absent.
pub fn solve_free_boundary(p: &IsoperimetricProblem, opts: &SolveOptions) -> Result<SolveReport> {
    if p.psi.is_some() {
        return Err(FracError::InvalidProblem("free-boundary solve got a boundary trace".into()));
    }
    solve(p, opts)
}

/// Solves with ψ imposed when the problem carries one, free boundary otherwise.
pub fn solve(p: &IsoperimetricProblem, opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    let grid = p.grid;
    if let Some(init) = &opts.initial_guess {
        p.ensure_on_grid(init)?;
    }
    let (base, free): (Field2D, Vec<usize>) = match &p.psi {
        Some(psi) => {
            let start = match &opts.initial_guess {
                Some(init) => psi.impose(init)?,
                None => psi.interpolant(),
            };
            let free = (0..grid.nx())
                .flat_map(|i| (0..grid.ny()).map(move |j| (i, j)))
                .filter(|&(i, j)| !grid.is_boundary(i, j))
                .map(|(i, j)| grid.index(i, j))
                .collect();
            (start, free)
        }
        None => (
            opts.initial_guess.clone().unwrap_or_else(|| Field2D::zeros(&grid)),
            (0..grid.len()).collect(),
        ),
    };
    let ctx = Context {
        p,
        weights: QuadratureWeights::new(&grid, p.order),
        layout: Layout { base, free },
    };
    if ctx.layout.free.is_empty() {
        return Err(FracError::InvalidProblem("no free nodes to optimise".into()));
    }

    let mut x = ctx.layout.restrict(&ctx.layout.base);
    let mut lambda = 0.0;
    let mut rho = opts.penalty_init;
    let level = p.level;
    let active = p.constraint_active;

    let mut current = ctx.evaluate(&ctx.layout.field(&x))?;
    let mut prev_violation = (current.constraint - level).abs();
    let mut status = None;
    let mut outer_iterations = 0;
    let mut inner_iterations = 0;
    let mut descent_trace = Vec::new();
    let settings = LbfgsSettings {
        max_iters: opts.max_inner_iters,
        grad_tol: opts.grad_tol,
        ..Default::default()
    };

    for _ in 0..opts.max_outer_iters {
        outer_iterations += 1;
        let (lam, pen) = (lambda, rho);
        let outcome = minimize(x.clone(), &settings, |xs| {
            let e = ctx.evaluate(&ctx.layout.field(xs))?;
            let c = e.constraint - level;
            let value = e.cost + if active { lam * c + 0.5 * pen * c * c } else { 0.0 };
            let grad = ctx.lagrangian_gradient(&e, if active { lam + pen * c } else { 0.0 });
            Ok((value, grad))
        })?;
        inner_iterations += outcome.iterations;
        descent_trace.push(outcome.accepted_values);
        x = outcome.x;
        current = ctx.evaluate(&ctx.layout.field(&x))?;

        let c = current.constraint - level;
        if active {
            lambda += rho * c;
        }
        let violation = c.abs();
        let stationarity = inf_norm(&ctx.lagrangian_gradient(&current, lambda));
        if violation <= opts.constraint_tol && stationarity <= opts.grad_tol {
            status = Some(SolveStatus::Converged);
            break;
        }
        if active && violation > 0.25 * prev_violation {
            rho = (rho * opts.penalty_growth).min(opts.penalty_max);
        }
        prev_violation = violation;
    }

    let violation = if active { (current.constraint - level).abs() } else { 0.0 };
    let mut status = status.unwrap_or(if violation > opts.constraint_tol {
        SolveStatus::Infeasible
    } else {
        SolveStatus::MaxIters
    });
    let mut multipliers = MultiplierPair::normal(lambda);
    if active {
        let g_norm = ctx
            .layout
            .free
            .iter()
            .fold(0.0_f64, |m, &k| m.max(current.constraint_grad.values()[k].abs()));
        if g_norm <= ABNORMAL_GRADIENT_TOL {
            status = SolveStatus::Abnormal;
            multipliers = MultiplierPair::constraint_only();
        }
    }

    let stationarity = ctx
        .layout
        .free
        .iter()
        .map(|&k| multipliers.lambda0 * current.cost_grad.values()[k] + multipliers.lambda * current.constraint_grad.values()[k])
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let residual = el_residual_at(p, &current.state, multipliers)?;
    let el_residual_max = ctx
        .layout
        .free
        .iter()
        .fold(0.0_f64, |m, &k| m.max(residual.values()[k].abs()));
    let nat_bc_residual_max = match p.psi {
        Some(_) => None,
        None => Some(natural_bc_residuals_at(p, &current.state, multipliers)?.max_abs()),
    };

    Ok(SolveReport {
        u: current.state.u.clone(),
        multipliers,
        objective: current.cost,
        constraint_violation: violation,
        el_residual_max,
        nat_bc_residual_max,
        stationarity,
        status,
        outer_iterations,
        inner_iterations,
        descent_trace,
    })
}
