//! The cost, the constraint, H = λ₀f + λg and the first-order residuals.

use super::integrand::{Integrand, Point};
use super::problem::{EdgeResiduals, IsoperimetricProblem, MultiplierPair};
use crate::error::{FracError, Result};
use crate::fields::{Axis, Field2D};
use crate::fracops::{partial_frac, volume_integral};

/// Which of the two double-integral functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// J, built from f.
    Cost,
    /// G, built from g; compared against K.
    Constraint,
}

impl Functional {
    pub fn integrand(self, p: &IsoperimetricProblem) -> &dyn Integrand {
        match self {
            Functional::Cost => p.f.as_ref(),
            Functional::Constraint => p.g.as_ref(),
        }
    }
}

/// u together with v = Dₓ^α u and w = Dᵧ^α u on the same grid.
#[derive(Debug, Clone)]
pub struct NodalState {
    pub u: Field2D,
    pub v: Field2D,
    pub w: Field2D,
}

impl NodalState {
    pub fn new(p: &IsoperimetricProblem, u: &Field2D) -> Result<Self> {
        p.ensure_on_grid(u)?;
        Ok(Self {
            v: partial_frac(u, Axis::X, p.order)?,
            w: partial_frac(u, Axis::Y, p.order)?,
            u: u.clone(),
        })
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> Point {
        let g = self.u.grid();
        let k = g.index(i, j);
        Point::new(g.x(i), g.y(j), self.u.values()[k], self.v.values()[k], self.w.values()[k])
    }

    /// Nodal field of `eval(point)`; rejects non-finite results.
    pub fn assemble(&self, eval: impl Fn(&Point) -> f64) -> Result<Field2D> {
        self.assemble_indexed(|_, _, pt| eval(pt))
    }

    /// As [`NodalState::assemble`] with the node indices passed along.
    pub fn assemble_indexed(&self, eval: impl Fn(usize, usize, &Point) -> f64) -> Result<Field2D> {
        let g = *self.u.grid();
        let mut values = Vec::with_capacity(g.len());
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                let r = eval(i, j, &self.point(i, j));
                if !r.is_finite() {
                    return Err(FracError::NonFinite { node: (i, j), value: r });
                }
                values.push(r);
            }
        }
        Field2D::new(g, values)
    }
}

pub fn eval_functional(p: &IsoperimetricProblem, which: Functional, u: &Field2D) -> Result<f64> {
    let state = NodalState::new(p, u)?;
    eval_functional_at(p, which, &state)
}

pub(crate) fn eval_functional_at(p: &IsoperimetricProblem, which: Functional, state: &NodalState) -> Result<f64> {
    let integrand = which.integrand(p);
    if integrand.is_zero() {
        return Ok(0.0);
    }
    let field = state.assemble(|pt| integrand.value(pt))?;
    Ok(volume_integral(&field, p.order))
}

/// J[u].
pub fn eval_j(p: &IsoperimetricProblem, u: &Field2D) -> Result<f64> {
    eval_functional(p, Functional::Cost, u)
}

/// The constraint integral G[u] (to be compared with K).
pub fn eval_constraint(p: &IsoperimetricProblem, u: &Field2D) -> Result<f64> {
    eval_functional(p, Functional::Constraint, u)
}

/// H = λ₀ f + λ g at one point.
pub fn eval_h(p: &IsoperimetricProblem, m: MultiplierPair, pt: &Point) -> f64 {
    m.lambda0 * p.f.value(pt) + m.lambda * p.g.value(pt)
}

/// ∂₃H, ∂₄H, ∂₅H at one point.
pub fn eval_dh(p: &IsoperimetricProblem, m: MultiplierPair, pt: &Point) -> [f64; 3] {
    [
        m.lambda0 * p.f.du(pt) + m.lambda * p.g.du(pt),
        m.lambda0 * p.f.dv(pt) + m.lambda * p.g.dv(pt),
        m.lambda0 * p.f.dw(pt) + m.lambda * p.g.dw(pt),
    ]
}

/// Nodal field ∂₃H{u} − Dₓ^α ∂₄H{u} − Dᵧ^α ∂₅H{u}.
pub fn el_residual(p: &IsoperimetricProblem, u: &Field2D, m: MultiplierPair) -> Result<Field2D> {
    let state = NodalState::new(p, u)?;
    el_residual_at(p, &state, m)
}

pub(crate) fn el_residual_at(p: &IsoperimetricProblem, state: &NodalState, m: MultiplierPair) -> Result<Field2D> {
    let a = state.assemble(|pt| eval_dh(p, m, pt)[0])?;
    let b = state.assemble(|pt| eval_dh(p, m, pt)[1])?;
    let c = state.assemble(|pt| eval_dh(p, m, pt)[2])?;
    let db = partial_frac(&b, Axis::X, p.order)?;
    let dc = partial_frac(&c, Axis::Y, p.order)?;
    a.sub(&db)?.sub(&dc)
}

/// ∂₄H{u} on x = a and x = b, ∂₅H{u} on y = c and y = d.
pub fn natural_bc_residuals(p: &IsoperimetricProblem, u: &Field2D, m: MultiplierPair) -> Result<EdgeResiduals> {
    let state = NodalState::new(p, u)?;
    natural_bc_residuals_at(p, &state, m)
}

pub(crate) fn natural_bc_residuals_at(
    p: &IsoperimetricProblem,
    state: &NodalState,
    m: MultiplierPair,
) -> Result<EdgeResiduals> {
    let g = p.grid;
    let (nx, ny) = (g.nx(), g.ny());
    let d4 = |i, j| eval_dh(p, m, &state.point(i, j))[1];
    let d5 = |i, j| eval_dh(p, m, &state.point(i, j))[2];
    let edges = EdgeResiduals {
        at_x_a: (0..ny).map(|j| d4(0, j)).collect(),
        at_x_b: (0..ny).map(|j| d4(nx - 1, j)).collect(),
        at_y_c: (0..nx).map(|i| d5(i, 0)).collect(),
        at_y_d: (0..nx).map(|i| d5(i, ny - 1)).collect(),
    };
    let all = [&edges.at_x_a, &edges.at_x_b, &edges.at_y_c, &edges.at_y_d];
    if let Some(v) = all.iter().flat_map(|e| e.iter()).find(|v| !v.is_finite()) {
        return Err(FracError::NonFinite { node: (0, 0), value: *v });
    }
    Ok(edges)
}

/// Default central-difference step 1e-5 · (1 + max|u|).
pub fn default_gateaux_step(u: &Field2D) -> f64 {
    1e-5 * (1.0 + u.max_abs())
}

/// [Φ(u + εη) − Φ(u − εη)] / 2ε for Φ = J or G.
pub fn gateaux_derivative(
    p: &IsoperimetricProblem,
    which: Functional,
    u: &Field2D,
    eta: &Field2D,
    eps: f64,
) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(FracError::Domain(format!("Gateaux step must be positive, got {eps}")));
    }
    u.ensure_same_grid(eta)?;
    let plus = eval_functional(p, which, &u.axpy(eps, eta)?)?;
    let minus = eval_functional(p, which, &u.axpy(-eps, eta)?)?;
    Ok((plus - minus) / (2.0 * eps))
}

/// α² ∬ r η W, the weighted pairing used to compare residual fields with
/// directional derivatives.
pub fn weighted_pairing(p: &IsoperimetricProblem, r: &Field2D, eta: &Field2D) -> Result<f64> {
    Ok(volume_integral(&r.mul(eta)?, p.order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FractionalOrder, Grid2D};
    use crate::variational::integrand::FnIntegrand;
    use std::sync::Arc;

    fn half() -> FractionalOrder {
        FractionalOrder::new(0.5).unwrap()
    }

    fn problem(grid: Grid2D, f: FnIntegrand, g: FnIntegrand) -> IsoperimetricProblem {
        IsoperimetricProblem::new(grid, half(), f.shared(), g.shared(), 0.0).unwrap()
    }

    fn one() -> FnIntegrand {
        FnIntegrand::new("one", |_| 1.0, |_| 0.0, |_| 0.0, |_| 0.0)
    }

    fn state_u() -> FnIntegrand {
        FnIntegrand::new("u", |p| p.u, |_| 1.0, |_| 0.0, |_| 0.0)
    }

    fn dirichlet() -> FnIntegrand {
        FnIntegrand::new("v2w2", |p| p.v * p.v + p.w * p.w, |_| 0.0, |p| 2.0 * p.v, |p| 2.0 * p.w)
    }

    #[test]
    fn cost_examples() {
        let g = Grid2D::unit(9).unwrap();
        let p = problem(g, one(), state_u());
        assert!((eval_j(&p, &Field2D::zeros(&g)).unwrap() - 1.0).abs() < 1e-13);
        let p = problem(g, state_u(), one());
        assert_eq!(eval_j(&p, &Field2D::zeros(&g)).unwrap(), 0.0);
    }

    #[test]
    fn constraint_examples() {
        let g = Grid2D::unit(9).unwrap();
        let p = problem(g, one(), state_u());
        assert!((eval_constraint(&p, &Field2D::constant(&g, 1.0).unwrap()).unwrap() - 1.0).abs() < 1e-13);
        assert_eq!(eval_constraint(&p, &Field2D::zeros(&g)).unwrap(), 0.0);
        let g2 = crate::fields::make_grid(0.0, 2.0, 0.0, 1.0, 9, 9).unwrap();
        let p = problem(g2, one(), one());
        assert!((eval_constraint(&p, &Field2D::zeros(&g2)).unwrap() - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn h_examples() {
        let g = Grid2D::unit(3).unwrap();
        let pt = Point::new(0.2, 0.3, 3.0, 2.0, 3.0);
        let p = problem(g, dirichlet(), state_u());
        assert_eq!(eval_h(&p, MultiplierPair::cost_only(), &pt), 13.0);
        assert_eq!(eval_h(&p, MultiplierPair::new(0.0, 2.0).unwrap(), &pt), 6.0);
        let f = FnIntegrand::new("v2", |p| p.v * p.v, |_| 0.0, |p| 2.0 * p.v, |_| 0.0);
        let gg = FnIntegrand::new("w2", |p| p.w * p.w, |_| 0.0, |_| 0.0, |p| 2.0 * p.w);
        let p = problem(g, f, gg);
        assert_eq!(eval_h(&p, MultiplierPair::normal(1.0), &pt), 13.0);
    }

    #[test]
    fn el_residual_examples() {
        let g = Grid2D::unit(9).unwrap();
        let p = IsoperimetricProblem::unconstrained(g, half(), dirichlet().shared());
        let u = Field2D::constant(&g, 2.5).unwrap();
        let r = el_residual(&p, &u, MultiplierPair::cost_only()).unwrap();
        assert!(r.values().iter().all(|&v| v == 0.0));

        let p = IsoperimetricProblem::unconstrained(g, half(), state_u().shared());
        let u = Field2D::sample(&g, |x, y| x * y + y).unwrap();
        let r = el_residual(&p, &u, MultiplierPair::cost_only()).unwrap();
        assert!(r.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn natural_bc_examples() {
        let g = Grid2D::unit(9).unwrap();
        let f = FnIntegrand::new("v2", |p| p.v * p.v, |_| 0.0, |p| 2.0 * p.v, |_| 0.0);
        let p = IsoperimetricProblem::unconstrained(g, half(), f.shared());
        let r = natural_bc_residuals(&p, &Field2D::constant(&g, 1.0).unwrap(), MultiplierPair::cost_only()).unwrap();
        assert_eq!(r.max_abs(), 0.0);

        let f = FnIntegrand::new("v-7", |p| p.v - 7.0, |_| 0.0, |_| 1.0, |_| 0.0);
        let p = IsoperimetricProblem::unconstrained(g, half(), f.shared());
        let u = Field2D::sample(&g, |x, y| (x + y).sin()).unwrap();
        let r = natural_bc_residuals(&p, &u, MultiplierPair::cost_only()).unwrap();
        assert!(r.at_x_a.iter().all(|&v| v == 1.0));
        assert_eq!(r.at_x_a.len(), 9);
    }

    #[test]
    fn gateaux_examples() {
        let g = Grid2D::unit(9).unwrap();
        let u = Field2D::sample(&g, |x, y| x * x + y).unwrap();
        let eta = Field2D::sample(&g, |x, y| (3.0 * x).sin() * y).unwrap();
        let p = problem(g, one(), state_u());
        let eps = default_gateaux_step(&u);
        assert_eq!(gateaux_derivative(&p, Functional::Cost, &u, &eta, eps).unwrap(), 0.0);
        let dg = gateaux_derivative(&p, Functional::Constraint, &u, &eta, eps).unwrap();
        let oracle = volume_integral(&eta, half());
        assert!((dg - oracle).abs() < 1e-9 * oracle.abs().max(1.0), "{dg} vs {oracle}");
        assert!(gateaux_derivative(&p, Functional::Cost, &u, &eta, 0.0).is_err());
    }

    #[test]
    fn residual_is_affine_in_multipliers() {
        let g = Grid2D::unit(11).unwrap();
        let p = IsoperimetricProblem::new(g, half(), dirichlet().shared(), state_u().shared(), 0.3).unwrap();
        let u = Field2D::sample(&g, |x, y| (x - y).cos() + x * y * y).unwrap();
        let r10 = el_residual(&p, &u, MultiplierPair::cost_only()).unwrap();
        let r01 = el_residual(&p, &u, MultiplierPair::constraint_only()).unwrap();
        let (l0, l) = (0.7, -2.3);
        let r = el_residual(&p, &u, MultiplierPair::new(l0, l).unwrap()).unwrap();
        for k in 0..r.values().len() {
            let combo = l0 * r10.values()[k] + l * r01.values()[k];
            assert!((r.values()[k] - combo).abs() < 1e-12 * (1.0 + combo.abs()));
        }
    }

    #[test]
    fn zero_integrand_short_circuits() {
        let g = Grid2D::unit(5).unwrap();
        let p = IsoperimetricProblem::unconstrained(g, half(), Arc::new(dirichlet()));
        assert!(p.g.is_zero());
        assert_eq!(eval_constraint(&p, &Field2D::constant(&g, 3.0).unwrap()).unwrap(), 0.0);
    }
}
