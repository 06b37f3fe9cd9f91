use crate::error::Result;
use crate::fields::{Axis, Field2D};
use crate::fracops::{partial_frac_transpose, QuadratureWeights};
use crate::variational::{Functional, Integrand, IsoperimetricProblem, NodalState, Point};

/// Exact gradient of the discretised J or G with respect to the nodal values of u:
///
/// ```text
/// α² [ W∘∂₃φ + Dₓᵀ (W∘∂₄φ) + Dᵧᵀ (W∘∂₅φ) ]
/// ```
///
/// where W holds the tensor quadrature weights and Dₓ, Dᵧ are the discrete
/// fractional partials.
pub fn discrete_gradient(p: &IsoperimetricProblem, which: Functional, u: &Field2D) -> Result<Field2D> {
    let state = NodalState::new(p, u)?;
    let weights = QuadratureWeights::new(&p.grid, p.order);
    discrete_gradient_at(p, which, &state, &weights)
}

pub(crate) fn discrete_gradient_at(
    p: &IsoperimetricProblem,
    which: Functional,
    state: &NodalState,
    weights: &QuadratureWeights,
) -> Result<Field2D> {
    let integrand = which.integrand(p);
    let g = p.grid;
    if integrand.is_zero() {
        return Ok(Field2D::zeros(&g));
    }
    let alpha2 = p.order.alpha().powi(2);
    let scaled = |part: fn(&dyn Integrand, &Point) -> f64| {
        state.assemble_indexed(|i, j, pt| alpha2 * weights.node(i, j) * part(integrand, pt))
    };
    let r3 = scaled(|f, pt| f.du(pt))?;
    let r4 = scaled(|f, pt| f.dv(pt))?;
    let r5 = scaled(|f, pt| f.dw(pt))?;
    r3.add(&partial_frac_transpose(&r4, Axis::X, p.order)?)?
        .add(&partial_frac_transpose(&r5, Axis::Y, p.order)?)
}
