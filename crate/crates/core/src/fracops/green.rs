//! Defect of the fractional Green formula on a grid.

use serde::Serialize;

use super::derivative::partial_frac;
use super::integrals::line_integral_parts;
use super::weights::QuadratureWeights;
use crate::error::Result;
use crate::fields::{Axis, Field2D, FractionalOrder};
use crate::special::factorial;

/// The three members of the identity
///
/// ```text
/// ∬ [h Dₓη − k Dᵧη] W = −∬ [Dₓh − Dᵧk] η W + α! [I¹(hη) + I²(kη)]
/// ```
///
/// with W = (b − x)^(α−1) (d − y)^(α−1) and `residual = lhs − rhs_volume − rhs_boundary`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenReport {
    pub lhs: f64,
    pub rhs_volume: f64,
    pub rhs_boundary: f64,
    pub residual: f64,
}

pub fn green_residual(h: &Field2D, k: &Field2D, eta: &Field2D, order: FractionalOrder) -> Result<GreenReport> {
    h.ensure_same_grid(k)?;
    h.ensure_same_grid(eta)?;
    let w = QuadratureWeights::new(h.grid(), order);

    let deta_x = partial_frac(eta, Axis::X, order)?;
    let deta_y = partial_frac(eta, Axis::Y, order)?;
    let lhs_integrand: Vec<f64> = (0..h.values().len())
        .map(|n| h.values()[n] * deta_x.values()[n] - k.values()[n] * deta_y.values()[n])
        .collect();
    let lhs = w.weighted_sum(&lhs_integrand);

    let dh_x = partial_frac(h, Axis::X, order)?;
    let dk_y = partial_frac(k, Axis::Y, order)?;
    let vol_integrand: Vec<f64> = (0..h.values().len())
        .map(|n| (dh_x.values()[n] - dk_y.values()[n]) * eta.values()[n])
        .collect();
    let rhs_volume = -w.weighted_sum(&vol_integrand);

    // I¹ only reads the horizontal edges and I² only the vertical ones.
    let h_eta = h.mul(eta)?;
    let k_eta = k.mul(eta)?;
    let i1 = line_integral_parts(&h_eta, order).horizontal;
    let i2 = line_integral_parts(&k_eta, order).vertical;
    let rhs_boundary = factorial(order.alpha()) * (i1 + i2);

    Ok(GreenReport {
        lhs,
        rhs_volume,
        rhs_boundary,
        residual: lhs - rhs_volume - rhs_boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid2D;

    #[test]
    fn constants_give_zero_everywhere() {
        let g = Grid2D::unit(9).unwrap();
        let one = Field2D::constant(&g, 1.0).unwrap();
        let r = green_residual(&one, &one, &one, FractionalOrder::new(0.5).unwrap()).unwrap();
        assert_eq!(r, GreenReport { lhs: 0.0, rhs_volume: 0.0, rhs_boundary: 0.0, residual: 0.0 });
    }

    #[test]
    fn vanishing_eta_kills_the_boundary_term() {
        let g = Grid2D::unit(17).unwrap();
        let h = Field2D::sample(&g, |x, y| 1.0 + x * y).unwrap();
        let k = Field2D::sample(&g, |x, _| x.exp()).unwrap();
        let eta = Field2D::sample(&g, |x, y| x * (1.0 - x) * y * (1.0 - y)).unwrap();
        let r = green_residual(&h, &k, &eta, FractionalOrder::new(0.3).unwrap()).unwrap();
        assert_eq!(r.rhs_boundary, 0.0);
    }
}
