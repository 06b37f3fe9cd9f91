//! Fractional volume and line integrals over the rectangle and its boundary.

use super::weights::{AxisWeights, QuadratureWeights};
use crate::fields::{Field2D, FractionalOrder};

/// α² ∬ f(x, y) (b − x)^(α−1) (d − y)^(α−1) dy dx by product integration.
pub fn volume_integral(f: &Field2D, order: FractionalOrder) -> f64 {
    let w = QuadratureWeights::new(f.grid(), order);
    let alpha = order.alpha();
    alpha * alpha * w.weighted_sum(f.values())
}

/// The two boundary parts of the fractional line integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegralParts {
    /// α ∫ₐᵇ [f(t, c) − f(t, d)] (b − t)^(α−1) dt
    pub horizontal: f64,
    /// α ∫꜀ᵈ [f(b, t) − f(a, t)] (d − t)^(α−1) dt
    pub vertical: f64,
}

impl LineIntegralParts {
    pub fn total(&self) -> f64 {
        self.horizontal + self.vertical
    }
}

pub fn line_integral_parts(f: &Field2D, order: FractionalOrder) -> LineIntegralParts {
    let g = f.grid();
    let alpha = order.alpha();
    let wx = AxisWeights::new(g.a(), g.b(), g.nx(), order);
    let wy = AxisWeights::new(g.c(), g.d(), g.ny(), order);
    let (nx, ny) = (g.nx(), g.ny());
    let bottom_minus_top: Vec<f64> = (0..nx).map(|i| f.get(i, 0) - f.get(i, ny - 1)).collect();
    let right_minus_left: Vec<f64> = (0..ny).map(|j| f.get(nx - 1, j) - f.get(0, j)).collect();
    LineIntegralParts {
        horizontal: alpha * wx.integrate(&bottom_minus_top),
        vertical: alpha * wy.integrate(&right_minus_left),
    }
}

/// Fractional line integral on ∂R.
pub fn line_integral(f: &Field2D, order: FractionalOrder) -> f64 {
    line_integral_parts(f, order).total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_grid, Grid2D};

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn volume_of_one() {
        let g = Grid2D::unit(9).unwrap();
        let one = Field2D::constant(&g, 1.0).unwrap();
        assert!((volume_integral(&one, order(0.5)) - 1.0).abs() < 1e-13);
        let g = make_grid(0.0, 2.0, 0.0, 1.0, 17, 9).unwrap();
        let one = Field2D::constant(&g, 1.0).unwrap();
        assert!((volume_integral(&one, order(0.5)) - 2f64.sqrt()).abs() < 1e-13);
        assert_eq!(volume_integral(&Field2D::zeros(&g), order(0.3)), 0.0);
    }

    #[test]
    fn line_integral_closed_forms() {
        let g = Grid2D::unit(11).unwrap();
        let a = order(0.5);
        let one = Field2D::constant(&g, 1.0).unwrap();
        assert_eq!(line_integral(&one, a), 0.0);
        let y = Field2D::sample(&g, |_, y| y).unwrap();
        assert!((line_integral(&y, a) + 1.0).abs() < 1e-13);
        let x = Field2D::sample(&g, |x, _| x).unwrap();
        assert!((line_integral(&x, a) - 1.0).abs() < 1e-13);
    }
}
