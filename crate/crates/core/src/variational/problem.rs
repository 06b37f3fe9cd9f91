use std::sync::Arc;

use serde::Serialize;

use super::integrand::LagrangianSpec;
use crate::error::{FracError, Result};
use crate::fields::{Field2D, FractionalOrder, Grid2D};

/// Nonzero pair (λ₀, λ) weighting the cost and the constraint in H = λ₀ f + λ g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplierPair {
    pub lambda0: f64,
    pub lambda: f64,
}

impl MultiplierPair {
    pub fn new(lambda0: f64, lambda: f64) -> Result<Self> {
        if !(lambda0.is_finite() && lambda.is_finite()) {
            return Err(FracError::InvalidProblem("multipliers must be finite".into()));
        }
        if lambda0 == 0.0 && lambda == 0.0 {
            return Err(FracError::InvalidProblem("multiplier pair (0, 0) is excluded".into()));
        }
        Ok(Self { lambda0, lambda })
    }

    /// (1, λ).
    pub fn normal(lambda: f64) -> Self {
        Self { lambda0: 1.0, lambda }
    }

    /// (1, 0): H reduces to f.
    pub fn cost_only() -> Self {
        Self::normal(0.0)
    }

    /// (0, 1): H reduces to g.
    pub fn constraint_only() -> Self {
        Self { lambda0: 0.0, lambda: 1.0 }
    }
}

/// Prescribed values on the four edges of the grid, corners shared.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    grid: Grid2D,
    at_x_a: Vec<f64>,
    at_x_b: Vec<f64>,
    at_y_c: Vec<f64>,
    at_y_d: Vec<f64>,
}

impl BoundaryTrace {
    /// Boundary values of `field`; interior values are ignored.
    pub fn from_field(field: &Field2D) -> Self {
        let g = *field.grid();
        let (nx, ny) = (g.nx(), g.ny());
        Self {
            grid: g,
            at_x_a: (0..ny).map(|j| field.get(0, j)).collect(),
            at_x_b: (0..ny).map(|j| field.get(nx - 1, j)).collect(),
            at_y_c: (0..nx).map(|i| field.get(i, 0)).collect(),
            at_y_d: (0..nx).map(|i| field.get(i, ny - 1)).collect(),
        }
    }

    pub fn from_fn(grid: &Grid2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        Ok(Self::from_field(&Field2D::sample(grid, f)?))
    }

    /// Builds a trace from explicit edge arrays; shared corners must agree.
    pub fn from_edges(
        grid: &Grid2D,
        at_x_a: Vec<f64>,
        at_x_b: Vec<f64>,
        at_y_c: Vec<f64>,
        at_y_d: Vec<f64>,
    ) -> Result<Self> {
        let (nx, ny) = (grid.nx(), grid.ny());
        for (edge, n) in [(&at_x_a, ny), (&at_x_b, ny), (&at_y_c, nx), (&at_y_d, nx)] {
            if edge.len() != n {
                return Err(FracError::LengthMismatch { expected: n, got: edge.len() });
            }
            if edge.iter().any(|v| !v.is_finite()) {
                return Err(FracError::InvalidProblem("boundary trace has non-finite values".into()));
            }
        }
        let corners = [
            (at_x_a[0], at_y_c[0]),
            (at_x_a[ny - 1], at_y_d[0]),
            (at_x_b[0], at_y_c[nx - 1]),
            (at_x_b[ny - 1], at_y_d[nx - 1]),
        ];
        if corners.iter().any(|(p, q)| p != q) {
            return Err(FracError::InvalidProblem("boundary trace disagrees at a corner".into()));
        }
        Ok(Self { grid: *grid, at_x_a, at_x_b, at_y_c, at_y_d })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// ψ at a boundary node; `None` for interior nodes.
    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        if i == 0 {
            Some(self.at_x_a[j])
        } else if i == nx - 1 {
            Some(self.at_x_b[j])
        } else if j == 0 {
            Some(self.at_y_c[i])
        } else if j == ny - 1 {
            Some(self.at_y_d[i])
        } else {
            None
        }
    }

    /// Bilinearly blended (Coons) interpolant of the trace; equals ψ on the
    /// boundary and is exact for bilinear functions.
    pub fn interpolant(&self) -> Field2D {
        let g = self.grid;
        let (nx, ny) = (g.nx(), g.ny());
        let mut values = vec![0.0; g.len()];
        let p00 = self.at_x_a[0];
        let p01 = self.at_x_a[ny - 1];
        let p10 = self.at_x_b[0];
        let p11 = self.at_x_b[ny - 1];
        for i in 0..nx {
            let s = i as f64 / (nx - 1) as f64;
            for j in 0..ny {
                let t = j as f64 / (ny - 1) as f64;
                let v = if let Some(b) = self.value(i, j) {
                    b
                } else {
                    (1.0 - s) * self.at_x_a[j] + s * self.at_x_b[j] + (1.0 - t) * self.at_y_c[i]
                        + t * self.at_y_d[i]
                        - ((1.0 - s) * (1.0 - t) * p00 + (1.0 - s) * t * p01 + s * (1.0 - t) * p10 + s * t * p11)
                };
                values[g.index(i, j)] = v;
            }
        }
        Field2D::from_raw(g, values)
    }

    /// Copy of `u` with its boundary nodes overwritten by ψ.
    pub fn impose(&self, u: &Field2D) -> Result<Field2D> {
        if *u.grid() != self.grid {
            return Err(FracError::GridMismatch);
        }
        let g = self.grid;
        let mut values = u.values().to_vec();
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                if let Some(b) = self.value(i, j) {
                    values[g.index(i, j)] = b;
                }
            }
        }
        Ok(Field2D::from_raw(g, values))
    }
}

/// Minimise J[u] = α² ∬ f(x, y, u, Dₓu, Dᵧu) W subject to α² ∬ g(…) W = K and,
/// when `psi` is present, u = ψ on ∂R.
#[derive(Debug, Clone)]
pub struct IsoperimetricProblem {
    pub grid: Grid2D,
    pub order: FractionalOrder,
    pub f: LagrangianSpec,
    pub g: LagrangianSpec,
    pub level: f64,
    pub constraint_active: bool,
    pub psi: Option<BoundaryTrace>,
}

/// The integrand g ≡ 0.
pub fn zero_integrand() -> LagrangianSpec {
    struct Zero;
    impl super::Integrand for Zero {
        fn name(&self) -> &str {
            "zero"
        }
        fn value(&self, _: &super::Point) -> f64 {
            0.0
        }
        fn du(&self, _: &super::Point) -> f64 {
            0.0
        }
        fn dv(&self, _: &super::Point) -> f64 {
            0.0
        }
        fn dw(&self, _: &super::Point) -> f64 {
            0.0
        }
        fn is_zero(&self) -> bool {
            true
        }
    }
    Arc::new(Zero)
}

impl IsoperimetricProblem {
    pub fn new(
        grid: Grid2D,
        order: FractionalOrder,
        f: LagrangianSpec,
        g: LagrangianSpec,
        level: f64,
    ) -> Result<Self> {
        if !level.is_finite() {
            return Err(FracError::InvalidProblem(format!("constraint level K = {level} is not finite")));
        }
        Ok(Self {
            grid,
            order,
            f,
            g,
            level,
            constraint_active: true,
            psi: None,
        })
    }

    /// Problem with the constraint switched off (g ≡ 0, K = 0, λ pinned to 0).
    pub fn unconstrained(grid: Grid2D, order: FractionalOrder, f: LagrangianSpec) -> Self {
        Self {
            grid,
            order,
            f,
            g: zero_integrand(),
            level: 0.0,
            constraint_active: false,
            psi: None,
        }
    }

    pub fn with_boundary(mut self, psi: BoundaryTrace) -> Result<Self> {
        if *psi.grid() != self.grid {
            return Err(FracError::InvalidProblem("boundary trace lives on a different grid".into()));
        }
        self.psi = Some(psi);
        Ok(self)
    }

    pub fn without_boundary(mut self) -> Self {
        self.psi = None;
        self
    }

    pub fn ensure_on_grid(&self, u: &Field2D) -> Result<()> {
        if *u.grid() == self.grid {
            Ok(())
        } else {
            Err(FracError::GridMismatch)
        }
    }
}

/// ∂₄H{u} on the x-edges and ∂₅H{u} on the y-edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeResiduals {
    pub at_x_a: Vec<f64>,
    pub at_x_b: Vec<f64>,
    pub at_y_c: Vec<f64>,
    pub at_y_d: Vec<f64>,
}

impl EdgeResiduals {
    pub fn max_abs(&self) -> f64 {
        [&self.at_x_a, &self.at_x_b, &self.at_y_c, &self.at_y_d]
            .iter()
            .flat_map(|e| e.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_pair_excludes_origin() {
        assert!(MultiplierPair::new(0.0, 0.0).is_err());
        assert!(MultiplierPair::new(0.0, 2.0).is_ok());
    }

    #[test]
    fn interpolant_reproduces_bilinear_data() {
        let g = Grid2D::unit(6).unwrap();
        let psi = BoundaryTrace::from_fn(&g, |x, y| 1.0 + 2.0 * x - y + 3.0 * x * y).unwrap();
        let exact = Field2D::sample(&g, |x, y| 1.0 + 2.0 * x - y + 3.0 * x * y).unwrap();
        let interp = psi.interpolant();
        for (a, b) in interp.values().iter().zip(exact.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn edges_must_agree_at_corners() {
        let g = Grid2D::unit(3).unwrap();
        let z = vec![0.0; 3];
        assert!(BoundaryTrace::from_edges(&g, z.clone(), z.clone(), z.clone(), z.clone()).is_ok());
        assert!(BoundaryTrace::from_edges(&g, vec![1.0, 0.0, 0.0], z.clone(), z.clone(), z.clone()).is_err());
        assert!(BoundaryTrace::from_edges(&g, vec![0.0; 2], z.clone(), z.clone(), z).is_err());
    }

    #[test]
    fn non_finite_level_rejected() {
        let g = Grid2D::unit(3).unwrap();
        let a = FractionalOrder::new(0.5).unwrap();
        assert!(IsoperimetricProblem::new(g, a, zero_integrand(), zero_integrand(), f64::INFINITY).is_err());
    }
}
