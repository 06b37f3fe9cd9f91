//! L1-type discretisation of the Jumarie derivative.
//!
//! On a uniform line with spacing h the derivative of the piecewise-linear
//! reconstruction of f(t) − f(a) is, in closed form,
//!
//! ```text
//! D[j] = h^(−α)/Γ(2−α) · Σ_{k<j} b[j−1−k] (f[k+1] − f[k]),   b[m] = (m+1)^(1−α) − m^(1−α)
//! ```
//!
//! with D[0] = 0. The map is linear in the nodal values; its transpose is
//! provided for exact gradients of discretised functionals.

use rayon::prelude::*;

use crate::error::{FracError, Result};
use crate::fields::{Axis, Field1D, Field2D, FractionalOrder};
use crate::special::gamma;

/// The discrete derivative operator for one line of `n` nodes.
#[derive(Debug, Clone)]
pub struct L1Operator {
    coef: f64,
    b: Vec<f64>,
}

impl L1Operator {
    pub fn new(h: f64, n: usize, order: FractionalOrder) -> Self {
        let alpha = order.alpha();
        let p = 1.0 - alpha;
        let b = (0..n.saturating_sub(1))
            .map(|m| ((m + 1) as f64).powf(p) - (m as f64).powf(p))
            .collect();
        Self {
            coef: h.powf(-alpha) / gamma(2.0 - alpha),
            b,
        }
    }

    pub fn len(&self) -> usize {
        self.b.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// out = D f.
    pub fn apply(&self, f: &[f64], out: &mut [f64]) {
        let n = self.len();
        debug_assert!(f.len() == n && out.len() == n);
        out[0] = 0.0;
        let incr: Vec<f64> = f.windows(2).map(|w| w[1] - w[0]).collect();
        for j in 1..n {
            let mut s = 0.0;
            for k in 0..j {
                s += self.b[j - 1 - k] * incr[k];
            }
            out[j] = self.coef * s;
        }
    }

    /// out = Dᵀ r.
    pub fn apply_transpose(&self, r: &[f64], out: &mut [f64]) {
        let n = self.len();
        debug_assert!(r.len() == n && out.len() == n);
        // s[k] = coef · Σ_{j>k} b[j−1−k] r[j] is the adjoint on increments.
        let mut s = vec![0.0; n - 1];
        for (k, sk) in s.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in k + 1..n {
                acc += self.b[j - 1 - k] * r[j];
            }
            *sk = self.coef * acc;
        }
        out[0] = -s[0];
        for k in 1..n - 1 {
            out[k] = s[k - 1] - s[k];
        }
        out[n - 1] = s[n - 2];
    }
}

/// Jumarie derivative of a sampled function on its own node set.
pub fn jumarie_derivative(f: &Field1D, order: FractionalOrder) -> Result<Field1D> {
    let n = f.len();
    if n < 2 {
        return Err(FracError::TooFewNodes(n));
    }
    let op = L1Operator::new(f.h(), n, order);
    let mut out = vec![0.0; n];
    op.apply(f.values(), &mut out);
    Ok(f.with_values(out))
}

fn along_axis(u: &Field2D, axis: Axis, order: FractionalOrder, transpose: bool) -> Field2D {
    let g = *u.grid();
    let (h, n) = match axis {
        Axis::X => (g.hx(), g.nx()),
        Axis::Y => (g.hy(), g.ny()),
    };
    let op = L1Operator::new(h, n, order);
    let run = |line: &[f64], out: &mut [f64]| {
        if transpose {
            op.apply_transpose(line, out)
        } else {
            op.apply(line, out)
        }
    };
    let mut values = vec![0.0; g.len()];
    match axis {
        Axis::Y => {
            values
                .par_chunks_mut(g.ny())
                .enumerate()
                .for_each(|(i, out)| run(u.column_y(i), out));
        }
        Axis::X => {
            let lines: Vec<Vec<f64>> = (0..g.ny())
                .into_par_iter()
                .map(|j| {
                    let mut out = vec![0.0; g.nx()];
                    run(&u.row_x(j), &mut out);
                    out
                })
                .collect();
            for (j, line) in lines.iter().enumerate() {
                for (i, v) in line.iter().enumerate() {
                    values[g.index(i, j)] = *v;
                }
            }
        }
    }
    Field2D::from_raw(g, values)
}

/// Fractional partial derivative along `axis` with lower limit a (X) or c (Y).
pub fn partial_frac(u: &Field2D, axis: Axis, order: FractionalOrder) -> Result<Field2D> {
    let out = along_axis(u, axis, order, false);
    // overflow is the only way to leave the finite set from finite input
    Field2D::new(*out.grid(), out.into_values())
}

/// Transpose of [`partial_frac`] as a linear map on nodal values.
pub fn partial_frac_transpose(r: &Field2D, axis: Axis, order: FractionalOrder) -> Result<Field2D> {
    let out = along_axis(r, axis, order, true);
    Field2D::new(*out.grid(), out.into_values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid2D;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn constants_are_annihilated_exactly() {
        let f = Field1D::sample(0.0, 1.0, 17, |_| 4.25).unwrap();
        let d = jumarie_derivative(&f, order(0.3)).unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
        let g = Grid2D::unit(9).unwrap();
        let u = Field2D::constant(&g, 5.0).unwrap();
        for axis in [Axis::X, Axis::Y] {
            assert!(partial_frac(&u, axis, order(0.4)).unwrap().values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn lower_limit_value_is_zero() {
        let f = Field1D::sample(0.0, 1.0, 5, |x| x.sin() + 2.0).unwrap();
        assert_eq!(jumarie_derivative(&f, order(0.7)).unwrap().values()[0], 0.0);
    }

    #[test]
    fn matches_spelled_out_formula() {
        // direct use of node coordinates rather than integer offsets
        let (a, b, n, alpha) = (0.5, 2.0, 11, 0.35);
        let f = Field1D::sample(a, b, n, |x| (3.0 * x).cos() + x * x).unwrap();
        let d = jumarie_derivative(&f, order(alpha)).unwrap();
        let h = f.h();
        for j in 0..n {
            let xj = f.x(j);
            let mut s = 0.0;
            for k in 0..j {
                let slope = (f.values()[k + 1] - f.values()[k]) / h;
                s += slope * ((xj - f.x(k)).powf(1.0 - alpha) - (xj - f.x(k + 1)).abs().powf(1.0 - alpha));
            }
            let expect = s / gamma(2.0 - alpha);
            assert!((d.values()[j] - expect).abs() < 1e-12 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn single_panel_line() {
        let f = Field1D::new(0.0, 2.0, vec![1.0, 3.0]).unwrap();
        let d = jumarie_derivative(&f, order(0.5)).unwrap();
        // slope 1 over one panel: (2)^(0.5) / Γ(1.5)
        let expect = 2f64.sqrt() / gamma(1.5);
        assert!((d.values()[1] - expect).abs() < 1e-14);
    }

    #[test]
    fn transpose_is_adjoint() {
        let op = L1Operator::new(0.1, 12, order(0.6));
        let f: Vec<f64> = (0..12).map(|i| ((i * 7 % 5) as f64) - 1.5).collect();
        let r: Vec<f64> = (0..12).map(|i| ((i * 3 % 7) as f64) * 0.25).collect();
        let mut df = vec![0.0; 12];
        let mut dtr = vec![0.0; 12];
        op.apply(&f, &mut df);
        op.apply_transpose(&r, &mut dtr);
        let lhs: f64 = df.iter().zip(&r).map(|(a, b)| a * b).sum();
        let rhs: f64 = f.iter().zip(&dtr).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn partial_is_blind_to_the_other_axis() {
        let g = Grid2D::unit(7).unwrap();
        let u = Field2D::sample(&g, |x, _| x).unwrap();
        assert!(partial_frac(&u, Axis::Y, order(0.5)).unwrap().values().iter().all(|&v| v == 0.0));
    }
}
