//! Uniform tensor grids on a rectangle, sampled fields and the ‖·‖₁,∞ norm.
//!
//! Fields are immutable once built; every operation returns a new field.
//! Storage is x-major with y varying fastest, so the value at node `(i, j)`
//! sits at `i * ny + j`.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};

/// Order α ∈ (0, 1) shared by every fractional operator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(FracError::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = FracError;
    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(order: FractionalOrder) -> f64 {
        order.0
    }
}

/// Coordinate axis of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    nx: usize,
    ny: usize,
}

/// Uniform tensor grid on R = [a, b] × [c, d].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid2D {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
}

impl TryFrom<GridRepr> for Grid2D {
    type Error = FracError;
    fn try_from(r: GridRepr) -> Result<Self> {
        make_grid(r.a, r.b, r.c, r.d, r.nx, r.ny)
    }
}

impl From<Grid2D> for GridRepr {
    fn from(g: Grid2D) -> Self {
        GridRepr {
            a: g.a,
            b: g.b,
            c: g.c,
            d: g.d,
            nx: g.nx,
            ny: g.ny,
        }
    }
}

fn check_interval(lo: f64, hi: f64, lo_name: &'static str, hi_name: &'static str) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(FracError::DomainOrder {
            lo_name,
            hi_name,
            lo,
            hi,
        })
    }
}

/// Builds the uniform grid with `nx × ny` nodes on `[a, b] × [c, d]`.
pub fn make_grid(a: f64, b: f64, c: f64, d: f64, nx: usize, ny: usize) -> Result<Grid2D> {
    check_interval(a, b, "a", "b")?;
    check_interval(c, d, "c", "d")?;
    for n in [nx, ny] {
        if n < 2 {
            return Err(FracError::TooFewNodes(n));
        }
    }
    Ok(Grid2D {
        a,
        b,
        c,
        d,
        nx,
        ny,
        hx: (b - a) / (nx - 1) as f64,
        hy: (d - c) / (ny - 1) as f64,
    })
}

impl Grid2D {
    pub fn new(a: f64, b: f64, c: f64, d: f64, nx: usize, ny: usize) -> Result<Self> {
        make_grid(a, b, c, d, nx, ny)
    }

    /// The unit square with `n × n` nodes.
    pub fn unit(n: usize) -> Result<Self> {
        make_grid(0.0, 1.0, 0.0, 1.0, n, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn hx(&self) -> f64 {
        self.hx
    }
    pub fn hy(&self) -> f64 {
        self.hy
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.a + i as f64 * self.hx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.c + j as f64 * self.hy
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x(i), self.y(j))
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    /// Nearest node indices to an arbitrary point, clamped to the grid.
    pub fn nearest(&self, x: f64, y: f64) -> (usize, usize) {
        let clamp = |t: f64, n: usize| -> usize {
            if t.is_nan() || t <= 0.0 {
                0
            } else {
                (t.round() as usize).min(n - 1)
            }
        };
        (
            clamp((x - self.a) / self.hx, self.nx),
            clamp((y - self.c) / self.hy, self.ny),
        )
    }

    /// The one-dimensional node set along `axis`: (lower bound, upper bound, count).
    pub fn axis(&self, axis: Axis) -> (f64, f64, usize) {
        match axis {
            Axis::X => (self.a, self.b, self.nx),
            Axis::Y => (self.c, self.d, self.ny),
        }
    }
}

/// Samples of a continuous function at the nodes of an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    a: f64,
    b: f64,
    h: f64,
    values: Vec<f64>,
}

impl Field1D {
    pub fn new(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        check_interval(a, b, "a", "b")?;
        let n = values.len();
        if n < 2 {
            return Err(FracError::TooFewNodes(n));
        }
        if let Some((i, &v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(FracError::NonFinite { node: (i, 0), value: v });
        }
        Ok(Self {
            a,
            b,
            h: (b - a) / (n - 1) as f64,
            values,
        })
    }

    pub fn sample(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_interval(a, b, "a", "b")?;
        if n < 2 {
            return Err(FracError::TooFewNodes(n));
        }
        let h = (b - a) / (n - 1) as f64;
        Self::new(a, b, (0..n).map(|i| f(a + i as f64 * h)).collect())
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        Self { values, ..*self }
    }

    /// CSV with header `x,value`, one row per node.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "value"]).expect("in-memory write");
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([fmt_float(self.x(i)), fmt_float(*v)])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}

/// Samples of a continuous function at the nodes of a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    grid: Grid2D,
    values: Vec<f64>,
}

/// Samples `f` at every node of `grid`.
pub fn sample(f: impl Fn(f64, f64) -> f64, grid: &Grid2D) -> Result<Field2D> {
    Field2D::sample(grid, f)
}

impl Field2D {
    pub fn new(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(FracError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some((k, &v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(FracError::NonFinite {
                node: (k / grid.ny, k % grid.ny),
                value: v,
            });
        }
        Ok(Self { grid, values })
    }

    pub fn sample(grid: &Grid2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nx {
            let x = grid.x(i);
            for j in 0..grid.ny {
                values.push(f(x, grid.y(j)));
            }
        }
        Self::new(*grid, values)
    }

    pub fn constant(grid: &Grid2D, value: f64) -> Result<Self> {
        Self::new(*grid, vec![value; grid.len()])
    }

    pub fn zeros(grid: &Grid2D) -> Self {
        Self {
            grid: *grid,
            values: vec![0.0; grid.len()],
        }
    }

    /// Construction for values already known to be finite and correctly sized.
    pub(crate) fn from_raw(grid: Grid2D, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Values along the grid line `y = y_j` (varying x).
    pub fn row_x(&self, j: usize) -> Vec<f64> {
        (0..self.grid.nx).map(|i| self.get(i, j)).collect()
    }

    /// Values along the grid line `x = x_i` (varying y).
    pub fn column_y(&self, i: usize) -> &[f64] {
        let ny = self.grid.ny;
        &self.values[i * ny..(i + 1) * ny]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn ensure_same_grid(&self, other: &Field2D) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(FracError::GridMismatch)
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Field2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.ensure_same_grid(other)?;
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn add(&self, other: &Field2D) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field2D) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Field2D) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Result<Self> {
        self.map(|v| s * v)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Field2D) -> Result<Self> {
        self.zip_with(other, |a, b| a + s * b)
    }

    /// Copy with the boundary nodes replaced by those of `boundary`.
    pub fn with_boundary_of(&self, boundary: &Field2D) -> Result<Self> {
        self.ensure_same_grid(boundary)?;
        let g = self.grid;
        let mut values = self.values.clone();
        for i in 0..g.nx {
            for j in 0..g.ny {
                if g.is_boundary(i, j) {
                    values[g.index(i, j)] = boundary.get(i, j);
                }
            }
        }
        Ok(Self::from_raw(g, values))
    }

    /// CSV with header `x,y,value`, x-major with y varying fastest.
    pub fn to_csv(&self) -> String {
        let g = &self.grid;
        let mut w = csv::Writer::from_writer(Vec::with_capacity(g.len() * 72));
        w.write_record(["x", "y", "value"]).expect("in-memory write");
        for i in 0..g.nx {
            let x = fmt_float(g.x(i));
            for j in 0..g.ny {
                w.write_record([x.as_str(), &fmt_float(g.y(j)), &fmt_float(self.get(i, j))])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Reads the CSV layout written by [`Field2D::to_csv`], recovering the grid
    /// from the node coordinates.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let headers = r.headers().map_err(|e| FracError::Format(e.to_string()))?;
        if headers.iter().map(str::trim).collect::<Vec<_>>() != ["x", "y", "value"] {
            return Err(FracError::Format("expected header `x,y,value`".into()));
        }
        let mut rows: Vec<[f64; 3]> = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| FracError::Format(e.to_string()))?;
            if rec.len() != 3 {
                return Err(FracError::Format(format!("row with {} columns", rec.len())));
            }
            let mut row = [0.0; 3];
            for (slot, cell) in row.iter_mut().zip(rec.iter()) {
                *slot = cell
                    .trim()
                    .parse()
                    .map_err(|_| FracError::Format(format!("not a number: `{cell}`")))?;
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(FracError::Format("no data rows".into()));
        }
        let ny = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
        if ny < 2 || !rows.len().is_multiple_of(ny) {
            return Err(FracError::Format("rows do not form a tensor grid".into()));
        }
        let nx = rows.len() / ny;
        let grid = make_grid(rows[0][0], rows[rows.len() - 1][0], rows[0][1], rows[ny - 1][1], nx, ny)?;
        let tol_x = 1e-9 * (grid.b - grid.a).abs().max(grid.a.abs()).max(grid.b.abs());
        let tol_y = 1e-9 * (grid.d - grid.c).abs().max(grid.c.abs()).max(grid.d.abs());
        for (k, row) in rows.iter().enumerate() {
            let (x, y) = grid.node(k / ny, k % ny);
            if (row[0] - x).abs() > tol_x || (row[1] - y).abs() > tol_y {
                return Err(FracError::Format(format!(
                    "row {} at ({}, {}) is not grid node ({x}, {y})",
                    k + 2,
                    row[0],
                    row[1]
                )));
            }
        }
        Self::new(grid, rows.into_iter().map(|r| r[2]).collect())
    }

    /// JSON `{"grid":{"a","b","c","d","nx","ny"},"values":[...]}` with a flat row-major array.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&FieldRepr {
            grid: self.grid,
            values: self.values.clone(),
        })
        .expect("finite floats serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: FieldRepr =
            serde_json::from_str(text).map_err(|e| FracError::Format(e.to_string()))?;
        Self::new(repr.grid, repr.values)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldRepr {
    grid: Grid2D,
    values: Vec<f64>,
}

/// Fixed 17-significant-digit scientific formatting used by every text output.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// max|u| + max|∂ₓ^α u| + max|∂ᵧ^α u| over the grid nodes.
///
/// `dux` and `duy` are the fractional partials of `u`; the grid maximum stands
/// in for the supremum over the rectangle.
pub fn norm_1_inf(u: &Field2D, dux: &Field2D, duy: &Field2D) -> Result<f64> {
    u.ensure_same_grid(dux)?;
    u.ensure_same_grid(duy)?;
    Ok(u.max_abs() + dux.max_abs() + duy.max_abs())
}
