//! Numerical toolkit for the modified Riemann–Liouville (Jumarie) fractional
//! calculus on rectangles and for fractional isoperimetric problems with
//! double-integral costs.
//!
//! - [`fields`]: grids, sampled fields, the ‖·‖₁,∞ norm, CSV/JSON layouts
//! - [`fracops`]: fractional derivatives, partials, volume and line integrals
//! - [`variational`]: J, G, H, Euler–Lagrange and natural-boundary residuals
//! - [`solver`]: augmented-Lagrangian / L-BFGS solves with exact adjoints
//! - [`catalog`]: named integrands, problem presets and Green test cases

pub mod catalog;
pub mod error;
pub mod fields;
pub mod fracops;
pub mod solver;
pub mod special;
pub mod variational;

pub use error::{FracError, Result};
pub use fields::{make_grid, norm_1_inf, sample, Axis, Field1D, Field2D, FractionalOrder, Grid2D};
