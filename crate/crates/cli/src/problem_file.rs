//! Problem descriptions read from `--spec` JSON files:
//!
//! ```json
//! {"f": "dirichlet-quadratic", "g": "linear-g", "K": 0.4, "psi": {"grid": {...}, "values": [...]}, "target": "x*y"}
//! ```
//!
//! `f` and `g` are catalog integrand names. Omitting `g` gives an
//! unconstrained problem (and `K` must then be omitted too). `psi` is a field
//! in the JSON field layout; without it the boundary is free. `target` is the
//! expression used by the `manufactured` integrand.

use std::path::Path;

use fracvar_core::catalog::{Catalog, IntegrandContext};
use fracvar_core::variational::{BoundaryTrace, IsoperimetricProblem};
use fracvar_core::{Field2D, FractionalOrder, Grid2D};
use serde::Deserialize;

use crate::expr::Expr;
use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    f: String,
    g: Option<String>,
    #[serde(rename = "K")]
    level: Option<f64>,
    psi: Option<serde_json::Value>,
    target: Option<String>,
}

#[derive(Debug)]
pub struct ProblemFile {
    f: String,
    g: Option<(String, f64)>,
    pub psi: Option<Field2D>,
    target: Option<Expr>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read spec {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("spec {}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: Raw = serde_json::from_str(text).map_err(|e| CliError::Validation(e.to_string()))?;
        let g = match (raw.g, raw.level) {
            (Some(g), Some(k)) => Some((g, k)),
            (None, None) => None,
            (Some(_), None) => return Err(CliError::Validation("\"g\" given without \"K\"".into())),
            (None, Some(_)) => return Err(CliError::Validation("\"K\" given without \"g\"".into())),
        };
        let psi = raw
            .psi
            .map(|v| Field2D::from_json(&v.to_string()))
            .transpose()
            .map_err(|e| CliError::Validation(format!("psi: {e}")))?;
        let target = raw
            .target
            .map(|t| Expr::parse(&t))
            .transpose()
            .map_err(|e| CliError::Validation(format!("target: {e}")))?;
        Ok(Self { f: raw.f, g, psi, target })
    }

    pub fn build(&self, catalog: &Catalog, grid: &Grid2D, order: FractionalOrder) -> Result<IsoperimetricProblem, CliError> {
        let target = self
            .target
            .as_ref()
            .map(|t| Field2D::sample(grid, |x, y| t.eval(x, y)))
            .transpose()?;
        let ctx = IntegrandContext {
            grid,
            order,
            target: target.as_ref(),
        };
        let f = catalog.integrand(&self.f, &ctx)?;
        let p = match &self.g {
            Some((g, k)) => IsoperimetricProblem::new(*grid, order, f, catalog.integrand(g, &ctx)?, *k)?,
            None => IsoperimetricProblem::unconstrained(*grid, order, f),
        };
        Ok(match &self.psi {
            Some(psi) => p.with_boundary(BoundaryTrace::from_field(psi))?,
            None => p,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_pairs_and_keys() {
        assert!(ProblemFile::parse(r#"{"f":"zero"}"#).is_ok());
        assert!(ProblemFile::parse(r#"{"f":"zero","g":"linear-g"}"#).is_err());
        assert!(ProblemFile::parse(r#"{"f":"zero","K":1}"#).is_err());
        assert!(ProblemFile::parse(r#"{"f":"zero","extra":1}"#).is_err());
        assert!(ProblemFile::parse(r#"{"f":"zero","target":"x +"}"#).is_err());
    }

    #[test]
    fn builds_manufactured_from_target() {
        let grid = Grid2D::unit(5).unwrap();
        let order = FractionalOrder::new(0.5).unwrap();
        let cat = Catalog::builtin();
        let spec = ProblemFile::parse(r#"{"f":"manufactured","g":"linear-g","K":0.1,"target":"x*y"}"#).unwrap();
        let p = spec.build(&cat, &grid, order).unwrap();
        assert!(p.psi.is_none() && p.constraint_active);
        let spec = ProblemFile::parse(r#"{"f":"manufactured"}"#).unwrap();
        assert!(spec.build(&cat, &grid, order).is_err());
    }
}
