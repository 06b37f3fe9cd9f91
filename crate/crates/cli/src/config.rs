//! Optional TOML run configuration. Keys mirror the long flag names; a flag
//! given on the command line always wins over the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    #[serde(rename = "fn")]
    pub function: Option<String>,
    pub axis: Option<String>,
    pub case: Option<String>,
    pub h: Option<String>,
    pub k: Option<String>,
    pub eta: Option<String>,
    pub problem: Option<String>,
    pub spec: Option<PathBuf>,
    pub u: Option<String>,
    pub field: Option<PathBuf>,
    pub lambda0: Option<f64>,
    pub lambda: Option<f64>,
    pub functional: Option<String>,
    pub eps: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub radius: Option<f64>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub init: Option<PathBuf>,
    pub max_outer_iters: Option<usize>,
    pub max_inner_iters: Option<usize>,
    pub grad_tol: Option<f64>,
    pub constraint_tol: Option<f64>,
    pub penalty_init: Option<f64>,
    pub penalty_growth: Option<f64>,
    pub penalty_max: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let c: RunConfig = toml::from_str("alpha = 0.25\nnx = 17\nfn = \"x*y\"\nmax-inner-iters = 9\n").unwrap();
        assert_eq!(c.alpha, Some(0.25));
        assert_eq!(c.nx, Some(17));
        assert_eq!(c.function.as_deref(), Some("x*y"));
        assert_eq!(c.max_inner_iters, Some(9));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<RunConfig>("alhpa = 0.5").is_err());
        assert!(toml::from_str::<RunConfig>("nx = \"big\"").is_err());
    }
}
