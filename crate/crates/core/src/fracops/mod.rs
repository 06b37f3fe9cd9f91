//! Discrete modified Riemann–Liouville operators.

mod derivative;
mod green;
mod integrals;
mod oracle;
mod weights;

pub use derivative::{jumarie_derivative, partial_frac, partial_frac_transpose, L1Operator};
pub use green::{green_residual, GreenReport};
pub use integrals::{line_integral, line_integral_parts, volume_integral, LineIntegralParts};
pub use oracle::power_rule_oracle;
pub use weights::{AxisWeights, QuadratureWeights};
