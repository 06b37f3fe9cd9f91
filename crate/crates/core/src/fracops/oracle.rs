use crate::error::{FracError, Result};
use crate::fields::FractionalOrder;
use crate::special::gamma;

/// Exact Jumarie derivative of (t − a)^β at x:
/// Γ(β+1)/Γ(β−α+1) · (x − a)^(β−α).
pub fn power_rule_oracle(beta: f64, order: FractionalOrder, a: f64, x: f64) -> Result<f64> {
    let alpha = order.alpha();
    if !(beta > 0.0) {
        return Err(FracError::Domain(format!("power β must be positive, got {beta}")));
    }
    if !(x >= a) {
        return Err(FracError::Domain(format!("x = {x} lies below the lower limit {a}")));
    }
    let dist = x - a;
    if dist == 0.0 {
        return if beta > alpha {
            Ok(0.0)
        } else {
            Err(FracError::Domain(format!(
                "derivative of (t − a)^{beta} is unbounded at t = a for α = {alpha}"
            )))
        };
    }
    Ok(gamma(beta + 1.0) / gamma(beta - alpha + 1.0) * dist.powf(beta - alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_identities() {
        let half = FractionalOrder::new(0.5).unwrap();
        assert!((power_rule_oracle(1.0, half, 0.0, 1.0).unwrap() - 2.0 / PI.sqrt()).abs() < 1e-14);
        assert_eq!(power_rule_oracle(1.0, half, 0.0, 0.0).unwrap(), 0.0);
        assert!((power_rule_oracle(0.5, half, 0.0, 2.0).unwrap() - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let half = FractionalOrder::new(0.5).unwrap();
        assert!(power_rule_oracle(0.5, half, 0.0, 0.0).is_err());
        assert!(power_rule_oracle(0.2, half, 1.0, 1.0).is_err());
        assert!(power_rule_oracle(1.0, half, 1.0, 0.5).is_err());
        assert!(power_rule_oracle(0.0, half, 0.0, 1.0).is_err());
    }
}
