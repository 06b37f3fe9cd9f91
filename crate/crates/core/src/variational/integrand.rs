//! Point integrands f(x, y, u, v, w) with their partials in u, v and w.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Arguments of an integrand: position, state u and its two fractional partials.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, u: f64, v: f64, w: f64) -> Self {
        Self { x, y, u, v, w }
    }

    /// The (u, v, w) slot by position 0, 1, 2.
    pub(crate) fn state(&self, k: usize) -> f64 {
        match k {
            0 => self.u,
            1 => self.v,
            _ => self.w,
        }
    }

    pub(crate) fn with_state(mut self, k: usize, value: f64) -> Self {
        match k {
            0 => self.u = value,
            1 => self.v = value,
            _ => self.w = value,
        }
        self
    }
}

/// A C¹ integrand together with its partial derivatives ∂₃ = ∂/∂u,
/// ∂₄ = ∂/∂v and ∂₅ = ∂/∂w.
pub trait Integrand: Send + Sync {
    fn name(&self) -> &str;
    fn value(&self, p: &Point) -> f64;
    fn du(&self, p: &Point) -> f64;
    fn dv(&self, p: &Point) -> f64;
    fn dw(&self, p: &Point) -> f64;

    /// True when the integrand is identically zero; lets callers skip work.
    fn is_zero(&self) -> bool {
        false
    }
}

pub type LagrangianSpec = Arc<dyn Integrand>;

impl fmt::Debug for dyn Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Integrand({})", self.name())
    }
}

type PointFn = Box<dyn Fn(&Point) -> f64 + Send + Sync>;

/// Integrand assembled from closures.
pub struct FnIntegrand {
    name: String,
    value: PointFn,
    du: PointFn,
    dv: PointFn,
    dw: PointFn,
}

impl FnIntegrand {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(&Point) -> f64 + Send + Sync + 'static,
        du: impl Fn(&Point) -> f64 + Send + Sync + 'static,
        dv: impl Fn(&Point) -> f64 + Send + Sync + 'static,
        dw: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Box::new(value),
            du: Box::new(du),
            dv: Box::new(dv),
            dw: Box::new(dw),
        }
    }

    pub fn shared(self) -> LagrangianSpec {
        Arc::new(self)
    }
}

impl Integrand for FnIntegrand {
    fn name(&self) -> &str {
        &self.name
    }
    fn value(&self, p: &Point) -> f64 {
        (self.value)(p)
    }
    fn du(&self, p: &Point) -> f64 {
        (self.du)(p)
    }
    fn dv(&self, p: &Point) -> f64 {
        (self.dv)(p)
    }
    fn dw(&self, p: &Point) -> f64 {
        (self.dw)(p)
    }
}

/// Which supplied partial disagreed with finite differences, and where.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMismatch {
    pub slot: usize,
    pub point: Point,
    pub supplied: f64,
    pub finite_difference: f64,
}

/// Sampling box for [`audit_partials`].
#[derive(Debug, Clone, Copy)]
pub struct AuditBox {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub radius: f64,
}

/// Compares d3, d4, d5 with central differences of `value` at `samples`
/// seeded random points, relative tolerance 1e-5 (absolute below magnitude 1).
pub fn audit_partials(
    f: &dyn Integrand,
    region: AuditBox,
    samples: usize,
    seed: u64,
) -> Result<(), PartialMismatch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let r = region.radius;
        let p = Point::new(
            rng.gen_range(region.x.0..=region.x.1),
            rng.gen_range(region.y.0..=region.y.1),
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
        );
        let supplied = [f.du(&p), f.dv(&p), f.dw(&p)];
        for (slot, &s) in supplied.iter().enumerate() {
            let z = p.state(slot);
            let step = 1e-6 * (1.0 + z.abs());
            let fd = (f.value(&p.with_state(slot, z + step)) - f.value(&p.with_state(slot, z - step)))
                / (2.0 * step);
            if (fd - s).abs() > 1e-5 * s.abs().max(1.0) {
                return Err(PartialMismatch {
                    slot: slot + 3,
                    point: p,
                    supplied: s,
                    finite_difference: fd,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box() -> AuditBox {
        AuditBox { x: (0.0, 1.0), y: (0.0, 1.0), radius: 3.0 }
    }

    #[test]
    fn audit_accepts_correct_partials() {
        let f = FnIntegrand::new(
            "mixed",
            |p| p.u * p.v + p.w.sin() * p.x,
            |p| p.v,
            |p| p.u,
            |p| p.w.cos() * p.x,
        );
        assert!(audit_partials(&f, unit_box(), 50, 7).is_ok());
    }

    #[test]
    fn audit_flags_wrong_partial() {
        let f = FnIntegrand::new("bad", |p| p.v * p.v, |_| 0.0, |p| p.v, |_| 0.0);
        let err = audit_partials(&f, unit_box(), 50, 7).unwrap_err();
        assert_eq!(err.slot, 4);
    }
}
