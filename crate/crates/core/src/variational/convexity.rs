//! Sampling check of convexity of H in (u, v, w).

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::functional::eval_h;
use super::integrand::Point;
use super::problem::{IsoperimetricProblem, MultiplierPair};

/// Default half-width of the (u, v, w) sampling box.
pub const DEFAULT_PROBE_RADIUS: f64 = 10.0;

/// Lowest Hessian eigenvalue still counted as positive semidefinite.
pub const PSD_EIGEN_FLOOR: f64 = -1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub point: Point,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ConvexityVerdict {
    ConvexOnSamples,
    NotConvex(ConvexityWitness),
}

impl ConvexityVerdict {
    pub fn is_convex_on_samples(&self) -> bool {
        matches!(self, ConvexityVerdict::ConvexOnSamples)
    }
}

/// Central finite-difference Hessian of H in (u, v, w) at `pt`.
pub fn hessian_uvw(p: &IsoperimetricProblem, m: MultiplierPair, pt: &Point) -> Matrix3<f64> {
    let h = |q: &Point| eval_h(p, m, q);
    let steps: [f64; 3] = std::array::from_fn(|k| 1e-3 * (1.0 + pt.state(k).abs()));
    let shift = |q: Point, k: usize, s: f64| q.with_state(k, q.state(k) + s);
    let center = h(pt);
    let mut hess = Matrix3::zeros();
    for a in 0..3 {
        let da = steps[a];
        hess[(a, a)] = (h(&shift(*pt, a, da)) - 2.0 * center + h(&shift(*pt, a, -da))) / (da * da);
        for b in a + 1..3 {
            let db = steps[b];
            let pp = h(&shift(shift(*pt, a, da), b, db));
            let pm = h(&shift(shift(*pt, a, da), b, -db));
            let mp = h(&shift(shift(*pt, a, -da), b, db));
            let mm = h(&shift(shift(*pt, a, -da), b, -db));
            let v = (pp - pm - mp + mm) / (4.0 * da * db);
            hess[(a, b)] = v;
            hess[(b, a)] = v;
        }
    }
    hess
}

/// Draws `sample_count` points from [a,b]×[c,d]×[−R,R]³ (R = 10) and tests the
/// finite-difference Hessian of H for positive semidefiniteness.
pub fn convexity_probe(p: &IsoperimetricProblem, m: MultiplierPair, sample_count: usize, seed: u64) -> ConvexityVerdict {
    convexity_probe_in_box(p, m, sample_count, seed, DEFAULT_PROBE_RADIUS)
}

pub fn convexity_probe_in_box(
    p: &IsoperimetricProblem,
    m: MultiplierPair,
    sample_count: usize,
    seed: u64,
    radius: f64,
) -> ConvexityVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = &p.grid;
    let r = radius.abs();
    for _ in 0..sample_count.max(1) {
        let pt = Point::new(
            rng.gen_range(g.a()..=g.b()),
            rng.gen_range(g.c()..=g.d()),
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
        );
        let min_eigenvalue = hessian_uvw(p, m, &pt)
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if !(min_eigenvalue >= PSD_EIGEN_FLOOR) {
            return ConvexityVerdict::NotConvex(ConvexityWitness { point: pt, min_eigenvalue });
        }
    }
    ConvexityVerdict::ConvexOnSamples
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FractionalOrder, Grid2D};
    use crate::variational::integrand::FnIntegrand;

    fn problem(f: FnIntegrand, g: FnIntegrand) -> IsoperimetricProblem {
        IsoperimetricProblem::new(Grid2D::unit(5).unwrap(), FractionalOrder::new(0.5).unwrap(), f.shared(), g.shared(), 0.0)
            .unwrap()
    }

    fn zero() -> FnIntegrand {
        FnIntegrand::new("zero", |_| 0.0, |_| 0.0, |_| 0.0, |_| 0.0)
    }

    #[test]
    fn convex_quadratic_plus_linear() {
        let f = FnIntegrand::new("v2w2", |p| p.v * p.v + p.w * p.w, |_| 0.0, |p| 2.0 * p.v, |p| 2.0 * p.w);
        let g = FnIntegrand::new("u", |p| p.u, |_| 1.0, |_| 0.0, |_| 0.0);
        let v = convexity_probe(&problem(f, g), MultiplierPair::normal(1.0), 200, 3);
        assert_eq!(v, ConvexityVerdict::ConvexOnSamples);
    }

    #[test]
    fn concave_is_rejected() {
        let f = FnIntegrand::new("-u2", |p| -p.u * p.u, |p| -2.0 * p.u, |_| 0.0, |_| 0.0);
        match convexity_probe(&problem(f, zero()), MultiplierPair::cost_only(), 10, 0) {
            ConvexityVerdict::NotConvex(w) => assert!((w.min_eigenvalue + 2.0).abs() < 1e-4),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn indefinite_cross_term() {
        let f = FnIntegrand::new("uv", |p| p.u * p.v, |p| p.v, |p| p.u, |_| 0.0);
        let p = problem(f, zero());
        let pt = Point::new(0.5, 0.5, 1.0, -2.0, 0.3);
        let eig = hessian_uvw(&p, MultiplierPair::cost_only(), &pt).symmetric_eigenvalues();
        let mut e: Vec<f64> = eig.iter().cloned().collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((e[0] + 1.0).abs() < 1e-6 && e[1].abs() < 1e-6 && (e[2] - 1.0).abs() < 1e-6);
        assert!(!convexity_probe(&p, MultiplierPair::cost_only(), 10, 0).is_convex_on_samples());
    }

    #[test]
    fn deterministic_given_seed() {
        let f = FnIntegrand::new("-u2", |p| -p.u * p.u, |p| -2.0 * p.u, |_| 0.0, |_| 0.0);
        let p = problem(f, zero());
        let a = convexity_probe(&p, MultiplierPair::cost_only(), 5, 42);
        let b = convexity_probe(&p, MultiplierPair::cost_only(), 5, 42);
        assert_eq!(a, b);
    }
}
