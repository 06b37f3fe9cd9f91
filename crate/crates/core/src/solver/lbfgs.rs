//! Limited-memory BFGS with Armijo backtracking (c₁ = 1e-4, halving).

use std::collections::VecDeque;

use crate::error::{FracError, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct LbfgsSettings {
    pub memory: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub armijo: f64,
    pub max_backtracks: usize,
}

impl Default for LbfgsSettings {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iters: 500,
            grad_tol: 1e-8,
            armijo: 1e-4,
            max_backtracks: 60,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    #[allow(dead_code)]
    pub converged: bool,
    /// Objective value after every accepted step, starting with the initial point.
    pub accepted_values: Vec<f64>,
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimises `objective`, which returns the value and gradient at a point.
///
/// A trial point whose evaluation fails with a non-finite value is treated as
/// a rejected step; failure at the starting point is returned to the caller.
pub(crate) fn minimize<F>(x0: Vec<f64>, settings: &LbfgsSettings, mut objective: F) -> Result<LbfgsOutcome>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let mut x = x0;
    let (mut f, mut g) = objective(&x)?;
    if !f.is_finite() {
        return Err(FracError::NonFinite { node: (0, 0), value: f });
    }
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(settings.memory);
    let mut accepted_values = vec![f];
    let mut iterations = 0;
    let mut converged = inf_norm(&g) <= settings.grad_tol;

    while !converged && iterations < settings.max_iters {
        let mut d = two_loop(&g, &pairs);
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            pairs.clear();
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }

        let mut step = match accept_step(&x, f, &d, slope, settings, &mut objective) {
            Some(s) => Some(s),
            None if !pairs.is_empty() => {
                pairs.clear();
                d = g.iter().map(|v| -v).collect();
                slope = dot(&g, &d);
                accept_step(&x, f, &d, slope, settings, &mut objective)
            }
            None => None,
        };
        let Some((x_new, f_new, g_new)) = step.take() else {
            break;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if pairs.len() == settings.memory {
                pairs.pop_front();
            }
            pairs.push_back((s, y, 1.0 / sy));
        }
        x = x_new;
        f = f_new;
        g = g_new;
        accepted_values.push(f);
        iterations += 1;
        converged = inf_norm(&g) <= settings.grad_tol;
    }

    Ok(LbfgsOutcome {
        x,
        iterations,
        converged,
        accepted_values,
    })
}

fn two_loop(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = pairs.back() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
    }
    for ((s, y, rho), a) in pairs.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

fn accept_step<F>(
    x: &[f64],
    f: f64,
    d: &[f64],
    slope: f64,
    settings: &LbfgsSettings,
    objective: &mut F,
) -> Option<(Vec<f64>, f64, Vec<f64>)>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let mut t = 1.0;
    for _ in 0..settings.max_backtracks {
        let trial: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + t * di).collect();
        if let Ok((ft, gt)) = objective(&trial) {
            if ft.is_finite() && ft <= f + settings.armijo * t * slope {
                return Some((trial, ft, gt));
            }
        }
        t *= 0.5;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let settings = LbfgsSettings { max_iters: 2000, grad_tol: 1e-10, ..Default::default() };
        let out = minimize(vec![-1.2, 1.0], &settings, |x| {
            let (a, b) = (x[0], x[1]);
            let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
            Ok((f, g))
        })
        .unwrap();
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6);
        assert!(out.accepted_values.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn ill_scaled_quadratic() {
        let scales: Vec<f64> = (0..50).map(|i| 10f64.powf(i as f64 / 49.0 * 4.0 - 3.0)).collect();
        let settings = LbfgsSettings { grad_tol: 1e-12, max_iters: 5000, ..Default::default() };
        let out = minimize(vec![1.0; 50], &settings, |x| {
            let f = x.iter().zip(&scales).map(|(v, s)| 0.5 * s * v * v).sum();
            Ok((f, x.iter().zip(&scales).map(|(v, s)| s * v).collect()))
        })
        .unwrap();
        let gn: Vec<f64> = out.x.iter().zip(&scales).map(|(v, s)| s * v).collect();
        assert!(out.converged, "{} iterations, final {:?} {}", out.iterations, out.accepted_values.last(), inf_norm(&gn));
    }
}
