//! Product-integration weights for the singular factor (hi − t)^(α−1).

use crate::fields::{FractionalOrder, Grid2D};

/// Nodal weights `w[i]` with `Σ w[i] φ(tᵢ) = ∫_lo^hi φ̃(t) (hi − t)^(α−1) dt`,
/// where φ̃ is the piecewise-linear interpolant of the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisWeights {
    weights: Vec<f64>,
}

impl AxisWeights {
    pub fn new(lo: f64, hi: f64, n: usize, order: FractionalOrder) -> Self {
        assert!(n >= 2 && lo < hi);
        let alpha = order.alpha();
        let h = (hi - lo) / (n - 1) as f64;
        let scale = h.powf(alpha);
        let mut weights = vec![0.0; n];
        // In units of h, node i sits at distance t = n-1-i from hi. Panel
        // [m, m+1] in t spans nodes i = n-2-m (t = m+1) and i+1 (t = m).
        for m in 0..n - 1 {
            let (lo_t, hi_t) = (m as f64, (m + 1) as f64);
            let m0 = (hi_t.powf(alpha) - lo_t.powf(alpha)) / alpha;
            let m1 = (hi_t.powf(alpha + 1.0) - lo_t.powf(alpha + 1.0)) / (alpha + 1.0);
            let i = n - 2 - m;
            weights[i] += scale * (m1 - lo_t * m0);
            weights[i + 1] += scale * (hi_t * m0 - m1);
        }
        Self { weights }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weighted sum Σ w[i] φ[i].
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.weights.len());
        self.weights.iter().zip(samples).map(|(w, f)| w * f).sum()
    }
}

/// Tensor pair of axis weights for a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureWeights {
    pub wx: AxisWeights,
    pub wy: AxisWeights,
}

impl QuadratureWeights {
    pub fn new(grid: &Grid2D, order: FractionalOrder) -> Self {
        Self {
            wx: AxisWeights::new(grid.a(), grid.b(), grid.nx(), order),
            wy: AxisWeights::new(grid.c(), grid.d(), grid.ny(), order),
        }
    }

    /// wx[i]·wy[j] for node (i, j).
    #[inline]
    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.wx.weights[i] * self.wy.weights[j]
    }

    /// Σᵢⱼ wx[i] wy[j] f[i][j] over x-major, y-fastest storage.
    pub fn weighted_sum(&self, values: &[f64]) -> f64 {
        let ny = self.wy.len();
        debug_assert_eq!(values.len(), self.wx.len() * ny);
        self.wx
            .weights
            .iter()
            .zip(values.chunks_exact(ny))
            .map(|(wx, col)| wx * self.wy.integrate(col))
            .sum()
    }
}
