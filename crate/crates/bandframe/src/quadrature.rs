//! Gauss-Legendre rules for integrating piecewise smooth, oscillatory
//! integrands over the band.

use crate::spectral::C64;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Roots are found by Newton's method on the three-term recurrence, starting
/// from the usual cosine estimates; 20 to 40 points converge in a handful of
/// steps to full double precision.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "a quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for k in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) as f64 * z * p1 - k as f64 * p2) / (k + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A reusable rule mapped onto panels.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        GaussLegendre { nodes, weights }
    }

    /// Integral of `f` over `[a, b]` split into `panels` equal panels.
    pub fn integrate<F: FnMut(f64) -> C64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> C64 {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            let half = 0.5 * width;
            let mut part = C64::new(0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                part += f(mid + half * x) * *w;
            }
            acc += part * half;
        }
        acc
    }

    /// Sum of integrals over consecutive pieces `[pts[i], pts[i+1]]`; the
    /// panel count grows with the oscillation frequency `freq` of the integrand.
    pub fn integrate_pieces<F: FnMut(f64) -> C64>(&self, pts: &[f64], freq: f64, mut f: F) -> C64 {
        pts.windows(2)
            .map(|w| {
                let len = w[1] - w[0];
                let panels = ((len * (freq.abs() + 1.0)) / 2.0).ceil() as usize;
                self.integrate(w[0], w[1], panels, &mut f)
            })
            .sum()
    }
}

impl Default for GaussLegendre {
    fn default() -> Self {
        Self::new(24)
    }
}
