//! Time-domain dual generators.
//!
//! A dual spectrum is known either as samples on the band nodes of a grid or
//! through a piecewise closed form. [`inverse_ft`] turns either into values
//! `phi(t) = (2 pi)^{-1/2} * integral of phi_hat(x) e^{i t x} dx` on a uniform
//! time grid, integrating piece by piece so that no quadrature panel straddles
//! a breakpoint. A natural cubic spline through those values serves
//! off-grid evaluation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dual::{ClosedForm, DualFamily, SchemeDuals};
use crate::error::{Error, Result};
use crate::spectral::C64;

/// Default number of quadrature intervals over the band.
pub const DEFAULT_QUADRATURE_NODES: usize = 8192;
/// Default knot spacing of the time grid.
pub const DEFAULT_KNOT_SPACING: f64 = 0.01;
/// Fewer nodes than this are rejected by [`inverse_ft`].
pub const MIN_QUADRATURE_NODES: usize = 1024;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Time samples advanced by a running phasor within a chunk of this length
/// before the phasor is recomputed from scratch.
const PHASOR_CHUNK: usize = 256;
/// Quadrature nodes whose phasors are advanced together.
const LANES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureRule {
    /// Nodes include both piece endpoints; endpoint values are one-sided limits.
    Trapezoid,
    /// Nodes at cell midpoints.
    Midpoint,
}

/// One smooth piece `[lo, hi]` of a sampled spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPiece {
    pub lo: f64,
    pub hi: f64,
    pub rule: QuadratureRule,
    /// Uniformly spaced abscissae.
    pub nodes: Vec<f64>,
    /// `values[channel][k]` at `nodes[k]`.
    pub values: Vec<Vec<C64>>,
}

impl SpectrumPiece {
    fn weights(&self) -> Vec<f64> {
        let n = self.nodes.len();
        match self.rule {
            QuadratureRule::Trapezoid => {
                let d = (self.hi - self.lo) / (n - 1) as f64;
                (0..n).map(|k| if k == 0 || k == n - 1 { 0.5 * d } else { d }).collect()
            }
            QuadratureRule::Midpoint => vec![(self.hi - self.lo) / n as f64; n],
        }
    }
}

/// Several spectra sampled on a common, piecewise uniform set of nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpectrum {
    pub pieces: Vec<SpectrumPiece>,
    pub channels: usize,
    /// Points where the spectra may jump or kink; every one must coincide
    /// with a piece boundary.
    pub breakpoints: Vec<f64>,
}

impl SampledSpectrum {
    /// Trapezoid sampling of a piecewise formula.
    ///
    /// `eval(anchor, y)` must return the formula of the piece containing
    /// `anchor` evaluated at `y`, so that endpoint values are one-sided limits.
    /// `m` intervals are shared among the pieces in proportion to their length.
    pub fn from_piecewise<F>(breakpoints: &[f64], m: usize, channels: usize, eval: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Vec<C64>,
    {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidParameter("need at least two breakpoints".into()));
        }
        let total = breakpoints[breakpoints.len() - 1] - breakpoints[0];
        let mut pieces = Vec::new();
        for w in breakpoints.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let intervals = ((m as f64 * (hi - lo) / total).round() as usize).max(2);
            let anchor = 0.5 * (lo + hi);
            let nodes: Vec<f64> = (0..=intervals)
                .map(|k| if k == intervals { hi } else { lo + (hi - lo) * k as f64 / intervals as f64 })
                .collect();
            let mut values = vec![Vec::with_capacity(nodes.len()); channels];
            for &y in &nodes {
                let v = eval(anchor, y);
                for (c, z) in v.into_iter().take(channels).enumerate() {
                    values[c].push(z);
                }
            }
            pieces.push(SpectrumPiece {
                lo,
                hi,
                rule: QuadratureRule::Trapezoid,
                nodes,
                values,
            });
        }
        Ok(SampledSpectrum {
            pieces,
            channels,
            breakpoints: breakpoints.to_vec(),
        })
    }

    /// Trapezoid sampling of a builtin scheme's closed-form dual spectra.
    pub fn from_scheme(cf: &SchemeDuals, m: usize) -> Result<Self> {
        Self::from_piecewise(&cf.breakpoints(), m, cf.n_generators(), |a, y| cf.eval_branch(a, y))
    }

    /// Midpoint sampling taken from the band nodes of a [`DualFamily`].
    ///
    /// Each band piece is a translate of one fiber sub-interval, so its nodes
    /// are the translated cell midpoints of that sub-interval.
    pub fn from_duals(duals: &DualFamily) -> Result<Self> {
        let bps = duals.spec.band_breakpoints();
        let n = duals.n_generators();
        let mut pieces = Vec::new();
        let mut k = 0;
        let nodes = &duals.band_nodes;
        for w in bps.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let start = k;
            while k < nodes.len() && nodes[k].y < hi {
                k += 1;
            }
            if k == start {
                continue;
            }
            pieces.push(SpectrumPiece {
                lo,
                hi,
                rule: QuadratureRule::Midpoint,
                nodes: nodes[start..k].iter().map(|b| b.y).collect(),
                values: (0..n).map(|c| duals.dual_spectra[c][start..k].to_vec()).collect(),
            });
        }
        let mut breakpoints = bps;
        for g in duals_breakpoints(duals) {
            breakpoints.push(g);
        }
        breakpoints.sort_by(|a, b| a.total_cmp(b));
        Ok(SampledSpectrum {
            pieces,
            channels: n,
            breakpoints,
        })
    }

    pub fn node_count(&self) -> usize {
        self.pieces.iter().map(|p| p.nodes.len()).sum()
    }

    /// Checks contiguity, uniform spacing and breakpoint alignment.
    pub fn validate(&self) -> Result<()> {
        for p in &self.pieces {
            let n = p.nodes.len();
            if n < 2 || p.values.len() != self.channels || p.values.iter().any(|v| v.len() != n) {
                return Err(Error::InvalidParameter("malformed spectrum piece".into()));
            }
            let tol = 1e-9 * (p.hi - p.lo);
            let (first, step) = match p.rule {
                QuadratureRule::Trapezoid => (p.lo, (p.hi - p.lo) / (n - 1) as f64),
                QuadratureRule::Midpoint => {
                    let s = (p.hi - p.lo) / n as f64;
                    (p.lo + 0.5 * s, s)
                }
            };
            for (k, &y) in p.nodes.iter().enumerate() {
                if (y - (first + k as f64 * step)).abs() > tol {
                    return Err(Error::InvalidParameter(format!(
                        "nodes of piece [{}, {}] are not uniformly spaced",
                        p.lo, p.hi
                    )));
                }
            }
        }
        for w in self.pieces.windows(2) {
            if (w[0].hi - w[1].lo).abs() > 1e-12 * (1.0 + w[0].hi.abs()) {
                return Err(Error::InvalidParameter(format!("gap between pieces at {}", w[0].hi)));
            }
        }
        for &b in &self.breakpoints {
            let inside = self.pieces.iter().any(|p| {
                let guard = 1e-12 * (p.hi - p.lo);
                b > p.lo + guard && b < p.hi - guard
            });
            if inside {
                return Err(Error::NotBreakpointAligned(b));
            }
        }
        Ok(())
    }
}

fn duals_breakpoints(duals: &DualFamily) -> Vec<f64> {
    match &duals.closed_form {
        Some(ClosedForm::Scheme(cf)) => cf.breakpoints(),
        _ => Vec::new(),
    }
}

/// Uniform grid `t_k = start + k * step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl TimeGrid {
    /// Grid covering `[-half_width, half_width]` with knots at multiples of `step`.
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width > 0.0 && step > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad time grid {half_width} / {step}")));
        }
        let n = (half_width / step - 1e-9).ceil() as usize;
        Ok(TimeGrid {
            start: -(n as f64) * step,
            step,
            len: 2 * n + 1,
        })
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.point(k)).collect()
    }
}

/// Natural cubic spline through complex samples on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    grid: TimeGrid,
    values: Vec<C64>,
    /// Second derivatives at the knots; zero at both ends.
    second: Vec<C64>,
}

impl CubicSpline {
    pub fn natural(grid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        let n = values.len();
        if n != grid.len || n < 2 {
            return Err(Error::DimensionMismatch(format!("{n} values for {} knots", grid.len)));
        }
        let mut second = vec![C64::new(0.0, 0.0); n];
        if n > 2 {
            // Interior equations M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / dt^2,
            // solved by the Thomas algorithm.
            let m = n - 2;
            let scale = 6.0 / (grid.step * grid.step);
            let mut c_prime = vec![0.0; m];
            let mut d_prime = vec![C64::new(0.0, 0.0); m];
            for i in 0..m {
                let rhs = (values[i + 2] - values[i + 1] * 2.0 + values[i]) * scale;
                if i == 0 {
                    c_prime[0] = 0.25;
                    d_prime[0] = rhs / 4.0;
                } else {
                    let denom = 4.0 - c_prime[i - 1];
                    c_prime[i] = 1.0 / denom;
                    d_prime[i] = (rhs - d_prime[i - 1]) / denom;
                }
            }
            second[m] = d_prime[m - 1];
            for i in (0..m - 1).rev() {
                second[i + 1] = d_prime[i] - second[i + 2] * c_prime[i];
            }
        }
        Ok(CubicSpline { grid, values, second })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> Result<C64> {
        let g = &self.grid;
        let (lo, hi) = (g.start, g.end());
        let slack = 1e-9 * g.step;
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        let pos = ((t - lo) / g.step).clamp(0.0, (g.len - 1) as f64);
        let nearest = pos.round();
        if (pos - nearest).abs() < 1e-9 {
            return Ok(self.values[nearest as usize]);
        }
        let i = (pos.floor() as usize).min(g.len - 2);
        let u = pos - i as f64;
        let v = 1.0 - u;
        let h2 = g.step * g.step / 6.0;
        Ok(self.values[i] * v
            + self.values[i + 1] * u
            + (self.second[i] * (v * v * v - v) + self.second[i + 1] * (u * u * u - u)) * h2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelSource {
    ClosedForm,
    Quadrature,
}

/// One time-domain dual generator on `[-T, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeKernel {
    pub source: KernelSource,
    pub spline: CubicSpline,
    /// Closed form and generator index, for [`KernelSource::ClosedForm`].
    closed: Option<(SchemeDuals, usize)>,
}

impl TimeKernel {
    pub fn grid(&self) -> &TimeGrid {
        self.spline.grid()
    }

    pub fn values(&self) -> &[C64] {
        self.spline.values()
    }

    /// Natural cubic spline value; exact at the knots.
    pub fn spline_eval(&self, t: f64) -> Result<C64> {
        self.spline.eval(t)
    }

    /// Closed form when available, spline otherwise.
    pub fn eval(&self, t: f64) -> Result<C64> {
        match &self.closed {
            Some((cf, i)) => {
                let g = self.grid();
                let slack = 1e-9 * g.step;
                if !(t >= g.start - slack && t <= g.end() + slack) {
                    return Err(Error::OutOfRange {
                        t,
                        lo: g.start,
                        hi: g.end(),
                    });
                }
                cf.time_value(*i, t).ok_or_else(|| Error::MissingDualEvaluator(cf.tag.to_string()))
            }
            None => self.spline.eval(t),
        }
    }

    /// Closed-form time kernels of a scheme, sampled and splined on `grid`.
    pub fn closed_form(cf: &SchemeDuals, i: usize, grid: TimeGrid) -> Result<Self> {
        if !cf.has_time_form() {
            return Err(Error::MissingDualEvaluator(format!("{} at h = {}", cf.tag, cf.h)));
        }
        let values: Vec<C64> = grid
            .points()
            .into_iter()
            .map(|t| cf.time_value(i, t).ok_or_else(|| Error::MissingDualEvaluator(cf.tag.to_string())))
            .collect::<Result<_>>()?;
        Ok(TimeKernel {
            source: KernelSource::ClosedForm,
            spline: CubicSpline::natural(grid, values)?,
            closed: Some((cf.clone(), i)),
        })
    }
}

/// Inverse Fourier transform of every channel of `spectrum` on `grid`.
///
/// Each piece is integrated with its own rule (trapezoid or midpoint), both
/// second order in the node spacing. Along the time grid the factors
/// `e^{i t y}` are advanced by multiplication with `e^{i dt y}` and refreshed
/// every few hundred steps, which keeps the cost at a few flops per
/// node-time pair without letting rounding drift accumulate.
pub fn inverse_ft(spectrum: &SampledSpectrum, grid: &TimeGrid) -> Result<Vec<TimeKernel>> {
    spectrum.validate()?;
    if spectrum.node_count() < MIN_QUADRATURE_NODES {
        return Err(Error::InvalidParameter(format!(
            "{} quadrature nodes, need at least {MIN_QUADRATURE_NODES}",
            spectrum.node_count()
        )));
    }
    let ch = spectrum.channels;
    let mut ys = Vec::with_capacity(spectrum.node_count());
    let mut g_re: Vec<Vec<f64>> = vec![Vec::new(); ch];
    let mut g_im: Vec<Vec<f64>> = vec![Vec::new(); ch];
    for p in &spectrum.pieces {
        let w = p.weights();
        for (k, &y) in p.nodes.iter().enumerate() {
            ys.push(y);
            for c in 0..ch {
                let z = p.values[c][k] * (w[k] * INV_SQRT_2PI);
                g_re[c].push(z.re);
                g_im[c].push(z.im);
            }
        }
    }
    // Every node contributes g e^{ity} = g cos(ty) + i g sin(ty). On a node
    // set symmetric about zero the pair at +-y contributes
    // (g(y) + g(-y)) cos(ty) + i (g(y) - g(-y)) sin(ty), which is the same
    // expression with the sine term negated at -t; only half the nodes and
    // the non-negative half of a symmetric time grid are then needed.
    let half = grid.len / 2;
    let symmetric = is_symmetric(&ys) && grid.point(half).abs() < 1e-12 * grid.step;
    let (nodes, cos_coef, sin_coef) = if symmetric {
        fold_symmetric(&ys, &g_re, &g_im)
    } else {
        let both: Vec<Vec<C64>> = (0..ch)
            .map(|c| g_re[c].iter().zip(&g_im[c]).map(|(&r, &i)| C64::new(r, i)).collect())
            .collect();
        (ys, both.clone(), both)
    };
    let first = if symmetric { half } else { 0 };
    let steps: Vec<(f64, f64)> = nodes.iter().map(|&y| (grid.step * y).sin_cos()).collect();

    let chunks: Vec<usize> = (first..grid.len).step_by(PHASOR_CHUNK).collect();
    // blocks[chunk][channel] = (cosine sums, sine sums)
    let blocks: Vec<Vec<(Vec<C64>, Vec<C64>)>> = chunks
        .par_iter()
        .map(|&n0| {
            let len = PHASOR_CHUNK.min(grid.len - n0);
            let t0 = grid.point(n0);
            // cos sums (re, im) and sin sums (re, im) per channel
            let mut acc = vec![[[0.0; PHASOR_CHUNK]; 4]; ch];
            let mut ph_c = [[0.0; PHASOR_CHUNK]; LANES];
            let mut ph_s = [[0.0; PHASOR_CHUNK]; LANES];
            for block in (0..nodes.len()).step_by(LANES) {
                let lanes = LANES.min(nodes.len() - block);
                // Independent recurrences side by side, so their latencies overlap.
                let mut pr = [1.0; LANES];
                let mut pi = [0.0; LANES];
                let mut sr = [1.0; LANES];
                let mut si = [0.0; LANES];
                for l in 0..lanes {
                    (pi[l], pr[l]) = (t0 * nodes[block + l]).sin_cos();
                    (si[l], sr[l]) = steps[block + l];
                }
                for n in 0..len {
                    for l in 0..LANES {
                        ph_c[l][n] = pr[l];
                        ph_s[l][n] = pi[l];
                        let next_r = pr[l] * sr[l] - pi[l] * si[l];
                        pi[l] = pr[l] * si[l] + pi[l] * sr[l];
                        pr[l] = next_r;
                    }
                }
                for l in 0..lanes {
                    let m = block + l;
                    for c in 0..ch {
                        let (a, b) = (cos_coef[c][m], sin_coef[c][m]);
                        let [cr, ci, sr, si] = &mut acc[c];
                        for n in 0..len {
                            cr[n] += a.re * ph_c[l][n];
                            ci[n] += a.im * ph_c[l][n];
                            sr[n] += b.re * ph_s[l][n];
                            si[n] += b.im * ph_s[l][n];
                        }
                    }
                }
            }
            acc.iter()
                .map(|[cr, ci, sr, si]| {
                    (
                        (0..len).map(|n| C64::new(cr[n], ci[n])).collect(),
                        (0..len).map(|n| C64::new(sr[n], si[n])).collect(),
                    )
                })
                .collect()
        })
        .collect();

    let i = C64::new(0.0, 1.0);
    (0..ch)
        .map(|c| {
            let cos_sum: Vec<C64> = blocks.iter().flat_map(|b| b[c].0.iter().copied()).collect();
            let sin_sum: Vec<C64> = blocks.iter().flat_map(|b| b[c].1.iter().copied()).collect();
            let upper = cos_sum.iter().zip(&sin_sum).map(|(&a, &b)| a + i * b);
            let values: Vec<C64> = if symmetric {
                let lower = cos_sum.iter().zip(&sin_sum).skip(1).rev().map(|(&a, &b)| a - i * b);
                lower.chain(upper).collect()
            } else {
                upper.collect()
            };
            Ok(TimeKernel {
                source: KernelSource::Quadrature,
                spline: CubicSpline::natural(*grid, values)?,
                closed: None,
            })
        })
        .collect()
}

fn is_symmetric(ys: &[f64]) -> bool {
    let m = ys.len();
    let scale = ys.iter().fold(0.0f64, |a, y| a.max(y.abs()));
    (0..m).all(|k| (ys[k] + ys[m - 1 - k]).abs() <= 1e-12 * scale)
}

/// Pairs node `k` with node `m - 1 - k` and returns the non-negative nodes
/// with the sums and differences of their weighted samples.
type Folded = (Vec<f64>, Vec<Vec<C64>>, Vec<Vec<C64>>);

fn fold_symmetric(ys: &[f64], g_re: &[Vec<f64>], g_im: &[Vec<f64>]) -> Folded {
    let m = ys.len();
    let pairs = m.div_ceil(2);
    let nodes: Vec<f64> = (0..pairs).map(|k| ys[m - 1 - k]).collect();
    let mut sums = Vec::with_capacity(g_re.len());
    let mut diffs = Vec::with_capacity(g_re.len());
    for (re, im) in g_re.iter().zip(g_im) {
        let g = |k: usize| C64::new(re[k], im[k]);
        let (mut s, mut d) = (Vec::with_capacity(pairs), Vec::with_capacity(pairs));
        for k in 0..pairs {
            let (pos, neg) = (m - 1 - k, k);
            if pos == neg {
                s.push(g(pos));
                d.push(C64::new(0.0, 0.0));
            } else {
                s.push(g(pos) + g(neg));
                d.push(g(pos) - g(neg));
            }
        }
        sums.push(s);
        diffs.push(d);
    }
    (nodes, sums, diffs)
}

/// Value of a kernel at `t` by natural cubic spline.
pub fn spline_eval(kernel: &TimeKernel, t: f64) -> Result<C64> {
    kernel.spline_eval(t)
}

/// How [`dual_kernels`] obtains the time-domain duals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelStrategy {
    /// Closed-form time kernels when the scheme has them; otherwise the
    /// inverse transform of the closed-form spectra when available; otherwise
    /// of the grid samples.
    Auto,
    /// Inverse transform of the closed-form spectra (trapezoid rule).
    QuadratureOfClosedForm,
    /// Inverse transform of the grid samples (midpoint rule).
    QuadratureOfSamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelOptions {
    pub strategy: KernelStrategy,
    pub knot_spacing: f64,
    pub quadrature_nodes: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            strategy: KernelStrategy::Auto,
            knot_spacing: DEFAULT_KNOT_SPACING,
            quadrature_nodes: DEFAULT_QUADRATURE_NODES,
        }
    }
}

/// Kernel half-width needed to evaluate `phi*(x - k t_o)` for `|x| <= window`
/// and `|k| <= k_max`.
pub fn kernel_half_width(window: f64, k_max: usize, t_o: f64) -> f64 {
    window + k_max as f64 * t_o
}

/// Time-domain duals of a [`DualFamily`] on `[-half_width, half_width]`.
pub fn dual_kernels(duals: &DualFamily, half_width: f64, options: &KernelOptions) -> Result<Vec<TimeKernel>> {
    // One extra knot keeps evaluations at exactly +-half_width inside the grid
    // despite rounding in x - k t_o.
    let grid = TimeGrid::symmetric(half_width + options.knot_spacing, options.knot_spacing)?;
    let scheme = match &duals.closed_form {
        Some(ClosedForm::Scheme(cf)) => Some(cf),
        _ => None,
    };
    match (options.strategy, scheme) {
        (KernelStrategy::Auto, Some(cf)) if cf.has_time_form() => {
            (0..cf.n_generators()).map(|i| TimeKernel::closed_form(cf, i, grid)).collect()
        }
        (KernelStrategy::Auto | KernelStrategy::QuadratureOfClosedForm, Some(cf)) => {
            inverse_ft(&SampledSpectrum::from_scheme(cf, options.quadrature_nodes)?, &grid)
        }
        (KernelStrategy::QuadratureOfClosedForm, None) => Err(Error::MissingDualEvaluator(
            "no closed-form spectra attached to these duals".into(),
        )),
        (KernelStrategy::Auto | KernelStrategy::QuadratureOfSamples, _) => {
            inverse_ft(&SampledSpectrum::from_duals(duals)?, &grid)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::SchemeTag;
    use crate::spectral::{sinc, BandSpec};

    fn indicator_spectrum(m: usize) -> SampledSpectrum {
        SampledSpectrum::from_piecewise(&[-1.0, 1.0], m, 1, |_, _| vec![C64::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn indicator_transform_is_sinc() {
        let grid = TimeGrid::symmetric(20.0, 0.01).unwrap();
        let k = inverse_ft(&indicator_spectrum(2048), &grid).unwrap();
        let c = (2.0 / std::f64::consts::PI).sqrt();
        assert!((k[0].values()[grid.len / 2].re - c).abs() < 1e-13);
        for (i, t) in grid.points().into_iter().enumerate().step_by(37) {
            let v = k[0].values()[i];
            // Trapezoid error for a constant times e^{itx}: t^2 dx^2 / 12 relative.
            assert!((v.re - c * sinc(t)).abs() < 2e-6, "t={t}");
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_transform_is_sinc_squared() {
        let s = SampledSpectrum::from_piecewise(&[-1.0, 0.0, 1.0], 2048, 1, |_, y| vec![C64::new(1.0 - y.abs(), 0.0)]).unwrap();
        let grid = TimeGrid::symmetric(10.0, 0.01).unwrap();
        let k = inverse_ft(&s, &grid).unwrap();
        let r = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((k[0].values()[grid.len / 2].re - r).abs() < 1e-14);
        for (i, t) in grid.points().into_iter().enumerate() {
            assert!((k[0].values()[i].re - r * sinc(t / 2.0).powi(2)).abs() < 1e-6);
        }
    }

    #[test]
    fn asymmetric_band_uses_the_general_path() {
        let s = SampledSpectrum::from_piecewise(&[-1.0, 2.0], 4096, 1, |_, _| vec![C64::new(1.0, 0.0)]).unwrap();
        let grid = TimeGrid::symmetric(8.0, 0.05).unwrap();
        let k = inverse_ft(&s, &grid).unwrap();
        let r = INV_SQRT_2PI;
        for (n, t) in grid.points().into_iter().enumerate() {
            let exact = if t == 0.0 {
                C64::new(3.0 * r, 0.0)
            } else {
                (C64::from_polar(1.0, 2.0 * t) - C64::from_polar(1.0, -t)) / C64::new(0.0, t) * r
            };
            assert!((k[0].values()[n] - exact).norm() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn odd_imaginary_spectrum_gives_odd_real_kernel() {
        let s = SampledSpectrum::from_piecewise(&[-1.0, 1.0], 4096, 1, |_, y| vec![C64::new(0.0, y)]).unwrap();
        let grid = TimeGrid::symmetric(10.0, 0.01).unwrap();
        let k = inverse_ft(&s, &grid).unwrap();
        let c = (2.0 / std::f64::consts::PI).sqrt();
        for (n, t) in grid.points().into_iter().enumerate() {
            let v = k[0].values()[n];
            let exact = if t == 0.0 { 0.0 } else { c * (t.cos() / t - t.sin() / (t * t)) };
            assert!((v.re - exact).abs() < 1e-6 && v.im.abs() < 1e-12, "t={t}");
            assert_eq!(v.re, -k[0].values()[grid.len - 1 - n].re);
        }
    }

    #[test]
    fn second_order_convergence() {
        let grid = TimeGrid::symmetric(5.0, 0.5).unwrap();
        let err = |m: usize| {
            let k = inverse_ft(&indicator_spectrum(m), &grid).unwrap();
            let c = (2.0 / std::f64::consts::PI).sqrt();
            grid.points()
                .iter()
                .enumerate()
                .map(|(i, &t)| (k[0].values()[i].re - c * sinc(t)).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(1024), err(2048));
        assert!(e1 / e2 >= 3.0, "{e1} / {e2}");
    }

    #[test]
    fn misaligned_breakpoints_rejected() {
        let mut s = indicator_spectrum(2048);
        s.breakpoints.push(0.3);
        let grid = TimeGrid::symmetric(1.0, 0.1).unwrap();
        assert!(matches!(inverse_ft(&s, &grid), Err(Error::NotBreakpointAligned(_))));
        let s = indicator_spectrum(100);
        assert!(inverse_ft(&s, &grid).is_err());
    }

    #[test]
    fn spline_exact_at_knots_and_accurate_between() {
        let grid = TimeGrid::symmetric(20.0, 0.01).unwrap();
        let f = |t: f64| sinc(t / 2.0).powi(2);
        let values: Vec<C64> = grid.points().into_iter().map(|t| C64::new(f(t), 0.0)).collect();
        let sp = CubicSpline::natural(grid, values.clone()).unwrap();
        for k in (0..grid.len).step_by(101) {
            assert_eq!(sp.eval(grid.point(k)).unwrap(), values[k]);
        }
        let mut worst = 0.0f64;
        let mut t = -19.9973;
        while t < 19.99 {
            worst = worst.max((sp.eval(t).unwrap().re - f(t)).abs());
            t += 0.00731;
        }
        assert!(worst < 1e-7, "{worst}");
        assert!(matches!(sp.eval(20.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn spline_preserves_symmetry() {
        let grid = TimeGrid::symmetric(3.0, 0.1).unwrap();
        let values: Vec<C64> = grid.points().into_iter().map(|t| C64::new(t, -2.0 * t)).collect();
        let sp = CubicSpline::natural(grid, values).unwrap();
        for t in [0.05, 0.77, 1.234, 2.95] {
            let (a, b) = (sp.eval(t).unwrap(), sp.eval(-t).unwrap());
            assert!((a + b).norm() < 1e-13);
            assert!((a - C64::new(t, -2.0 * t)).norm() < 1e-13);
        }
    }

    #[test]
    fn closed_form_kernel_spline_matches() {
        let spec = BandSpec::from_h(1.0, 2.0 / 3.0).unwrap();
        let cf = SchemeDuals::new(SchemeTag::Derivative3, &spec).unwrap();
        let grid = TimeGrid::symmetric(30.0, 0.01).unwrap();
        for i in 0..3 {
            let k = TimeKernel::closed_form(&cf, i, grid).unwrap();
            let mut t = -29.99;
            while t < 29.99 {
                let d = (k.spline_eval(t).unwrap() - k.eval(t).unwrap()).norm();
                assert!(d < 1e-7, "i={i} t={t} d={d}");
                t += 0.0123;
            }
        }
        let k = TimeKernel::closed_form(&cf, 0, grid).unwrap();
        assert!((k.eval(0.0).unwrap().re * (2.0 * std::f64::consts::PI).sqrt() - 1.0).abs() < 1e-15);
    }
}
