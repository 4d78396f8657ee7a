//! Multi-channel sampling and reconstruction.
//!
//! Channel `j` of a family samples `sqrt(2 pi) * F^{-1}(conj(phi_hat_j) f_hat)`
//! at the points `k t_o`; these numbers are the frame coefficients
//! `<f, tau_{-k t_o} phi_j>`, so that
//!
//! ```text
//! f(x) = sum_k sum_j <f, tau_{-k t_o} phi_j> phi*_j(x - k t_o).
//! ```
//!
//! For the builtin schemes the samples are values of `f`, `f'`, `f''` or the
//! Hilbert transform, and the coefficient is a signed `sqrt(2 pi)` multiple
//! of that value. The classical interpolation series at the Riesz points are
//! provided as independent oracles.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dual::DualFamily;
use crate::error::{Error, Result};
use crate::family::{GeneratorFamily, SchemeTag};
use crate::kernel::{dual_kernels, kernel_half_width, KernelOptions, TimeKernel};
use crate::quadrature::GaussLegendre;
use crate::spectral::{sinc, C64};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Builtin test signals, band-limited to `[-omega, omega]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignalKind {
    /// `f_hat = (1 - |x|/omega)_+`, so `f(t) = (omega / sqrt(2 pi)) sinc^2(omega t / 2)`.
    SincSquared,
    Zero,
}

impl std::str::FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sinc2" | "sinc-squared" | "sinc^2" => Ok(SignalKind::SincSquared),
            "zero" => Ok(SignalKind::Zero),
            _ => Err(Error::InvalidParameter(format!("unknown test signal '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSignal {
    pub kind: SignalKind,
    pub omega: f64,
}

/// `g(t) = 2 (1 - cos t) / t^2` and its first two derivatives.
///
/// Below `|t| = 1` the closed forms lose digits to cancellation, so the
/// Taylor series `sum_k 2 (-1)^k t^{2k} / (2k+2)!` is used instead.
fn g_derivatives(t: f64) -> [f64; 3] {
    if t.abs() < 1.0 {
        let mut out = [0.0; 3];
        // term_k = 2 (-1)^k / (2k+2)!
        let mut term = 1.0;
        for k in 0..14 {
            let kk = 2 * k;
            out[0] += term * t.powi(kk as i32);
            if k >= 1 {
                out[1] += term * kk as f64 * t.powi(kk as i32 - 1);
                out[2] += term * (kk * (kk - 1)) as f64 * t.powi(kk as i32 - 2);
            }
            term *= -1.0 / (((kk + 3) * (kk + 4)) as f64);
        }
        out
    } else {
        let (s, c) = t.sin_cos();
        let one_minus_cos = 2.0 * (0.5 * t).sin().powi(2);
        let (t2, t3, t4) = (t * t, t * t * t, t * t * t * t);
        [
            2.0 * one_minus_cos / t2,
            2.0 * s / t2 - 4.0 * one_minus_cos / t3,
            2.0 * c / t2 - 8.0 * s / t3 + 12.0 * one_minus_cos / t4,
        ]
    }
}

impl TestSignal {
    pub fn sinc_squared(omega: f64) -> Self {
        TestSignal {
            kind: SignalKind::SincSquared,
            omega,
        }
    }

    pub fn zero(omega: f64) -> Self {
        TestSignal {
            kind: SignalKind::Zero,
            omega,
        }
    }

    pub fn new(kind: SignalKind, omega: f64) -> Self {
        TestSignal { kind, omega }
    }

    pub fn spectrum(&self, x: f64) -> f64 {
        match self.kind {
            SignalKind::SincSquared => (1.0 - x.abs() / self.omega).max(0.0),
            SignalKind::Zero => 0.0,
        }
    }

    pub fn spectrum_breakpoints(&self) -> Vec<f64> {
        vec![-self.omega, 0.0, self.omega]
    }

    /// `f`, `f'` and `f''` at `t`, in closed form.
    pub fn derivatives(&self, t: f64) -> [f64; 3] {
        match self.kind {
            SignalKind::SincSquared => {
                let w = self.omega;
                let g = g_derivatives(w * t);
                let c = w / SQRT_2PI;
                [c * g[0], c * w * g[1], c * w * w * g[2]]
            }
            SignalKind::Zero => [0.0; 3],
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.derivatives(t)[0]
    }

    /// `(2 pi)^{-1/2} * integral of m(x) f_hat(x) e^{i t x}` over the band,
    /// by Gauss-Legendre panels between the spectrum breakpoints.
    pub fn multiplier_transform(&self, t: f64, m: impl Fn(f64) -> C64, extra_breakpoints: &[f64]) -> C64 {
        if self.kind == SignalKind::Zero {
            return C64::new(0.0, 0.0);
        }
        let mut pts = self.spectrum_breakpoints();
        pts.extend(extra_breakpoints.iter().copied().filter(|b| b.abs() < self.omega));
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let gl = GaussLegendre::default();
        gl.integrate_pieces(&pts, t, |x| m(x) * self.spectrum(x) * C64::from_polar(1.0, t * x)) / SQRT_2PI
    }

    /// `f(t)` by quadrature of the spectrum.
    pub fn value_quadrature(&self, t: f64) -> f64 {
        self.multiplier_transform(t, |_| C64::new(1.0, 0.0), &[]).re
    }

    /// Hilbert transform, multiplier `-i sign(x)`, by quadrature.
    pub fn hilbert(&self, t: f64) -> f64 {
        self.multiplier_transform(t, |x| C64::new(0.0, -crate::family::sign(x)), &[]).re
    }

    /// Energy `||f||^2 = ||f_hat||^2`.
    pub fn energy(&self) -> f64 {
        match self.kind {
            SignalKind::SincSquared => 2.0 * self.omega / 3.0,
            SignalKind::Zero => 0.0,
        }
    }
}

/// Channel samples `raw[j][k + K]` for `k = -K..=K`.
///
/// The frame coefficient of channel `j` at `k` is `weights[j] * raw[j][k + K]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSamples {
    pub scheme: Option<SchemeTag>,
    pub signal: TestSignal,
    pub t_o: f64,
    pub k_max: usize,
    pub raw: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// Complex coefficients for families without a builtin scheme, where
    /// channel values need not be real.
    pub complex: Option<Vec<Vec<C64>>>,
}

impl ChannelSamples {
    pub fn n_channels(&self) -> usize {
        self.weights.len()
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let k = self.k_max as i64;
        (-k..=k).map(|n| n as f64 * self.t_o).collect()
    }

    /// Frame coefficient of channel `j` at shift index `k`.
    pub fn coefficient(&self, j: usize, k: i64) -> C64 {
        let idx = (k + self.k_max as i64) as usize;
        match &self.complex {
            Some(c) => c[j][idx],
            None => C64::new(self.weights[j] * self.raw[j][idx], 0.0),
        }
    }

    /// `raw[j]` as a slice indexed from `-K`.
    pub fn channel(&self, j: usize) -> &[f64] {
        &self.raw[j]
    }
}

/// Samples `signal` through the channels of `family`.
///
/// Builtin schemes read closed-form values of `f`, `f'`, `f''` and a
/// quadrature Hilbert transform; other families fall back to
/// [`channel_samples_quadrature`].
pub fn channel_samples(signal: &TestSignal, family: &GeneratorFamily, k_max: usize) -> Result<ChannelSamples> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let Some(tag) = family.scheme else {
        return channel_samples_quadrature(signal, family, k_max);
    };
    tag.admissible(&family.spec)?;
    let t_o = family.spec.t_o;
    let k = k_max as i64;
    let times: Vec<f64> = (-k..=k).map(|n| n as f64 * t_o).collect();
    let (raw, weights) = match tag {
        SchemeTag::Hilbert => (
            vec![
                times.iter().map(|&t| signal.value(t)).collect(),
                times.par_iter().map(|&t| signal.hilbert(t)).collect(),
            ],
            vec![SQRT_2PI, -SQRT_2PI],
        ),
        SchemeTag::Derivative2 | SchemeTag::Derivative3 => {
            let n = if tag == SchemeTag::Derivative2 { 2 } else { 3 };
            let d: Vec<[f64; 3]> = times.iter().map(|&t| signal.derivatives(t)).collect();
            let raw = (0..n).map(|j| d.iter().map(|v| v[j]).collect()).collect();
            let weights = (0..n).map(|j| if j % 2 == 0 { SQRT_2PI } else { -SQRT_2PI }).collect();
            (raw, weights)
        }
    };
    Ok(ChannelSamples {
        scheme: Some(tag),
        signal: *signal,
        t_o,
        k_max,
        raw,
        weights,
        complex: None,
    })
}

/// Frame coefficients `integral of f_hat conj(phi_hat_j) e^{i k t_o x}` for
/// any family, by Gauss-Legendre quadrature between breakpoints.
pub fn channel_samples_quadrature(signal: &TestSignal, family: &GeneratorFamily, k_max: usize) -> Result<ChannelSamples> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let t_o = family.spec.t_o;
    let k = k_max as i64;
    let bps = family.breakpoints();
    let coeffs: Vec<Vec<C64>> = (0..family.len())
        .map(|j| {
            let gen = &family.generators[j];
            (-k..=k)
                .into_par_iter()
                .map(|n| {
                    let t = n as f64 * t_o;
                    signal.multiplier_transform(t, |x| gen.multiplier.eval(x).conj(), &bps) * SQRT_2PI
                })
                .collect()
        })
        .collect();
    Ok(ChannelSamples {
        scheme: None,
        signal: *signal,
        t_o,
        k_max,
        raw: coeffs.iter().map(|c| c.iter().map(|z| z.re).collect()).collect(),
        weights: vec![1.0; family.len()],
        complex: Some(coeffs),
    })
}

/// Evaluation points `lo, lo + step, ..., hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Default for EvalGrid {
    fn default() -> Self {
        EvalGrid {
            lo: -10.0,
            hi: 10.0,
            step: 0.01,
        }
    }
}

impl EvalGrid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi && step > 0.0) {
            return Err(Error::InvalidParameter(format!("bad evaluation window {lo}:{hi} step {step}")));
        }
        Ok(EvalGrid { lo, hi, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }

    pub fn half_width(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub scheme: Option<SchemeTag>,
    pub omega: f64,
    pub h: f64,
    pub t_o: f64,
    pub k_max: usize,
    pub grid: EvalGrid,
    pub eval_points: Vec<f64>,
    pub reconstructed: Vec<f64>,
    pub reference: Vec<f64>,
    pub max_abs_error: f64,
    pub rms_error: f64,
    /// Largest imaginary part met in the series; zero for real signals up to rounding.
    pub max_imaginary: f64,
}

impl ReconstructionReport {
    pub fn summary(&self) -> String {
        format!("max_abs_err={:.6e}, rms={:.6e}", self.max_abs_error, self.rms_error)
    }
}

/// Builds the time-domain duals and evaluates the reconstruction series.
pub fn reconstruct(
    samples: &ChannelSamples,
    duals: &DualFamily,
    grid: &EvalGrid,
    options: &KernelOptions,
) -> Result<ReconstructionReport> {
    let t_o = duals.spec.t_o;
    if (t_o - samples.t_o).abs() > 1e-12 * t_o || duals.n_generators() != samples.n_channels() {
        return Err(Error::DimensionMismatch("samples and duals describe different schemes".into()));
    }
    let kernels = dual_kernels(duals, kernel_half_width(grid.half_width(), samples.k_max, t_o), options)?;
    let mut report = reconstruct_with_kernels(samples, &kernels, grid)?;
    report.omega = duals.spec.omega;
    report.h = duals.spec.h;
    Ok(report)
}

/// `f_rec(x) = sum_{k=-K..K} sum_j c_j(k) phi*_j(x - k t_o)`, with `k`
/// ascending and channels innermost at every point.
pub fn reconstruct_with_kernels(
    samples: &ChannelSamples,
    kernels: &[TimeKernel],
    grid: &EvalGrid,
) -> Result<ReconstructionReport> {
    if kernels.len() != samples.n_channels() {
        return Err(Error::ArityMismatch {
            expected: samples.n_channels(),
            got: kernels.len(),
        });
    }
    let x = grid.points();
    let k = samples.k_max as i64;
    let coeffs: Vec<Vec<C64>> = (-k..=k)
        .map(|n| (0..kernels.len()).map(|j| samples.coefficient(j, n)).collect())
        .collect();
    let values: Vec<C64> = x
        .par_iter()
        .map(|&xi| {
            let mut acc = C64::new(0.0, 0.0);
            for (idx, n) in (-k..=k).enumerate() {
                let t = xi - n as f64 * samples.t_o;
                for (j, ker) in kernels.iter().enumerate() {
                    acc += coeffs[idx][j] * ker.eval(t)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let reconstructed: Vec<f64> = values.iter().map(|z| z.re).collect();
    let reference: Vec<f64> = x.iter().map(|&t| samples.signal.value(t)).collect();
    let (max_abs_error, rms_error) = error_norms(&reference, &reconstructed);
    Ok(ReconstructionReport {
        scheme: samples.scheme,
        omega: samples.signal.omega,
        h: 2.0 * PI / samples.t_o,
        t_o: samples.t_o,
        k_max: samples.k_max,
        grid: *grid,
        eval_points: x,
        reconstructed,
        reference,
        max_abs_error,
        rms_error,
        max_imaginary: values.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
    })
}

fn error_norms(reference: &[f64], approx: &[f64]) -> (f64, f64) {
    let n = reference.len().max(1) as f64;
    let mut max = 0.0f64;
    let mut sq = 0.0;
    for (r, a) in reference.iter().zip(approx) {
        let e = (a - r).abs();
        max = max.max(e);
        sq += e * e;
    }
    (max, (sq / n).sqrt())
}

/// Sample index range `-K..=K` of equal-length slices.
fn check_samples(slices: &[&[f64]]) -> Result<i64> {
    let len = slices[0].len();
    if len % 2 == 0 || slices.iter().any(|s| s.len() != len) {
        return Err(Error::DimensionMismatch("sample sequences must share an odd length 2K+1".into()));
    }
    Ok((len / 2) as i64)
}

/// Linden's three-channel series at the points `3 n pi / omega`:
///
/// ```text
/// f(x) = (27/omega^3) sin^3(omega x/3) sum_n (-1)^n [ f_n/u^3 + (omega^2/18) f_n/u
///        + f'_n/u^2 + f''_n/(2u) ],   u = x - 3 n pi / omega.
/// ```
///
/// Terms with `|u| < 1` are evaluated in the equivalent form
/// `sinc^3(omega u/3) [f_n (1 + omega^2 u^2/18) + f'_n u + f''_n u^2/2]`
/// which has no removable singularity.
pub fn linden_series(f: &[f64], f1: &[f64], f2: &[f64], x: f64, omega: f64) -> Result<f64> {
    let k = check_samples(&[f, f1, f2])?;
    let step = 3.0 * PI / omega;
    let s3 = (omega * x / 3.0).sin().powi(3);
    let mut acc = 0.0;
    for (idx, n) in (-k..=k).enumerate() {
        let u = x - n as f64 * step;
        let (a, b, c) = (f[idx], f1[idx], f2[idx]);
        if u.abs() < 1.0 {
            let s = sinc(omega * u / 3.0).powi(3);
            acc += s * (a * (1.0 + omega * omega * u * u / 18.0) + b * u + 0.5 * c * u * u);
        } else {
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            let bracket = a / (u * u * u) + omega * omega / 18.0 * a / u + b / (u * u) + c / (2.0 * u);
            acc += 27.0 / omega.powi(3) * s3 * sgn * bracket;
        }
    }
    Ok(acc)
}

/// Jagerman and Fogel's derivative series at the points `2 k pi / omega`:
/// `sum_k [f_k sinc^2(omega u/2) + (2/omega) f'_k sin(omega u/2) sinc(omega u/2)]`.
pub fn jagerman_fogel(f: &[f64], f1: &[f64], x: f64, omega: f64) -> Result<f64> {
    let k = check_samples(&[f, f1])?;
    let step = 2.0 * PI / omega;
    let mut acc = 0.0;
    for (idx, n) in (-k..=k).enumerate() {
        let half = 0.5 * omega * (x - n as f64 * step);
        let s = sinc(half);
        acc += f[idx] * s * s + 2.0 / omega * f1[idx] * half.sin() * s;
    }
    Ok(acc)
}

/// Hilbert transform sampling series with `t_o = 2 pi / h`:
/// `(omega/h) sum_k [f_k cos(omega u/2) - Hf_k sin(omega u/2)] sinc(omega u/2)`.
pub fn hilbert_reconstruct_formula(f: &[f64], hf: &[f64], x: f64, omega: f64, h: f64) -> Result<f64> {
    let k = check_samples(&[f, hf])?;
    let step = 2.0 * PI / h;
    let mut acc = 0.0;
    for (idx, n) in (-k..=k).enumerate() {
        let half = 0.5 * omega * (x - n as f64 * step);
        let (s, c) = half.sin_cos();
        acc += (f[idx] * c - hf[idx] * s) * sinc(half);
    }
    Ok(omega / h * acc)
}
