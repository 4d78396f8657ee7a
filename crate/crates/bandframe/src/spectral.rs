//! Regime arithmetic for the band `[-omega, omega]` sampled with step `t_o`.
//!
//! With `h = 2*pi/t_o`, every frequency `y` in the band is written uniquely as
//! `y = x + j*h` with `x` in `[0, h)`. The fiber at `x` collects the values of a
//! spectrum at the points `x + j*h` that fall inside the band. How many such
//! points exist depends only on where `x` sits relative to two breakpoints,
//! which splits `[0, h)` into three open sub-intervals. This module computes
//! that partition, the regime (even or odd number of generators), and the
//! frequency grids used to approximate essential infima and suprema.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shorthand used throughout the crate.
pub type C64 = Complex64;

/// Relative tolerance for snapping `omega/h` onto a regime boundary.
///
/// `h` usually arrives as `2*pi/t_o`, so `h = 2/3` is never exact; without the
/// snap the Riesz-basis case `h = 2*omega/3` would be misread as the even
/// regime with four generators.
const REGIME_SNAP: f64 = 1e-12;

/// Sub-intervals shorter than this fraction of `h` are flagged empty.
const EMPTY_FRACTION: f64 = 1e-12;

/// Points closer than this fraction of `h` to a breakpoint are ambiguous.
const BREAKPOINT_GUARD: f64 = 1e-13;

/// `sin(x)/x`, with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Anything that can be evaluated as a spectrum at a real frequency.
pub trait Spectrum: Sync {
    fn eval(&self, y: f64) -> C64;
}

impl<F> Spectrum for F
where
    F: Fn(f64) -> C64 + Sync,
{
    fn eval(&self, y: f64) -> C64 {
        self(y)
    }
}

/// The greatest integer strictly less than `a`.
///
/// ```
/// use bandframe::spectral::strict_floor;
/// assert_eq!(strict_floor(1.5).unwrap(), 1);
/// assert_eq!(strict_floor(1.0).unwrap(), 0);
/// ```
pub fn strict_floor(a: f64) -> Result<i64> {
    if !a.is_finite() {
        return Err(Error::NonFinite(a));
    }
    if a.fract() == 0.0 {
        return Ok(a as i64 - 1);
    }
    Ok(a.floor() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `omega/ell <= h < omega/(ell - 1/2)`, with `2*ell` generators.
    Even,
    /// `omega/(ell - 1/2) <= h < omega/(ell - 1)`, with `2*ell - 1` generators.
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubIntervalLabel {
    IMinus,
    IMid,
    IPlus,
    KMinus,
    KMid,
    KPlus,
}

/// One open piece of `[0, h)` on which the fiber has a fixed shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubInterval {
    pub label: SubIntervalLabel,
    pub lo: f64,
    pub hi: f64,
    /// Shifts `j` (ascending) with `x + j*h` inside the band for `x` in this piece.
    pub active_shifts: Vec<i64>,
    /// True where the fiber matrix is square (as many rows as generators).
    pub full_rank_expected: bool,
    pub empty: bool,
}

impl SubInterval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        !self.empty && x > self.lo && x < self.hi
    }

    fn new(label: SubIntervalLabel, lo: f64, hi: f64, shifts: std::ops::RangeInclusive<i64>, full: bool, h: f64) -> Self {
        let empty = hi - lo <= EMPTY_FRACTION * h;
        let hi = if empty { lo } else { hi };
        SubInterval {
            label,
            lo,
            hi,
            active_shifts: shifts.collect(),
            full_rank_expected: full,
            empty,
        }
    }
}

/// Regime record for a band edge `omega` and shift step `t_o`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub omega: f64,
    pub t_o: f64,
    pub h: f64,
    pub ell: i64,
    pub n_generators: usize,
    pub regime: Regime,
    pub partition: Vec<SubInterval>,
    /// `h` sits at the left end of its regime, where the reduced pieces vanish
    /// and only square fibers remain.
    pub left_boundary: bool,
}

/// Builds the regime record from the band edge and the time step.
pub fn make_band_spec(omega: f64, t_o: f64) -> Result<BandSpec> {
    BandSpec::new(omega, t_o)
}

impl BandSpec {
    pub fn new(omega: f64, t_o: f64) -> Result<Self> {
        if !t_o.is_finite() {
            return Err(Error::NonFinite(t_o));
        }
        if t_o <= 0.0 {
            return Err(Error::InvalidParameter(format!("t_o must be positive, got {t_o}")));
        }
        Self::build(omega, 2.0 * std::f64::consts::PI / t_o, t_o)
    }

    /// Same as [`BandSpec::new`] but parameterized by `h` directly.
    pub fn from_h(omega: f64, h: f64) -> Result<Self> {
        if !h.is_finite() {
            return Err(Error::NonFinite(h));
        }
        if h <= 0.0 {
            return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
        }
        Self::build(omega, h, 2.0 * std::f64::consts::PI / h)
    }

    fn build(omega: f64, h: f64, t_o: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::NonFinite(omega));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        let mut ratio = omega / h;
        let twice = (2.0 * ratio).round();
        let snapped = (2.0 * ratio - twice).abs() <= REGIME_SNAP * 2.0 * ratio;
        if snapped {
            ratio = twice / 2.0;
        }
        if ratio <= 0.5 {
            return Err(Error::DegenerateRegime { omega, h });
        }
        let ell = strict_floor(ratio)? + 1;
        let l = ell as f64;
        let regime = if ratio > l - 0.5 { Regime::Even } else { Regime::Odd };
        let left_boundary = snapped
            && match regime {
                Regime::Even => ratio == l,
                Regime::Odd => ratio == l - 0.5,
            };

        // a = ell*h - omega and b = omega - (ell-1)*h; at a left boundary they
        // are pinned to their exact values so the reduced pieces vanish.
        let (a, b) = match (regime, left_boundary) {
            (Regime::Even, true) => (0.0, h),
            (Regime::Odd, true) => (0.5 * h, 0.5 * h),
            _ => ((l * h - omega).clamp(0.0, h), (omega - (l - 1.0) * h).clamp(0.0, h)),
        };
        use SubIntervalLabel::*;
        let partition = match regime {
            Regime::Even => vec![
                SubInterval::new(IMinus, 0.0, a, -(ell - 1)..=ell - 1, false, h),
                SubInterval::new(IMid, a, b, -ell..=ell - 1, true, h),
                SubInterval::new(IPlus, b, h, -ell..=ell - 2, false, h),
            ],
            Regime::Odd => vec![
                SubInterval::new(KMinus, 0.0, b, -(ell - 1)..=ell - 1, true, h),
                SubInterval::new(KMid, b, a, -(ell - 1)..=ell - 2, false, h),
                SubInterval::new(KPlus, a, h, -ell..=ell - 2, true, h),
            ],
        };
        let n_generators = match regime {
            Regime::Even => 2 * ell as usize,
            Regime::Odd => 2 * ell as usize - 1,
        };
        Ok(BandSpec {
            omega,
            t_o,
            h,
            ell,
            n_generators,
            regime,
            partition,
            left_boundary,
        })
    }

    /// Index of the sub-interval containing `x`, after reducing `x` modulo `h`.
    pub fn locate(&self, x: f64) -> Result<usize> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        let xr = x.rem_euclid(self.h);
        let guard = BREAKPOINT_GUARD * self.h;
        for (i, s) in self.partition.iter().enumerate() {
            if !s.empty && xr > s.lo + guard && xr < s.hi - guard {
                return Ok(i);
            }
        }
        Err(Error::BoundaryAmbiguous { x })
    }

    /// Splits a band frequency `y` as `x + j*h` with `x` in `[0, h)`.
    pub fn split(&self, y: f64) -> (f64, i64) {
        let j = (y / self.h).floor();
        let mut x = y - j * self.h;
        let mut j = j as i64;
        if x >= self.h {
            x -= self.h;
            j += 1;
        } else if x < 0.0 {
            x += self.h;
            j -= 1;
        }
        (x, j)
    }

    /// Sorted breakpoints of the band pieces: every translate `lo + j*h` of a
    /// sub-interval endpoint that lies in `[-omega, omega]`.
    pub fn band_breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![-self.omega, self.omega];
        for s in self.partition.iter().filter(|s| !s.empty) {
            for &j in &s.active_shifts {
                for e in [s.lo, s.hi] {
                    let y = e + j as f64 * self.h;
                    if y > -self.omega && y < self.omega {
                        pts.push(y);
                    }
                }
            }
        }
        dedup_sorted(pts, 1e-12 * self.h)
    }

    /// Number of nonempty sub-intervals whose fiber is reduced.
    pub fn has_reduced_pieces(&self) -> bool {
        self.partition.iter().any(|s| !s.empty && !s.full_rank_expected)
    }
}

pub(crate) fn dedup_sorted(mut pts: Vec<f64>, tol: f64) -> Vec<f64> {
    pts.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last() {
            Some(&q) if (p - q).abs() <= tol => {}
            _ => out.push(p),
        }
    }
    out
}

/// `h * sum_j f(x + j h) * conj(g(x + j h))` over the shifts landing in the band.
pub fn bracket(fhat: &dyn Spectrum, ghat: &dyn Spectrum, x: f64, spec: &BandSpec) -> C64 {
    let (lo, hi) = shift_range(x, spec);
    let mut acc = C64::new(0.0, 0.0);
    for j in lo..=hi {
        let y = x + j as f64 * spec.h;
        if y.abs() <= spec.omega {
            acc += fhat.eval(y) * ghat.eval(y).conj();
        }
    }
    acc * spec.h
}

/// Inclusive range of shifts that could place `x + j*h` inside the band.
fn shift_range(x: f64, spec: &BandSpec) -> (i64, i64) {
    let lo = ((-spec.omega - x) / spec.h).floor() as i64;
    let hi = ((spec.omega - x) / spec.h).ceil() as i64;
    (lo, hi)
}

/// The column segment `(sqrt(h) * fhat(x + j h))_j` over the active shifts of `sub`.
pub fn fiber_vector(fhat: &dyn Spectrum, x: f64, sub: &SubInterval, spec: &BandSpec) -> Result<Vec<C64>> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    let guard = BREAKPOINT_GUARD * spec.h;
    if sub.empty || x <= sub.lo + guard || x >= sub.hi - guard {
        return Err(Error::BoundaryAmbiguous { x });
    }
    let s = spec.h.sqrt();
    Ok(sub
        .active_shifts
        .iter()
        .map(|&j| fhat.eval(x + j as f64 * spec.h) * s)
        .collect())
}

/// A node of the band grid: frequency `y = x + shift*h` with `x` the fiber node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandNode {
    pub y: f64,
    /// Index into [`FrequencyGrid::nodes`].
    pub fiber: usize,
    /// Row of the fiber matrix (position of `shift` in the active shifts).
    pub row: usize,
    pub shift: i64,
}

/// Fiber abscissae in `[0, h)`, allocated per sub-interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub spec: BandSpec,
    pub nodes: Vec<f64>,
    /// Sub-interval index of each node.
    pub node_sub: Vec<usize>,
    /// Fractional position of a node inside its cell: node `i` of a piece of
    /// length `L` with `n` nodes sits at `lo + (i + offset) * L / n`.
    pub offset: f64,
}

pub const DEFAULT_FIBER_NODES: usize = 4096;
pub const MIN_NODES_PER_PIECE: usize = 16;

impl FrequencyGrid {
    /// Midpoint nodes, `total` in all (approximately), at least 16 per nonempty piece.
    ///
    /// Mirror-image pieces (`x -> h - x` maps the first onto the third) get
    /// the same count, which keeps the band grid symmetric about zero.
    pub fn new(spec: &BandSpec, total: usize) -> Result<Self> {
        if total == 0 {
            return Err(Error::InvalidParameter("grid needs at least one node".into()));
        }
        let h = spec.h;
        let side_len = spec.partition[0].len();
        let count = |len: f64| -> usize { ((total as f64 * len / h).round() as usize).max(MIN_NODES_PER_PIECE) };
        let offset = 0.5;
        let mut nodes = Vec::with_capacity(total + 3 * MIN_NODES_PER_PIECE);
        let mut node_sub = Vec::with_capacity(nodes.capacity());
        for (i, s) in spec.partition.iter().enumerate() {
            if s.empty {
                continue;
            }
            let n = if i == 1 { count(s.len()) } else { count(side_len) };
            let step = s.len() / n as f64;
            for k in 0..n {
                nodes.push(s.lo + (k as f64 + offset) * step);
                node_sub.push(i);
            }
        }
        Ok(FrequencyGrid {
            spec: spec.clone(),
            nodes,
            node_sub,
            offset,
        })
    }

    pub fn with_default_size(spec: &BandSpec) -> Result<Self> {
        Self::new(spec, DEFAULT_FIBER_NODES)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn sub_interval(&self, node: usize) -> &SubInterval {
        &self.spec.partition[self.node_sub[node]]
    }

    /// All `(fiber, shift)` pairs re-expressed as band frequencies, sorted by `y`.
    pub fn band_nodes(&self) -> Vec<BandNode> {
        let h = self.spec.h;
        let mut out = Vec::new();
        for (fiber, &x) in self.nodes.iter().enumerate() {
            let sub = self.sub_interval(fiber);
            for (row, &shift) in sub.active_shifts.iter().enumerate() {
                out.push(BandNode {
                    y: x + shift as f64 * h,
                    fiber,
                    row,
                    shift,
                });
            }
        }
        out.sort_by(|a, b| a.y.total_cmp(&b.y));
        out
    }
}
