//! Canonical dual generators.
//!
//! On each fiber the dual pre-Gramian solves `J J* J_dual = J`. Three routes
//! compute it and are expected to agree:
//!
//! - [`duals_pointwise`] inverts `J*` (square fibers) or takes the
//!   Moore-Penrose inverse of the reduced adjoint (reduced fibers);
//! - [`duals_closed_form`] evaluates the cross-product formulas for two, three
//!   and four generators directly on the band;
//! - [`duals_riesz`] applies the conjugated inverse Gramian, which is only
//!   valid for Riesz bases.
//!
//! [`builtin_scheme`] adds explicit formulas for the value/derivative and
//! value/Hilbert schemes, in frequency and, where they exist, in time.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{sign, GeneratorFamily, SchemeTag};
use crate::frame::{check_frame, fiber_matrix, FrameVerdict, Thresholds};
use crate::matrix::{cofactor_inverse, cross_product, mp_inverse_tall, ComplexMatrix};
use crate::quadrature::gauss_legendre;
use crate::spectral::{dedup_sorted, sinc, BandNode, BandSpec, FrequencyGrid, Regime, C64};

/// Largest nodewise gap tolerated between stored samples and a closed form.
pub const CLOSED_FORM_AGREEMENT: f64 = 1e-9;

/// Dual fiber from a generator fiber: `(J*)^{-1}` or `(J*)^+`.
pub fn dual_fiber(j: &ComplexMatrix, full_rank: bool) -> Result<ComplexMatrix> {
    let js = j.adjoint();
    if full_rank {
        cofactor_inverse(&js)
    } else {
        mp_inverse_tall(&js)
    }
}

/// Dual spectra at an arbitrary band frequency by the pointwise route.
///
/// Fails with [`Error::BoundaryAmbiguous`] when `y` reduces onto a breakpoint.
pub fn dual_at(family: &GeneratorFamily, y: f64) -> Result<Vec<C64>> {
    let spec = &family.spec;
    if y.abs() > spec.omega {
        return Ok(vec![C64::new(0.0, 0.0); family.len()]);
    }
    let (x, shift) = spec.split(y);
    let sub = spec.locate(x)?;
    let row = spec.partition[sub]
        .active_shifts
        .iter()
        .position(|&j| j == shift)
        .ok_or(Error::BoundaryAmbiguous { x: y })?;
    let j = fiber_matrix(family, x, sub);
    let d = dual_fiber(&j, spec.partition[sub].full_rank_expected).map_err(|_| Error::SingularFiber { x })?;
    let s = spec.h.sqrt();
    Ok(d.row(row).into_iter().map(|z| z / s).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualMethod {
    Pointwise,
    CrossProduct,
    Riesz,
}

/// Which closed form describes a [`DualFamily`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ClosedForm {
    /// The generic cross-product formulas for this many generators.
    CrossProduct { arity: usize },
    /// Explicit formulas of a builtin scheme.
    Scheme(SchemeDuals),
}

/// Dual spectra sampled on the band nodes of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualFamily {
    pub spec: BandSpec,
    pub grid: FrequencyGrid,
    /// Sorted by frequency.
    pub band_nodes: Vec<BandNode>,
    /// `dual_spectra[i][k]` is the `i`-th dual spectrum at `band_nodes[k]`.
    pub dual_spectra: Vec<Vec<C64>>,
    pub closed_form: Option<ClosedForm>,
    pub method: DualMethod,
}

impl DualFamily {
    pub fn n_generators(&self) -> usize {
        self.dual_spectra.len()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.band_nodes.iter().map(|b| b.y).collect()
    }

    /// Dual pre-Gramian at every fiber node, rebuilt from the band samples.
    pub fn fiber_matrices(&self) -> Vec<ComplexMatrix> {
        let s = self.spec.h.sqrt();
        let n = self.n_generators();
        let mut out: Vec<ComplexMatrix> = (0..self.grid.len())
            .map(|f| ComplexMatrix::zeros(self.grid.sub_interval(f).active_shifts.len(), n))
            .collect();
        for (k, b) in self.band_nodes.iter().enumerate() {
            for i in 0..n {
                out[b.fiber][(b.row, i)] = self.dual_spectra[i][k] * s;
            }
        }
        out
    }

    /// Largest nodewise modulus difference against another family on the same grid.
    pub fn max_discrepancy(&self, other: &DualFamily) -> Result<f64> {
        if self.band_nodes.len() != other.band_nodes.len() || self.n_generators() != other.n_generators() {
            return Err(Error::DimensionMismatch("dual families sampled differently".into()));
        }
        let mut worst = 0.0f64;
        for (a, b) in self.dual_spectra.iter().zip(&other.dual_spectra) {
            for (u, v) in a.iter().zip(b) {
                worst = worst.max((u - v).norm());
            }
        }
        Ok(worst)
    }

    /// Largest gap between the samples and the attached builtin closed form.
    pub fn closed_form_discrepancy(&self) -> Option<f64> {
        let Some(ClosedForm::Scheme(cf)) = &self.closed_form else {
            return None;
        };
        let mut worst = 0.0f64;
        for (k, b) in self.band_nodes.iter().enumerate() {
            let v = cf.eval(b.y).ok()?;
            for (i, z) in v.iter().enumerate() {
                worst = worst.max((z - self.dual_spectra[i][k]).norm());
            }
        }
        Some(worst)
    }

    fn from_band_values(spec: &BandSpec, grid: &FrequencyGrid, nodes: Vec<BandNode>, values: Vec<Vec<C64>>, method: DualMethod, n: usize) -> Self {
        let mut dual_spectra = vec![Vec::with_capacity(nodes.len()); n];
        for v in values {
            for (i, z) in v.into_iter().enumerate() {
                dual_spectra[i].push(z);
            }
        }
        DualFamily {
            spec: spec.clone(),
            grid: grid.clone(),
            band_nodes: nodes,
            dual_spectra,
            closed_form: None,
            method,
        }
    }
}

fn require_frame(family: &GeneratorFamily, grid: &FrequencyGrid) -> Result<FrameVerdict> {
    let report = check_frame(family, grid, &Thresholds::default())?;
    if report.verdict == FrameVerdict::NotFrame {
        return Err(Error::NotFrame(format!("failed conditions {:?}", report.failed)));
    }
    Ok(report.verdict)
}

/// Dual fibers at every grid node, by inversion or pseudoinversion.
pub fn dual_fibers(family: &GeneratorFamily, grid: &FrequencyGrid) -> Result<Vec<ComplexMatrix>> {
    (0..grid.len())
        .into_par_iter()
        .map(|f| {
            let x = grid.nodes[f];
            let sub = grid.node_sub[f];
            let j = fiber_matrix(family, x, sub);
            dual_fiber(&j, grid.spec.partition[sub].full_rank_expected).map_err(|_| Error::SingularFiber { x })
        })
        .collect()
}

/// Duals by solving the fiber equation at each grid node.
pub fn duals_pointwise(family: &GeneratorFamily, grid: &FrequencyGrid) -> Result<DualFamily> {
    require_frame(family, grid)?;
    let fibers = dual_fibers(family, grid)?;
    let s = family.spec.h.sqrt();
    let nodes = grid.band_nodes();
    let values: Vec<Vec<C64>> = nodes
        .iter()
        .map(|b| fibers[b.fiber].row(b.row).into_iter().map(|z| z / s).collect())
        .collect();
    Ok(DualFamily::from_band_values(&family.spec, grid, nodes, values, DualMethod::Pointwise, family.len()))
}

/// `||J - J J* J_dual||_F` at every fiber node.
pub fn fiber_residuals(family: &GeneratorFamily, duals: &DualFamily) -> Result<Vec<f64>> {
    let grid = &duals.grid;
    duals
        .fiber_matrices()
        .iter()
        .enumerate()
        .map(|(f, jd)| {
            let j = fiber_matrix(family, grid.nodes[f], grid.node_sub[f]);
            let jj = j.matmul(&j.adjoint())?.matmul(jd)?;
            Ok(j.sub(&jj)?.frobenius_norm())
        })
        .collect()
}

/// Determinant data of the fiber behind one band node.
struct FiberDets {
    /// `det J*` on square fibers.
    full: Option<C64>,
    /// `det(J J*)` on reduced fibers.
    reduced: Option<C64>,
}

fn fiber_dets(family: &GeneratorFamily, grid: &FrequencyGrid, fiber: usize) -> Result<FiberDets> {
    let j = fiber_matrix(family, grid.nodes[fiber], grid.node_sub[fiber]);
    if grid.sub_interval(fiber).full_rank_expected {
        Ok(FiberDets {
            full: Some(j.adjoint().determinant()?),
            reduced: None,
        })
    } else {
        Ok(FiberDets {
            full: None,
            reduced: Some(j.matmul(&j.adjoint())?.determinant()?),
        })
    }
}

fn shape_mismatch(y: f64) -> Error {
    Error::InvalidParameter(format!("closed-form piece at y = {y} does not match the fiber shape"))
}

fn scaled(v: Vec<C64>, s: C64) -> Vec<C64> {
    v.into_iter().map(|z| z * s).collect()
}

fn conj(v: Vec<C64>) -> Vec<C64> {
    v.into_iter().map(|z| z.conj()).collect()
}

/// Cross-product formula for one band node.
fn cross_product_dual(family: &GeneratorFamily, y: f64, dets: &FiberDets) -> Result<Vec<C64>> {
    let spec = &family.spec;
    let (w, h) = (spec.omega, spec.h);
    let one = C64::new(1.0, 0.0);
    let dfull = |scale: f64| dets.full.map(|d| one * scale / d).ok_or_else(|| shape_mismatch(y));
    let dred = |scale: f64| dets.reduced.map(|d| one * scale / d).ok_or_else(|| shape_mismatch(y));
    match family.len() {
        2 => {
            let p = |j: i64| family.eval_all(y + j as f64 * h);
            let c = |j: i64| conj(p(j));
            if y < w - h {
                Ok(scaled(cross_product(&[c(1)])?, dfull(1.0)?))
            } else if y < h - w {
                let v = p(0);
                let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                Ok(scaled(v, one / (h * n2)))
            } else {
                Ok(scaled(cross_product(&[c(-1)])?, -dfull(1.0)?))
            }
        }
        3 => {
            let p = |j: i64| family.eval_all(y + j as f64 * h);
            let c = |j: i64| conj(p(j));
            let d = || dfull(h.sqrt());
            let du = || dred(h);
            if y < w - 2.0 * h {
                Ok(scaled(cross_product(&[c(1), c(2)])?, d()?))
            } else if y < h - w {
                let wv = cross_product(&[p(1), p(0)])?;
                Ok(scaled(cross_product(&[wv, c(1)])?, du()?))
            } else if y < w - h {
                Ok(scaled(cross_product(&[c(1), c(-1)])?, d()?))
            } else if y < 2.0 * h - w {
                let wv = cross_product(&[p(-1), p(0)])?;
                Ok(scaled(cross_product(&[c(-1), wv])?, -du()?))
            } else {
                Ok(scaled(cross_product(&[c(-2), c(-1)])?, d()?))
            }
        }
        4 => {
            // The formulas live on (0, omega); for y < 0 every translate
            // y + j h is replaced by its mirror y - j h.
            let s = if y < 0.0 { -1.0 } else { 1.0 };
            let a = y.abs();
            let p = |j: i64| family.eval_all(y + s * j as f64 * h);
            let c = |j: i64| conj(p(j));
            let d = || dfull(h);
            let du = || dred(-h * h);
            if a < 2.0 * h - w {
                let wv = cross_product(&[p(-1), p(0), p(1)])?;
                Ok(scaled(cross_product(&[c(-1), wv, c(1)])?, du()?))
            } else if a < w - h {
                Ok(scaled(cross_product(&[c(-2), c(-1), c(1)])?, d()?))
            } else if a < 3.0 * h - w {
                let wo = cross_product(&[p(-2), p(-1), p(0)])?;
                Ok(scaled(cross_product(&[c(-2), c(-1), wo])?, du()?))
            } else {
                Ok(scaled(cross_product(&[c(-3), c(-2), c(-1)])?, -d()?))
            }
        }
        n => Err(Error::InvalidParameter(format!("no closed form for {n} generators"))),
    }
}

/// Duals from the cross-product formulas for 2, 3 or 4 generators.
///
/// The scalar factors use the determinant of the actual fiber at each node,
/// never a symbolic expression, so this route stays independent of
/// [`duals_pointwise`] apart from sharing the generator spectra.
pub fn duals_closed_form(family: &GeneratorFamily, arity: usize, grid: &FrequencyGrid) -> Result<DualFamily> {
    if family.len() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            got: family.len(),
        });
    }
    let spec = &family.spec;
    let ok = match arity {
        2 => spec.regime == Regime::Even && spec.ell == 1,
        3 => spec.regime == Regime::Odd && spec.ell == 2,
        4 => spec.regime == Regime::Even && spec.ell == 2,
        _ => false,
    };
    if !ok {
        return Err(Error::InadmissibleRegime {
            scheme: format!("{arity}-generator closed form"),
            h: spec.h,
            range: match arity {
                2 => "omega <= h < 2*omega",
                3 => "2*omega/3 <= h < omega",
                4 => "omega/2 <= h < 2*omega/3",
                _ => "arity 2, 3 or 4",
            }
            .into(),
        });
    }
    require_frame(family, grid)?;
    let dets: Vec<FiberDets> = (0..grid.len()).map(|f| fiber_dets(family, grid, f)).collect::<Result<_>>()?;
    let nodes = grid.band_nodes();
    let values: Vec<Vec<C64>> = nodes
        .par_iter()
        .map(|b| cross_product_dual(family, b.y, &dets[b.fiber]))
        .collect::<Result<_>>()?;
    let mut out = DualFamily::from_band_values(spec, grid, nodes, values, DualMethod::CrossProduct, arity);
    out.closed_form = Some(ClosedForm::CrossProduct { arity });
    Ok(out)
}

/// Duals of a Riesz basis: `conj(G^{-1})` applied to the generator vector.
pub fn duals_riesz(family: &GeneratorFamily, grid: &FrequencyGrid) -> Result<DualFamily> {
    if require_frame(family, grid)? != FrameVerdict::RieszBasis {
        return Err(Error::NotRiesz);
    }
    let inverses: Vec<ComplexMatrix> = (0..grid.len())
        .into_par_iter()
        .map(|f| {
            let j = fiber_matrix(family, grid.nodes[f], grid.node_sub[f]);
            Ok(j.adjoint().matmul(&j)?.lu_inverse()?.conj())
        })
        .collect::<Result<_>>()?;
    let nodes = grid.band_nodes();
    let n = family.len();
    let values: Vec<Vec<C64>> = nodes
        .iter()
        .map(|b| {
            let phi = family.eval_all(b.y);
            let g = &inverses[b.fiber];
            (0..n).map(|r| (0..n).map(|c| g[(r, c)] * phi[c]).sum()).collect()
        })
        .collect();
    Ok(DualFamily::from_band_values(&family.spec, grid, nodes, values, DualMethod::Riesz, n))
}

/// Explicit dual formulas of a builtin scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeDuals {
    pub tag: SchemeTag,
    pub omega: f64,
    pub h: f64,
    /// `h` at the left end of its regime (Riesz basis).
    pub riesz: bool,
}

/// Rational branch of the three-channel duals on `(omega - 2h, h - omega)`.
/// With `h` replaced by `-h` (and an overall sign flip) it gives the mirror
/// branch on `(omega - h, 2h - omega)`.
fn abc(x: f64, h: f64) -> [C64; 3] {
    let xh = x + h;
    let den = h * h * (1.0 + (2.0 * x + h).powi(2) + x * x * xh * xh);
    [
        C64::new((xh + (2.0 * x + h) * xh * xh) / den, 0.0),
        C64::new(0.0, -(1.0 - x * xh.powi(3)) / den),
        C64::new((h + 2.0 * x + x * xh * xh) / den, 0.0),
    ]
}

impl SchemeDuals {
    pub fn new(tag: SchemeTag, spec: &BandSpec) -> Result<Self> {
        tag.admissible(spec)?;
        Ok(SchemeDuals {
            tag,
            omega: spec.omega,
            h: spec.h,
            riesz: spec.left_boundary,
        })
    }

    pub fn n_generators(&self) -> usize {
        match self.tag {
            SchemeTag::Derivative3 => 3,
            _ => 2,
        }
    }

    /// Sorted breakpoints from `-omega` to `omega`; the formulas are smooth
    /// on each open piece between consecutive entries.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (w, h) = (self.omega, self.h);
        let pts = match self.tag {
            SchemeTag::Hilbert => vec![-w, 0.0, w],
            SchemeTag::Derivative2 => vec![-w, w - h, 0.0, h - w, w],
            SchemeTag::Derivative3 => vec![-w, w - 2.0 * h, h - w, w - h, 2.0 * h - w, w],
        };
        dedup_sorted(pts, 1e-12 * h)
    }

    /// Formula of the piece containing `anchor`, evaluated at `y`.
    ///
    /// Passing a piece midpoint as `anchor` and an endpoint as `y` gives the
    /// one-sided limit at that endpoint.
    pub fn eval_branch(&self, anchor: f64, y: f64) -> Vec<C64> {
        let (w, h) = (self.omega, self.h);
        let i = C64::new(0.0, 1.0);
        match self.tag {
            SchemeTag::Hilbert => {
                let s = sign(anchor);
                vec![C64::new(1.0 / (2.0 * h), 0.0), -i * s / (2.0 * h)]
            }
            SchemeTag::Derivative2 => {
                if anchor.abs() < h - w {
                    let den = h * (1.0 + y * y);
                    vec![C64::new(1.0 / den, 0.0), i * y / den]
                } else {
                    let s = sign(anchor);
                    vec![C64::new((1.0 - s * y / h) / h, 0.0), i * s / (h * h)]
                }
            }
            SchemeTag::Derivative3 => {
                let h3 = h * h * h;
                if anchor < w - 2.0 * h {
                    vec![
                        C64::new((y * y + 3.0 * h * y + 2.0 * h * h) / (2.0 * h3), 0.0),
                        -i * (2.0 * y + 3.0 * h) / (2.0 * h3),
                        C64::new(-1.0 / (2.0 * h3), 0.0),
                    ]
                } else if anchor < h - w {
                    abc(y, h).to_vec()
                } else if anchor < w - h {
                    vec![C64::new((h * h - y * y) / h3, 0.0), i * 2.0 * y / h3, C64::new(1.0 / h3, 0.0)]
                } else if anchor < 2.0 * h - w {
                    abc(y, -h).iter().map(|z| -z).collect()
                } else {
                    vec![
                        C64::new((y * y - 3.0 * h * y + 2.0 * h * h) / (2.0 * h3), 0.0),
                        -i * (2.0 * y - 3.0 * h) / (2.0 * h3),
                        C64::new(-1.0 / (2.0 * h3), 0.0),
                    ]
                }
            }
        }
    }

    /// Value at `y` off the breakpoints; zero outside the band.
    pub fn eval(&self, y: f64) -> Result<Vec<C64>> {
        if y.abs() > self.omega {
            return Ok(vec![C64::new(0.0, 0.0); self.n_generators()]);
        }
        let bps = self.breakpoints();
        let guard = 1e-13 * self.h;
        for w in bps.windows(2) {
            if y > w[0] + guard && y < w[1] - guard {
                return Ok(self.eval_branch(0.5 * (w[0] + w[1]), y));
            }
        }
        Err(Error::BoundaryAmbiguous { x: y })
    }

    /// True when closed-form time-domain duals are known.
    pub fn has_time_form(&self) -> bool {
        match self.tag {
            SchemeTag::Hilbert => true,
            SchemeTag::Derivative2 | SchemeTag::Derivative3 => self.riesz,
        }
    }

    /// Time-domain dual `i` at `t`, when [`Self::has_time_form`] holds.
    pub fn time_value(&self, i: usize, t: f64) -> Option<C64> {
        if !self.has_time_form() || i >= self.n_generators() {
            return None;
        }
        let w = self.omega;
        let r = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let v = match self.tag {
            SchemeTag::Hilbert => {
                let base = (2.0 / std::f64::consts::PI).sqrt() * w / (2.0 * self.h);
                if i == 0 {
                    base * sinc(w * t)
                } else {
                    base * (0.5 * w * t).sin() * sinc(0.5 * w * t)
                }
            }
            SchemeTag::Derivative2 => {
                let s2 = sinc(0.5 * w * t).powi(2);
                if i == 0 {
                    r * s2
                } else {
                    -r * t * s2
                }
            }
            SchemeTag::Derivative3 => {
                let s3 = sinc(w * t / 3.0).powi(3);
                match i {
                    0 => r * (1.0 + w * w * t * t / 18.0) * s3,
                    1 => -r * t * s3,
                    _ => 0.5 * r * t * t * s3,
                }
            }
        };
        Some(C64::new(v, 0.0))
    }
}

/// Generators and duals of a builtin scheme on the default grid.
///
/// The samples come from [`duals_pointwise`]; the attached closed form is
/// checked against them to [`CLOSED_FORM_AGREEMENT`].
pub fn builtin_scheme(tag: SchemeTag, omega: f64, t_o: f64) -> Result<(GeneratorFamily, DualFamily)> {
    let spec = BandSpec::new(omega, t_o)?;
    builtin_scheme_on(tag, &spec, crate::spectral::DEFAULT_FIBER_NODES)
}

/// [`builtin_scheme`] for an existing spec and grid size.
pub fn builtin_scheme_on(tag: SchemeTag, spec: &BandSpec, grid_size: usize) -> Result<(GeneratorFamily, DualFamily)> {
    let family = GeneratorFamily::builtin(tag, spec)?;
    let grid = FrequencyGrid::new(spec, grid_size)?;
    let mut duals = duals_pointwise(&family, &grid)?;
    duals.closed_form = Some(ClosedForm::Scheme(SchemeDuals::new(tag, spec)?));
    let gap = duals.closed_form_discrepancy().unwrap_or(f64::INFINITY);
    if !(gap <= CLOSED_FORM_AGREEMENT) {
        return Err(Error::ClosedFormMismatch(gap));
    }
    Ok((family, duals))
}

/// Largest deviation of `<phi_i, tau_{k t_o} phi*_j>` from `delta_ij delta_k0`
/// over `|k| <= k_max`, by Gauss-Legendre quadrature over the band pieces.
///
/// The duals are evaluated with [`dual_at`] at the quadrature nodes, which lie
/// strictly inside the pieces.
pub fn biorthogonality_defect(family: &GeneratorFamily, k_max: i64) -> Result<f64> {
    let spec = &family.spec;
    let pts = family.breakpoints();
    let freq = k_max as f64 * spec.t_o;
    let (gx, gw) = gauss_legendre(24);
    // Nodes and weights are shared by every (i, j, k); only the phase changes.
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in pts.windows(2) {
        let len = w[1] - w[0];
        let panels = ((len * (freq + 1.0)) / 2.0).ceil().max(1.0) as usize;
        let width = len / panels as f64;
        for p in 0..panels {
            let mid = w[0] + (p as f64 + 0.5) * width;
            for (x, wt) in gx.iter().zip(&gw) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * wt);
            }
        }
    }
    let phi: Vec<Vec<C64>> = nodes.iter().map(|&y| family.eval_all(y)).collect();
    let dual: Vec<Vec<C64>> = nodes.par_iter().map(|&y| dual_at(family, y)).collect::<Result<_>>()?;
    let n = family.len();
    let mut worst = 0.0f64;
    for k in -k_max..=k_max {
        let a = k as f64 * spec.t_o;
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for m in 0..nodes.len() {
                    acc += phi[m][i] * dual[m][j].conj() * C64::from_polar(weights[m], -a * nodes[m]);
                }
                let target = if i == j && k == 0 { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
    }
    Ok(worst)
}
