//! Fiber matrices of a generator family and the frame / Riesz-basis verdict.
//!
//! The pre-Gramian `J(x)` has one row per active shift `j` of the piece
//! containing `x` and one column per generator, with entries
//! `sqrt(h) * phi_i(x + j h)`. The translates form a frame exactly when, on a
//! set of full measure, three quantities stay away from zero:
//!
//! - `delta`, the infimum over the band of `sum_j |phi_j|^2`;
//! - `sigma`, the infimum of the maximal-minor sum of the reduced fibers;
//! - `eta`, the infimum of `|det J|` on the square fibers.
//!
//! Infima and suprema are approximated by minima and maxima over a
//! [`FrequencyGrid`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::GeneratorFamily;
use crate::matrix::{singular_profile, ComplexMatrix};
use crate::spectral::{FrequencyGrid, Regime, Spectrum, C64};

/// Fiber matrix on the piece `sub` (index into the partition) at `x` in `[0, h)`.
pub(crate) fn fiber_matrix(family: &GeneratorFamily, x: f64, sub: usize) -> ComplexMatrix {
    let spec = &family.spec;
    let s = spec.h.sqrt();
    let shifts = &spec.partition[sub].active_shifts;
    ComplexMatrix::from_fn(shifts.len(), family.len(), |r, c| {
        family.generators[c].eval(x + shifts[r] as f64 * spec.h) * s
    })
}

/// `J(x)`: rows are the active shifts of the piece containing `x`.
pub fn pre_gramian(family: &GeneratorFamily, x: f64) -> Result<ComplexMatrix> {
    let sub = family.spec.locate(x)?;
    Ok(fiber_matrix(family, x.rem_euclid(family.spec.h), sub))
}

/// `G(x) = J(x)* J(x)`, the Gramian fiber.
pub fn gramian(family: &GeneratorFamily, x: f64) -> Result<ComplexMatrix> {
    let j = pre_gramian(family, x)?;
    j.adjoint().matmul(&j)
}

/// `J(x) J(x)*`, the dual Gramian fiber.
pub fn dual_gramian(family: &GeneratorFamily, x: f64) -> Result<ComplexMatrix> {
    let j = pre_gramian(family, x)?;
    j.matmul(&j.adjoint())
}

/// `h * sum_j phi_j(x) * conj(phi_j(x + k h))`.
pub fn omega_k(family: &GeneratorFamily, k: i64, x: f64) -> C64 {
    let h = family.spec.h;
    family
        .generators
        .iter()
        .map(|g| g.eval(x) * g.eval(x + k as f64 * h).conj())
        .sum::<C64>()
        * h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub delta: f64,
    pub sigma: f64,
    pub eta: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            delta: 1e-10,
            sigma: 1e-10,
            eta: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameVerdict {
    RieszBasis,
    Frame,
    NotFrame,
}

impl std::fmt::Display for FrameVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FrameVerdict::RieszBasis => "RieszBasis",
            FrameVerdict::Frame => "Frame",
            FrameVerdict::NotFrame => "NotFrame",
        })
    }
}

/// Which frame condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameCondition {
    /// `sum_j |phi_j|^2` is not bounded below on the band. This condition is
    /// necessary for any frame, so its failure is reported separately.
    BandEnergy,
    /// A reduced fiber loses rank.
    ReducedMinors,
    /// A square fiber is singular.
    FullDeterminant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub omega: f64,
    pub t_o: f64,
    pub h: f64,
    pub ell: i64,
    pub regime: Regime,
    pub n_generators: usize,
    pub verdict: FrameVerdict,
    pub delta: f64,
    pub gamma: f64,
    /// `None` when the partition has no reduced piece.
    pub sigma: Option<f64>,
    pub eta: f64,
    pub lower_bound_a: f64,
    pub upper_bound_b: f64,
    pub grid_size: usize,
    pub failed: Vec<FrameCondition>,
}

impl FrameReport {
    pub fn necessary_condition_holds(&self) -> bool {
        !self.failed.contains(&FrameCondition::BandEnergy)
    }
}

/// Per-node numbers gathered in one pass over the grid.
struct NodeStats {
    energy_min: f64,
    energy_max: f64,
    full_det: Option<f64>,
    reduced_minor: Option<f64>,
    sv_min_sq: f64,
    sv_max_sq: f64,
}

fn node_stats(family: &GeneratorFamily, grid: &FrequencyGrid, i: usize) -> NodeStats {
    let sub = grid.node_sub[i];
    let j = fiber_matrix(family, grid.nodes[i], sub);
    let h = family.spec.h;
    let (mut energy_min, mut energy_max) = (f64::INFINITY, 0.0f64);
    for r in 0..j.rows() {
        let e = j.row(r).iter().map(|z| z.norm_sqr()).sum::<f64>() / h;
        energy_min = energy_min.min(e);
        energy_max = energy_max.max(e);
    }
    let profile = singular_profile(&j);
    let full = grid.spec.partition[sub].full_rank_expected;
    NodeStats {
        energy_min,
        energy_max,
        full_det: if full { profile.det_modulus } else { None },
        reduced_minor: if full { None } else { Some(profile.minor_sum) },
        sv_min_sq: profile.singular_values.last().map_or(0.0, |s| s * s),
        sv_max_sq: profile.singular_values.first().map_or(0.0, |s| s * s),
    }
}

fn check_grid(family: &GeneratorFamily, grid: &FrequencyGrid) -> Result<()> {
    if grid.spec != family.spec {
        return Err(Error::InvalidParameter("grid was built for a different band spec".into()));
    }
    if family.len() != family.spec.n_generators {
        return Err(Error::ArityMismatch {
            expected: family.spec.n_generators,
            got: family.len(),
        });
    }
    Ok(())
}

/// Estimates `delta`, `gamma`, `sigma`, `eta` and the frame bounds on `grid`.
pub fn check_frame(family: &GeneratorFamily, grid: &FrequencyGrid, thresholds: &Thresholds) -> Result<FrameReport> {
    check_grid(family, grid)?;
    let stats: Vec<NodeStats> = (0..grid.len()).into_par_iter().map(|i| node_stats(family, grid, i)).collect();
    let spec = &family.spec;

    let delta = stats.iter().map(|s| s.energy_min).fold(f64::INFINITY, f64::min);
    let gamma = stats.iter().map(|s| s.energy_max).fold(0.0, f64::max);
    let eta = stats.iter().filter_map(|s| s.full_det).fold(f64::INFINITY, f64::min);
    let sigma = if !spec.has_reduced_pieces() {
        None
    } else if spec.ell == 1 && spec.regime == Regime::Even {
        // A reduced fiber with one row has minor sum h * sum_j |phi_j|^2,
        // so the band-energy bound already controls it.
        Some(spec.h * delta)
    } else {
        Some(stats.iter().filter_map(|s| s.reduced_minor).fold(f64::INFINITY, f64::min))
    };
    let a = stats.iter().map(|s| s.sv_min_sq).fold(f64::INFINITY, f64::min);
    let b = stats.iter().map(|s| s.sv_max_sq).fold(0.0, f64::max);

    let mut failed = Vec::new();
    if !(delta > thresholds.delta) || !gamma.is_finite() {
        failed.push(FrameCondition::BandEnergy);
    }
    if sigma.is_some_and(|s| !(s > thresholds.sigma)) {
        failed.push(FrameCondition::ReducedMinors);
    }
    if !(eta > thresholds.eta) {
        failed.push(FrameCondition::FullDeterminant);
    }
    let verdict = if !failed.is_empty() {
        FrameVerdict::NotFrame
    } else if spec.left_boundary {
        FrameVerdict::RieszBasis
    } else {
        FrameVerdict::Frame
    };
    Ok(FrameReport {
        omega: spec.omega,
        t_o: spec.t_o,
        h: spec.h,
        ell: spec.ell,
        regime: spec.regime,
        n_generators: spec.n_generators,
        verdict,
        delta,
        gamma,
        sigma,
        eta,
        lower_bound_a: a,
        upper_bound_b: b,
        grid_size: grid.len(),
        failed,
    })
}

/// Runs [`check_frame`] on `grid_size` and `4 * grid_size` nodes and fails if
/// the two verdicts differ.
pub fn check_frame_refined(family: &GeneratorFamily, grid_size: usize, thresholds: &Thresholds) -> Result<FrameReport> {
    let coarse = check_frame(family, &FrequencyGrid::new(&family.spec, grid_size)?, thresholds)?;
    let fine = check_frame(family, &FrequencyGrid::new(&family.spec, 4 * grid_size)?, thresholds)?;
    if coarse.verdict != fine.verdict {
        return Err(Error::InvalidParameter(format!(
            "verdict changes under grid refinement ({} -> {}); the family sits too close to a threshold",
            coarse.verdict, fine.verdict
        )));
    }
    Ok(fine)
}

/// Frame bounds `(A, B)` from the extreme singular values of the fibers.
pub fn frame_bounds(family: &GeneratorFamily, grid: &FrequencyGrid) -> Result<(f64, f64)> {
    let report = check_frame(family, grid, &Thresholds::default())?;
    if report.verdict == FrameVerdict::NotFrame {
        return Err(Error::NotFrame(format!("failed conditions {:?}", report.failed)));
    }
    Ok((report.lower_bound_a, report.upper_bound_b))
}
