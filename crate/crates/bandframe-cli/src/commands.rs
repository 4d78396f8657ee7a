use std::path::{Path, PathBuf};

use bandframe::dual::{builtin_scheme_on, duals_closed_form, duals_pointwise, DualFamily, SchemeDuals, CLOSED_FORM_AGREEMENT};
use bandframe::family::SchemeTag;
use bandframe::frame::{check_frame, FrameVerdict, Thresholds};
use bandframe::kernel::{dual_kernels, KernelOptions};
use bandframe::sampling::{channel_samples, reconstruct, EvalGrid, ReconstructionReport, SignalKind, TestSignal};
use bandframe::spectral::FrequencyGrid;
use bandframe::table::{emit_table, TableArtifact};
use bandframe::{Error, Result, C64};

use crate::config::{FamilySource, RunConfig};

/// What a command reports back to `main` for the exit status.
pub enum Status {
    Done,
    NotFrame,
}

pub fn analyze(cfg: &RunConfig, out: Option<&Path>) -> Result<Status> {
    let family = cfg.family()?;
    let grid = FrequencyGrid::new(&cfg.spec, cfg.grid)?;
    let report = check_frame(&family, &grid, &Thresholds::default())?;
    let artifact = TableArtifact::report(&report);
    match out {
        Some(path) => {
            emit_table(&artifact, path)?;
            println!("verdict={} A={:.6e} B={:.6e}", report.verdict, report.lower_bound_a, report.upper_bound_b);
        }
        None => print!("{}", String::from_utf8_lossy(&artifact.to_bytes()?)),
    }
    if report.verdict == FrameVerdict::NotFrame {
        eprintln!("not a frame: failed {:?}", report.failed);
        Ok(Status::NotFrame)
    } else {
        Ok(Status::Done)
    }
}

pub fn compute_duals(cfg: &RunConfig) -> Result<DualFamily> {
    match &cfg.source {
        FamilySource::Builtin(tag) => Ok(builtin_scheme_on(*tag, &cfg.spec, cfg.grid)?.1),
        FamilySource::Custom(family) => duals_pointwise(family, &FrequencyGrid::new(&cfg.spec, cfg.grid)?),
    }
}

/// Closed-form dual spectra on the band nodes of `duals`: the builtin
/// formulas for a named scheme, the cross-product formulas otherwise.
fn closed_form_spectra(cfg: &RunConfig, duals: &DualFamily) -> Result<Vec<Vec<C64>>> {
    match &cfg.source {
        FamilySource::Builtin(tag) => {
            let cf = SchemeDuals::new(*tag, &cfg.spec)?;
            let mut out = vec![Vec::with_capacity(duals.band_nodes.len()); cf.n_generators()];
            for node in &duals.band_nodes {
                for (i, z) in cf.eval(node.y)?.into_iter().enumerate() {
                    out[i].push(z);
                }
            }
            Ok(out)
        }
        FamilySource::Custom(family) => {
            Ok(duals_closed_form(family, family.len(), &duals.grid)?.dual_spectra)
        }
    }
}

fn window_points(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    Ok(EvalGrid::new(lo, hi, step)?.points())
}

pub fn spectrum_artifact(duals: &DualFamily) -> Result<TableArtifact> {
    TableArtifact::spectrum(&duals.frequencies(), &duals.dual_spectra)
}

pub fn kernel_artifact(duals: &DualFamily, window: (f64, f64), step: f64) -> Result<TableArtifact> {
    let times = window_points(window.0, window.1, step)?;
    let half = window.0.abs().max(window.1.abs());
    let kernels = dual_kernels(duals, half, &KernelOptions::default())?;
    let values = kernels
        .iter()
        .map(|k| times.iter().map(|&t| k.eval(t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    TableArtifact::kernel(&times, &values)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn write(dir: &Path, name: &str, artifact: &TableArtifact) -> Result<PathBuf> {
    let path = dir.join(name);
    emit_table(artifact, &path)?;
    Ok(path)
}

pub fn duals(cfg: &RunConfig, window: (f64, f64), step: f64, out: &Path, cross_validate: bool) -> Result<Status> {
    let duals = compute_duals(cfg)?;
    ensure_dir(out)?;
    let spectrum = write(out, "spectrum.csv", &spectrum_artifact(&duals)?)?;
    let kernel = write(out, "kernel.csv", &kernel_artifact(&duals, window, step)?)?;
    println!("wrote {} and {}", spectrum.display(), kernel.display());
    if cross_validate {
        let closed = closed_form_spectra(cfg, &duals)?;
        write(out, "spectrum_closed.csv", &TableArtifact::spectrum(&duals.frequencies(), &closed)?)?;
        let gap = closed
            .iter()
            .zip(&duals.dual_spectra)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0f64, f64::max);
        let report = serde_json::json!({
            "max_discrepancy": gap,
            "tolerance": CLOSED_FORM_AGREEMENT,
            "agree": gap < CLOSED_FORM_AGREEMENT,
        });
        let path = out.join("cross_validation.json");
        std::fs::write(&path, format!("{report:#}\n")).map_err(|source| Error::Io { path, source })?;
        println!("max_discrepancy={gap:.6e}");
        if gap >= CLOSED_FORM_AGREEMENT {
            return Err(Error::ClosedFormMismatch(gap));
        }
    }
    Ok(Status::Done)
}

pub fn run_reconstruction(
    cfg: &RunConfig,
    signal: SignalKind,
    k: usize,
    window: (f64, f64),
    step: f64,
) -> Result<ReconstructionReport> {
    let family = cfg.family()?;
    let duals = compute_duals(cfg)?;
    let samples = channel_samples(&TestSignal::new(signal, cfg.spec.omega), &family, k)?;
    reconstruct(&samples, &duals, &EvalGrid::new(window.0, window.1, step)?, &KernelOptions::default())
}

pub fn error_artifact(report: &ReconstructionReport) -> Result<TableArtifact> {
    TableArtifact::error(&report.eval_points, &report.reference, &report.reconstructed)
}

pub fn reconstruct_cmd(
    cfg: &RunConfig,
    signal: SignalKind,
    k: usize,
    window: (f64, f64),
    step: f64,
    out: Option<&Path>,
) -> Result<Status> {
    let report = run_reconstruction(cfg, signal, k, window, step)?;
    if let Some(path) = out {
        emit_table(&error_artifact(&report)?, path)?;
    }
    println!("{}", report.summary());
    Ok(Status::Done)
}

pub const FIGURES: [&str; 8] = ["fig1", "fig2", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"];

/// Canned configurations: spectra for figures 1, 2, 5 and 7, time kernels
/// for 4 and 6, reconstruction errors for 8 and 9.
pub fn reproduce(figure: &str, out: &Path) -> Result<Status> {
    if figure == "all" {
        for f in FIGURES {
            reproduce(f, out)?;
        }
        return Ok(Status::Done);
    }
    let (tag, h) = match figure {
        "fig1" => (SchemeTag::Derivative2, 1.0),
        "fig2" => (SchemeTag::Derivative2, 1.5),
        "fig4" | "fig5" | "fig8" => (SchemeTag::Derivative3, 2.0 / 3.0),
        "fig6" | "fig7" | "fig9" => (SchemeTag::Derivative3, 11.0 / 15.0),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown figure {other:?} (expected one of {} or all)",
                FIGURES.join(", ")
            )))
        }
    };
    let cfg = RunConfig::builtin(tag, 1.0, h, bandframe::spectral::DEFAULT_FIBER_NODES)?;
    ensure_dir(out)?;
    let artifact = match figure {
        "fig1" | "fig2" | "fig5" | "fig7" => spectrum_artifact(&compute_duals(&cfg)?)?,
        "fig4" | "fig6" => kernel_artifact(&compute_duals(&cfg)?, (-20.0, 20.0), 0.01)?,
        _ => {
            let report = run_reconstruction(&cfg, SignalKind::SincSquared, 64, (-10.0, 10.0), 0.01)?;
            println!("{figure}: {}", report.summary());
            error_artifact(&report)?
        }
    };
    let path = write(out, &format!("{figure}.csv"), &artifact)?;
    println!("wrote {}", path.display());
    Ok(Status::Done)
}
