//! CSV and JSON artifacts: dual spectra, time kernels, reconstruction errors
//! and frame reports.
//!
//! CSV files have a header row, `,` separators and every value printed with
//! 17 significant digits, so a parsed value equals the written one.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::FrameReport;
use crate::spectral::{Regime, C64};

/// Imaginary parts below this are dropped from kernel tables.
pub const IMAGINARY_EMIT_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableKind {
    SpectrumTable,
    KernelTable,
    ErrorTable,
    FrameReportJson,
}

/// Flat form of a [`FrameReport`], with the key names used on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReportJson {
    pub omega: f64,
    pub t_o: f64,
    pub h: f64,
    pub ell: i64,
    pub regime: Regime,
    #[serde(rename = "N")]
    pub n: usize,
    pub verdict: String,
    pub delta: f64,
    pub gamma: f64,
    pub sigma: Option<f64>,
    pub eta: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub grid_size: usize,
}

impl From<&FrameReport> for FrameReportJson {
    fn from(r: &FrameReport) -> Self {
        FrameReportJson {
            omega: r.omega,
            t_o: r.t_o,
            h: r.h,
            ell: r.ell,
            regime: r.regime,
            n: r.n_generators,
            verdict: r.verdict.to_string(),
            delta: r.delta,
            gamma: r.gamma,
            sigma: r.sigma,
            eta: r.eta,
            a: r.lower_bound_a,
            b: r.upper_bound_b,
            grid_size: r.grid_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableArtifact {
    Csv {
        kind: TableKind,
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
    },
    Report(FrameReportJson),
}

impl TableArtifact {
    pub fn kind(&self) -> TableKind {
        match self {
            TableArtifact::Csv { kind, .. } => *kind,
            TableArtifact::Report(_) => TableKind::FrameReportJson,
        }
    }

    /// Header names; empty for reports.
    pub fn columns(&self) -> &[String] {
        match self {
            TableArtifact::Csv { columns, .. } => columns,
            TableArtifact::Report(_) => &[],
        }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        match self {
            TableArtifact::Csv { rows, .. } => rows,
            TableArtifact::Report(_) => &[],
        }
    }

    /// `x, re_phi1, im_phi1, ...` with `spectra[generator][node]`.
    pub fn spectrum(frequencies: &[f64], spectra: &[Vec<C64>]) -> Result<Self> {
        check_lengths(frequencies.len(), spectra)?;
        let mut columns = vec!["x".to_string()];
        for i in 1..=spectra.len() {
            columns.push(format!("re_phi{i}"));
            columns.push(format!("im_phi{i}"));
        }
        let rows = frequencies
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let mut row = vec![x];
                for s in spectra {
                    row.push(s[k].re);
                    row.push(s[k].im);
                }
                row
            })
            .collect();
        Ok(TableArtifact::Csv {
            kind: TableKind::SpectrumTable,
            columns,
            rows,
        })
    }

    /// `t, phi1, phi2, ...`, followed by `im_phi1, ...` only when some
    /// imaginary part exceeds [`IMAGINARY_EMIT_THRESHOLD`].
    pub fn kernel(times: &[f64], kernels: &[Vec<C64>]) -> Result<Self> {
        check_lengths(times.len(), kernels)?;
        let complex = kernels.iter().flatten().any(|z| z.im.abs() > IMAGINARY_EMIT_THRESHOLD);
        let mut columns = vec!["t".to_string()];
        columns.extend((1..=kernels.len()).map(|i| format!("phi{i}")));
        if complex {
            columns.extend((1..=kernels.len()).map(|i| format!("im_phi{i}")));
        }
        let rows = times
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let mut row = vec![t];
                row.extend(kernels.iter().map(|v| v[k].re));
                if complex {
                    row.extend(kernels.iter().map(|v| v[k].im));
                }
                row
            })
            .collect();
        Ok(TableArtifact::Csv {
            kind: TableKind::KernelTable,
            columns,
            rows,
        })
    }

    /// `x, f_ref, f_rec, abs_err`.
    pub fn error(x: &[f64], reference: &[f64], reconstructed: &[f64]) -> Result<Self> {
        if reference.len() != x.len() || reconstructed.len() != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "error table with {} points, {} references and {} reconstructions",
                x.len(),
                reference.len(),
                reconstructed.len()
            )));
        }
        let rows = (0..x.len())
            .map(|k| vec![x[k], reference[k], reconstructed[k], (reconstructed[k] - reference[k]).abs()])
            .collect();
        Ok(TableArtifact::Csv {
            kind: TableKind::ErrorTable,
            columns: ["x", "f_ref", "f_rec", "abs_err"].map(String::from).to_vec(),
            rows,
        })
    }

    pub fn report(report: &FrameReport) -> Self {
        TableArtifact::Report(report.into())
    }

    /// Serialized bytes, identical for identical artifacts.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        match self {
            TableArtifact::Csv { columns, rows, .. } => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                let csv_err = |e: csv::Error| Error::InvalidParameter(format!("csv encoding: {e}"));
                w.write_record(columns).map_err(csv_err)?;
                for row in rows {
                    w.write_record(row.iter().map(|v| format!("{v:.16e}"))).map_err(csv_err)?;
                }
                w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv encoding: {e}")))
            }
            TableArtifact::Report(r) => {
                let mut bytes = serde_json::to_vec_pretty(r)?;
                bytes.push(b'\n');
                Ok(bytes)
            }
        }
    }
}

fn check_lengths(len: usize, series: &[Vec<C64>]) -> Result<()> {
    match series.iter().find(|s| s.len() != len) {
        Some(s) => Err(Error::DimensionMismatch(format!("{} values against {len} abscissae", s.len()))),
        None => Ok(()),
    }
}

/// Writes `artifact` to `path` (CSV for tables, JSON for reports).
pub fn emit_table(artifact: &TableArtifact, path: &Path) -> Result<()> {
    let bytes = artifact.to_bytes()?;
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    w.write_all(&bytes).map_err(io)?;
    w.flush().map_err(io)
}

/// Parses a CSV table written by [`emit_table`] into its header and rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let bad = |e: String| Error::InvalidParameter(format!("csv: {e}"));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| bad(format!("{f}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Reads back a report written by [`emit_table`].
pub fn read_report(path: &Path) -> Result<FrameReportJson> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}
