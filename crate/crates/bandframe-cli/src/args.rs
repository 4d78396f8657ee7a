use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Frames of translates for band-limited signals.
///
/// Exit status: 0 on success, 1 on a configuration or numerical error, 2
/// when the family is not a frame.
#[derive(Debug, Parser)]
#[command(name = "bandframe", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame and Riesz basis check; writes a JSON report.
    Analyze {
        #[command(flatten)]
        family: FamilyArgs,
        /// Report path; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dual generator spectra and time-domain kernels.
    Duals {
        #[command(flatten)]
        family: FamilyArgs,
        /// Kernel table window `a:b`.
        #[arg(long, default_value = "-20:20", allow_hyphen_values = true)]
        window: String,
        /// Kernel table step.
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Output directory for `spectrum.csv` and `kernel.csv`.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also compute the duals by the closed-form route and report the largest gap.
        #[arg(long)]
        cross_validate: bool,
    },
    /// Sample a test signal, reconstruct it and tabulate the error.
    Reconstruct {
        #[command(flatten)]
        family: FamilyArgs,
        /// Test signal: `sinc2` or `zero`.
        #[arg(long, default_value = "sinc2")]
        signal: String,
        /// Truncation order: samples `k = -K..=K`.
        #[arg(long = "K", default_value_t = 64)]
        k: usize,
        /// Evaluation window `a:b`.
        #[arg(long, default_value = "-10:10", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Error table path; only the summary line is printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the data behind one of the canned figures (fig1, fig2, fig4 ... fig9, or all).
    Reproduce {
        figure: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Band limit.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Sampling period.
    #[arg(long = "t-o", conflicts_with = "h_ratio", required_unless_present = "h_ratio")]
    pub t_o: Option<f64>,
    /// `h / omega`, with `h = 2 pi / t_o`; accepts fractions such as `11/15`.
    #[arg(long = "h-ratio")]
    pub h_ratio: Option<String>,
    /// Builtin scheme: hilbert, derivative2 or derivative3.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub scheme: Option<String>,
    /// JSON description of a custom family.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Number of fiber nodes.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
}
