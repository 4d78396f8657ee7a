//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the library.
///
/// Variants carry enough numeric context to be useful in a CLI message; the
/// command-line front end maps [`Error::NotFrame`] to its own exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input must be finite, got {0}")]
    NonFinite(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "h = {h} >= 2*omega = {}: a single generator suffices (classical sampling), \
         which is outside the multi-channel dual construction",
        2.0 * omega
    )]
    DegenerateRegime { omega: f64, h: f64 },

    #[error("x = {x} lies on a sub-interval breakpoint; use an offset grid")]
    BoundaryAmbiguous { x: f64 },

    #[error("family has {got} generators but the band needs exactly {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is numerically singular (|det| = {det_modulus:e})")]
    SingularMatrix { det_modulus: f64 },

    #[error("matrix has numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("the two pseudoinverse constructions disagree by {discrepancy:e}")]
    PseudoinverseMismatch { discrepancy: f64 },

    #[error("fiber at x = {x} does not have its expected rank")]
    SingularFiber { x: f64 },

    #[error("the family is not a frame: {0}")]
    NotFrame(String),

    #[error("the family is a frame but not a Riesz basis")]
    NotRiesz,

    #[error("h = {h} is not admissible for scheme {scheme} (needs {range})")]
    InadmissibleRegime {
        scheme: String,
        h: f64,
        range: String,
    },

    #[error("closed form and sampled duals differ by {0:e}")]
    ClosedFormMismatch(f64),

    #[error("spectrum sampling is not aligned with breakpoint {0}")]
    NotBreakpointAligned(f64),

    #[error("t = {t} is outside the kernel range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("no time-domain evaluator available: {0}")]
    MissingDualEvaluator(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed family description: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
