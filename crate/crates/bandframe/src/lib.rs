//! Frames of translates for band-limited functions.
//!
//! A family of `N` generators with spectra supported in `[-omega, omega]`,
//! shifted by multiples of `t_o = 2*pi/h`, is analysed fiber by fiber: at
//! each `x` in `[0, h)` the generator spectra sampled at `x + j*h` form a small
//! matrix whose rank and conditioning decide whether the translates form a
//! frame or a Riesz basis. The same fibers yield the canonical dual
//! generators, which in turn drive multi-channel sampling reconstructions
//! (values plus derivatives, or values plus Hilbert transform).
//!
//! Module map:
//! - [`spectral`]: regime arithmetic, the sub-interval partition, grids.
//! - [`matrix`]: cross products, cofactor and Moore-Penrose inverses.
//! - [`family`] and [`frame`]: generator spectra, fiber matrices, frame checks.
//! - [`dual`]: dual generators by pointwise, cross-product and Gramian paths.
//! - [`sampling`]: test signals, channel samples, reconstruction, oracles.
//! - [`kernel`] and [`table`]: inverse Fourier transform, splines, output.

pub mod dual;
pub mod error;
pub mod family;
pub mod frame;
pub mod kernel;
pub mod matrix;
pub mod quadrature;
pub mod sampling;
pub mod spectral;
pub mod table;

pub use error::{Error, Result};
pub use spectral::C64;
