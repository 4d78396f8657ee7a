//! Turns command-line arguments into a validated run configuration.

use bandframe::family::{GeneratorFamily, SchemeTag};
use bandframe::spectral::BandSpec;
use bandframe::{Error, Result};

use crate::args::FamilyArgs;

/// Largest denominator tried when reading a rounded decimal ratio.
const MAX_DENOMINATOR: i64 = 16;
/// Decimals with at least this many fractional digits are treated as rounded fractions.
const ROUNDED_DIGITS: usize = 4;

#[derive(Debug, Clone)]
pub enum FamilySource {
    Builtin(SchemeTag),
    Custom(GeneratorFamily),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: BandSpec,
    pub source: FamilySource,
    pub grid: usize,
}

impl RunConfig {
    pub fn family(&self) -> Result<GeneratorFamily> {
        match &self.source {
            FamilySource::Builtin(tag) => GeneratorFamily::builtin(*tag, &self.spec),
            FamilySource::Custom(f) => Ok(f.clone()),
        }
    }

    pub fn builtin(tag: SchemeTag, omega: f64, h: f64, grid: usize) -> Result<Self> {
        Ok(RunConfig {
            spec: BandSpec::from_h(omega, h)?,
            source: FamilySource::Builtin(tag),
            grid,
        })
    }

    pub fn resolve(args: &FamilyArgs) -> Result<Self> {
        let omega = args.omega;
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("--omega must be positive, got {omega}")));
        }
        let spec = match (args.t_o, &args.h_ratio) {
            (Some(t_o), None) => BandSpec::new(omega, t_o)?,
            (None, Some(text)) => {
                let ratio = parse_ratio(text)?;
                if !(ratio > 0.0 && ratio < 2.0) {
                    return Err(Error::InvalidParameter(format!("--h-ratio must lie in (0, 2), got {text}")));
                }
                BandSpec::from_h(omega, ratio * omega)?
            }
            _ => return Err(Error::InvalidParameter("give exactly one of --t-o and --h-ratio".into())),
        };
        let source = match (&args.scheme, &args.family) {
            (Some(tag), None) => FamilySource::Builtin(tag.parse()?),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                FamilySource::Custom(GeneratorFamily::from_json(&spec, &text)?)
            }
            _ => return Err(Error::InvalidParameter("give exactly one of --scheme and --family".into())),
        };
        if args.grid < 16 {
            return Err(Error::InvalidParameter(format!("--grid must be at least 16, got {}", args.grid)));
        }
        Ok(RunConfig {
            spec,
            source,
            grid: args.grid,
        })
    }
}

/// Reads `p/q` exactly, and a decimal literally unless it carries at least
/// four fractional digits and lies within half a unit of its last digit from
/// a fraction with a small denominator, in which case that fraction is used.
pub fn parse_ratio(text: &str) -> Result<f64> {
    let bad = || Error::InvalidParameter(format!("cannot read ratio {text:?}"));
    if let Some((p, q)) = text.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| bad())?;
        let q: f64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0.0 {
            return Err(bad());
        }
        return Ok(p / q);
    }
    let value: f64 = text.trim().parse().map_err(|_| bad())?;
    let digits = text.split_once('.').map_or(0, |(_, frac)| frac.trim().len());
    if digits < ROUNDED_DIGITS || !value.is_finite() {
        return Ok(value);
    }
    let half_unit = 0.5 * 10f64.powi(-(digits as i32));
    for q in 1..=MAX_DENOMINATOR {
        let p = (value * q as f64).round();
        let exact = p / q as f64;
        if (exact - value).abs() <= half_unit && exact != value {
            eprintln!("note: --h-ratio {text} read as {p}/{q}");
            return Ok(exact);
        }
        if exact == value {
            return Ok(value);
        }
    }
    Ok(value)
}

/// Parses a window `a:b` with `a < b`.
pub fn parse_window(text: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidParameter(format!("window must read a:b with a < b, got {text:?}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    Ok((a, b))
}
