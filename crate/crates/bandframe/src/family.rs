//! Generator spectra of the form `m(x) * indicator[-omega, omega](x)`.
//!
//! Multipliers are piecewise polynomials, optionally multiplied by `sign(x)`;
//! the builtin tags cover the channels used for value, derivative and Hilbert
//! transform sampling. Custom families are read from JSON:
//!
//! ```json
//! { "generators": [
//!     { "builtin": "unit" },
//!     { "pieces": [ { "interval": [-1.0, 1.0], "coeffs": [[0.0, 0.0], [0.0, 1.0]] } ] }
//! ] }
//! ```
//!
//! `coeffs` lists complex coefficients `[re, im]` in increasing degree, and a
//! piece may carry `"sign": true` to multiply it by `sign(x)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{dedup_sorted, BandSpec, Regime, Spectrum, C64};

/// `sign(0) = 0`; grids never place a node at 0, so the choice is invisible.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPiece {
    pub lo: f64,
    pub hi: f64,
    /// Increasing degree.
    pub coeffs: Vec<C64>,
    pub with_sign: bool,
}

impl PolyPiece {
    fn eval(&self, x: f64) -> C64 {
        let p = self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c);
        if self.with_sign {
            p * sign(x)
        } else {
            p
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Multiplier {
    /// `1`
    Unit,
    /// `-i sign(x)`, the Hilbert transform multiplier.
    NegISign,
    /// `i x`, the first derivative.
    IX,
    /// `-x^2`, the second derivative.
    NegXSquared,
    /// Pieces are tried in order; the first with `lo <= x <= hi` wins, and a
    /// point covered by none evaluates to zero.
    Piecewise(Vec<PolyPiece>),
}

impl Multiplier {
    pub fn eval(&self, x: f64) -> C64 {
        match self {
            Multiplier::Unit => C64::new(1.0, 0.0),
            Multiplier::NegISign => C64::new(0.0, -sign(x)),
            Multiplier::IX => C64::new(0.0, x),
            Multiplier::NegXSquared => C64::new(-x * x, 0.0),
            Multiplier::Piecewise(pieces) => pieces
                .iter()
                .find(|p| p.lo <= x && x <= p.hi)
                .map_or(C64::new(0.0, 0.0), |p| p.eval(x)),
        }
    }

    /// Points where the multiplier may fail to be smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Multiplier::NegISign => vec![0.0],
            Multiplier::Piecewise(pieces) => {
                let mut v = Vec::new();
                for p in pieces {
                    v.extend([p.lo, p.hi]);
                    if p.with_sign && p.lo < 0.0 && p.hi > 0.0 {
                        v.push(0.0);
                    }
                }
                v
            }
            _ => Vec::new(),
        }
    }

    fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "unit" => Ok(Multiplier::Unit),
            "sign" | "hilbert" | "-i*sign" => Ok(Multiplier::NegISign),
            "ix" => Ok(Multiplier::IX),
            "-x^2" | "-x2" => Ok(Multiplier::NegXSquared),
            other => Err(Error::InvalidParameter(format!("unknown multiplier tag {other:?}"))),
        }
    }
}

/// `scale * m(x)` on `[-omega, omega]`, zero outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpectrum {
    pub multiplier: Multiplier,
    pub omega: f64,
    pub scale: C64,
}

impl GeneratorSpectrum {
    pub fn new(multiplier: Multiplier, omega: f64) -> Self {
        GeneratorSpectrum {
            multiplier,
            omega,
            scale: C64::new(1.0, 0.0),
        }
    }
}

impl Spectrum for GeneratorSpectrum {
    fn eval(&self, y: f64) -> C64 {
        if y.abs() <= self.omega {
            self.multiplier.eval(y) * self.scale
        } else {
            C64::new(0.0, 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeTag {
    Hilbert,
    Derivative2,
    Derivative3,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 3] = [SchemeTag::Hilbert, SchemeTag::Derivative2, SchemeTag::Derivative3];

    pub fn multipliers(self) -> Vec<Multiplier> {
        match self {
            SchemeTag::Hilbert => vec![Multiplier::Unit, Multiplier::NegISign],
            SchemeTag::Derivative2 => vec![Multiplier::Unit, Multiplier::IX],
            SchemeTag::Derivative3 => vec![Multiplier::Unit, Multiplier::IX, Multiplier::NegXSquared],
        }
    }

    /// Whether the builtin closed forms apply at this regime.
    pub fn admissible(self, spec: &BandSpec) -> Result<()> {
        let ok = match self {
            SchemeTag::Hilbert | SchemeTag::Derivative2 => spec.regime == Regime::Even && spec.ell == 1,
            SchemeTag::Derivative3 => spec.regime == Regime::Odd && spec.ell == 2,
        };
        if ok {
            Ok(())
        } else {
            let range = match self {
                SchemeTag::Derivative3 => "2*omega/3 <= h < omega",
                _ => "omega <= h < 2*omega",
            };
            Err(Error::InadmissibleRegime {
                scheme: self.to_string(),
                h: spec.h,
                range: range.into(),
            })
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeTag::Hilbert => "hilbert",
            SchemeTag::Derivative2 => "derivative2",
            SchemeTag::Derivative3 => "derivative3",
        })
    }
}

impl FromStr for SchemeTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert" => Ok(SchemeTag::Hilbert),
            "derivative2" => Ok(SchemeTag::Derivative2),
            "derivative3" => Ok(SchemeTag::Derivative3),
            other => Err(Error::InvalidParameter(format!(
                "unknown scheme {other:?} (expected hilbert, derivative2 or derivative3)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorFamily {
    pub spec: BandSpec,
    pub generators: Vec<GeneratorSpectrum>,
    /// Set for the builtin schemes, whose samples and duals have closed forms.
    pub scheme: Option<SchemeTag>,
}

impl GeneratorFamily {
    pub fn new(spec: &BandSpec, multipliers: Vec<Multiplier>) -> Result<Self> {
        if multipliers.len() != spec.n_generators {
            return Err(Error::ArityMismatch {
                expected: spec.n_generators,
                got: multipliers.len(),
            });
        }
        Ok(GeneratorFamily {
            spec: spec.clone(),
            generators: multipliers.into_iter().map(|m| GeneratorSpectrum::new(m, spec.omega)).collect(),
            scheme: None,
        })
    }

    /// Generators of a builtin scheme; the regime must suit the scheme.
    pub fn builtin(tag: SchemeTag, spec: &BandSpec) -> Result<Self> {
        tag.admissible(spec)?;
        let mut fam = Self::new(spec, tag.multipliers())?;
        fam.scheme = Some(tag);
        Ok(fam)
    }

    /// Parses the JSON family description documented at module level.
    pub fn from_json(spec: &BandSpec, text: &str) -> Result<Self> {
        let desc: FamilyDesc = serde_json::from_str(text)?;
        let multipliers = desc
            .generators
            .into_iter()
            .map(GeneratorDesc::into_multiplier)
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, multipliers)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn eval_all(&self, y: f64) -> Vec<C64> {
        self.generators.iter().map(|g| g.eval(y)).collect()
    }

    /// Every generator multiplied by the same constant.
    pub fn scaled(&self, c: C64) -> Self {
        let mut out = self.clone();
        for g in &mut out.generators {
            g.scale *= c;
        }
        out.scheme = None;
        out
    }

    /// Band-piece breakpoints merged with the multipliers' own breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let omega = self.spec.omega;
        let mut pts = self.spec.band_breakpoints();
        for g in &self.generators {
            pts.extend(g.multiplier.breakpoints().into_iter().filter(|p| p.abs() < omega));
        }
        dedup_sorted(pts, 1e-12 * self.spec.h)
    }
}

#[derive(Debug, Deserialize)]
struct FamilyDesc {
    generators: Vec<GeneratorDesc>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GeneratorDesc {
    Builtin { builtin: String },
    Pieces { pieces: Vec<PieceDesc> },
}

#[derive(Debug, Deserialize)]
struct PieceDesc {
    interval: [f64; 2],
    coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    sign: bool,
}

impl GeneratorDesc {
    fn into_multiplier(self) -> Result<Multiplier> {
        match self {
            GeneratorDesc::Builtin { builtin } => Multiplier::from_tag(&builtin),
            GeneratorDesc::Pieces { pieces } => {
                let mut out = Vec::with_capacity(pieces.len());
                for p in pieces {
                    let [lo, hi] = p.interval;
                    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                        return Err(Error::InvalidParameter(format!("bad interval [{lo}, {hi}]")));
                    }
                    if p.coeffs.iter().flatten().any(|c| !c.is_finite()) {
                        return Err(Error::InvalidParameter("non-finite coefficient".into()));
                    }
                    out.push(PolyPiece {
                        lo,
                        hi,
                        coeffs: p.coeffs.iter().map(|[re, im]| C64::new(*re, *im)).collect(),
                        with_sign: p.sign,
                    });
                }
                Ok(Multiplier::Piecewise(out))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_multipliers() {
        assert_eq!(Multiplier::NegISign.eval(0.3), C64::new(0.0, -1.0));
        assert_eq!(Multiplier::NegISign.eval(-0.3), C64::new(0.0, 1.0));
        assert_eq!(Multiplier::NegISign.eval(0.0), C64::new(0.0, 0.0));
        assert_eq!(Multiplier::IX.eval(0.5), C64::new(0.0, 0.5));
        assert_eq!(Multiplier::NegXSquared.eval(0.5), C64::new(-0.25, 0.0));
    }

    #[test]
    fn spectra_vanish_off_band() {
        let g = GeneratorSpectrum::new(Multiplier::Unit, 1.0);
        assert_eq!(g.eval(1.0), C64::new(1.0, 0.0));
        assert_eq!(g.eval(1.0 + 1e-12), C64::new(0.0, 0.0));
        assert_eq!(g.eval(-7.0), C64::new(0.0, 0.0));
    }

    #[test]
    fn arity_checked() {
        let spec = BandSpec::from_h(1.0, 1.5).unwrap();
        assert!(matches!(
            GeneratorFamily::new(&spec, vec![Multiplier::Unit]),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn admissibility() {
        let s = BandSpec::from_h(1.0, 0.7).unwrap();
        assert!(GeneratorFamily::builtin(SchemeTag::Derivative3, &s).is_ok());
        assert!(GeneratorFamily::builtin(SchemeTag::Hilbert, &s).is_err());
        let s = BandSpec::from_h(1.0, 1.3).unwrap();
        assert!(GeneratorFamily::builtin(SchemeTag::Derivative2, &s).is_ok());
        assert!(GeneratorFamily::builtin(SchemeTag::Derivative3, &s).is_err());
    }

    #[test]
    fn json_family_matches_builtin() {
        let spec = BandSpec::from_h(1.0, 0.7).unwrap();
        let text = r#"{"generators": [
            {"builtin": "unit"},
            {"pieces": [{"interval": [-1, 1], "coeffs": [[0, 0], [0, 1]]}]},
            {"pieces": [{"interval": [-1, 1], "coeffs": [[0, 0], [0, 0], [-1, 0]]}]}
        ]}"#;
        let custom = GeneratorFamily::from_json(&spec, text).unwrap();
        let builtin = GeneratorFamily::builtin(SchemeTag::Derivative3, &spec).unwrap();
        for y in [-0.93, -0.2, 0.41, 0.99] {
            let a = custom.eval_all(y);
            let b = builtin.eval_all(y);
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).norm() < 1e-15);
            }
        }
        let hilbert = r#"{"generators": [{"builtin": "unit"},
            {"pieces": [{"interval": [-1, 1], "coeffs": [[0, -1]], "sign": true}]}]}"#;
        let spec = BandSpec::from_h(1.0, 1.5).unwrap();
        let fam = GeneratorFamily::from_json(&spec, hilbert).unwrap();
        assert_eq!(fam.eval_all(-0.5)[1], C64::new(0.0, 1.0));
        assert!(fam.breakpoints().contains(&0.0));
        assert!(GeneratorFamily::from_json(&spec, r#"{"generators": [{"builtin": "cube"}]}"#).is_err());
    }

    #[test]
    fn scheme_tags_round_trip() {
        for t in SchemeTag::ALL {
            assert_eq!(t.to_string().parse::<SchemeTag>().unwrap(), t);
        }
        assert!("fourier".parse::<SchemeTag>().is_err());
    }
}
