use std::str::FromStr;
use std::sync::Arc;

use num_traits::Signed;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{DatumKind, Parabolic, RootDatum, WeylGroup};
use crate::theta::{Mode, Rational, SeriesContext, SymbolTable, Verifier};

pub const DEFAULT_TRUNC: u32 = 5;
pub const DEFAULT_POINTS: usize = 2;
pub const MAX_TRUNC: u32 = 64;
pub const MAX_POINTS: usize = 16;

/// Output format of the command-line documents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Ascii,
    Latex,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "ascii" => Ok(Format::Ascii),
            "latex" => Ok(Format::Latex),
            _ => Err(Error::InvalidArgument(format!("unknown format {s}"))),
        }
    }
}

/// Maps `--type` and `--rank` to a root datum.
///
/// Type `A` (or `GL`) is `GL_n` with `n` the rank of the character lattice, so
/// permutations of `n` letters live in `--type A --rank n`. `SL` is the simply
/// connected `A_r`; `B` and `G` are `B_2` and `G_2`.
pub fn parse_datum(ty: Option<&str>, rank: Option<usize>) -> Result<Option<DatumKind>> {
    let ty = match (ty, rank) {
        (None, None) => return Ok(None),
        (None, Some(_)) => "A",
        (Some(t), _) => t,
    };
    let need = |r: Option<usize>| r.ok_or_else(|| Error::InvalidArgument(format!("--type {ty} needs --rank")));
    let kind = match ty.to_ascii_uppercase().as_str() {
        "A" | "GL" => DatumKind::GL(need(rank)?),
        "SL" => DatumKind::A(need(rank)?),
        "B" | "B2" => {
            if rank.is_some_and(|r| r != 2) {
                return Err(Error::UnsupportedDatum(format!("B{}", rank.unwrap_or(0))));
            }
            DatumKind::B2
        }
        "G" | "G2" => {
            if rank.is_some_and(|r| r != 2) {
                return Err(Error::UnsupportedDatum(format!("G{}", rank.unwrap_or(0))));
            }
            DatumKind::G2
        }
        other => return Err(Error::UnsupportedDatum(other.into())),
    };
    match kind {
        DatumKind::GL(0) | DatumKind::A(0) => Err(Error::InvalidArgument("rank must be positive".into())),
        k => Ok(Some(k)),
    }
}

/// Everything a command needs besides its own operands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// `None` lets each command or suite choose.
    pub datum: Option<DatumKind>,
    /// `None` uses [`DEFAULT_TRUNC`] or the suite's own order.
    pub trunc: Option<u32>,
    pub mode: Mode,
    pub points: usize,
    pub seed: u64,
    /// Block sizes of a parabolic subgroup of `GL_n`.
    pub parabolic: Option<Vec<usize>>,
    pub format: Format,
    /// Rational slope for the K-theory limit, e.g. `1/4`.
    pub slope: Option<String>,
    /// Adds wall-clock timings to reports, which makes them nondeterministic.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            datum: None,
            trunc: None,
            mode: Mode::Eval,
            points: DEFAULT_POINTS,
            seed: 0,
            parabolic: None,
            format: Format::Json,
            slope: None,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.trunc {
            if t == 0 || t > MAX_TRUNC {
                return Err(Error::InvalidArgument(format!("--trunc must be in 1..={MAX_TRUNC}")));
            }
        }
        if self.points == 0 || self.points > MAX_POINTS {
            return Err(Error::InvalidArgument(format!("--points must be in 1..={MAX_POINTS}")));
        }
        if let Some(comp) = &self.parabolic {
            match self.datum {
                Some(DatumKind::GL(n)) => {
                    if comp.contains(&0) || comp.iter().sum::<usize>() != n {
                        return Err(Error::InvalidArgument(format!("--parabolic {comp:?} is not a composition of {n}")));
                    }
                }
                Some(k) => return Err(Error::InvalidArgument(format!("--parabolic needs type A, got {k}"))),
                None => {}
            }
        }
        self.slope()?;
        Ok(())
    }

    pub fn trunc_or(&self, default: u32) -> u32 {
        self.trunc.unwrap_or(default)
    }

    pub fn slope(&self) -> Result<Option<Rational>> {
        let Some(s) = &self.slope else { return Ok(None) };
        let r = Rational::from_str(s.trim()).map_err(|_| Error::InvalidArgument(format!("bad slope {s}")))?;
        if !r.is_positive() {
            return Err(Error::SlopeOutOfRange(format!("slope {r} must be positive")));
        }
        Ok(Some(r))
    }

    /// The datum, falling back to `GL_n` for a caller-supplied `n`.
    pub fn datum_or_gl(&self, n: usize) -> DatumKind {
        self.datum.unwrap_or(DatumKind::GL(n))
    }

    pub fn group(&self, kind: DatumKind) -> Result<Arc<WeylGroup>> {
        WeylGroup::new(RootDatum::new(kind)?)
    }

    pub fn parabolic_for(&self, g: &Arc<WeylGroup>) -> Result<Option<Parabolic>> {
        match &self.parabolic {
            None => Ok(None),
            Some(comp) => {
                let n = g.datum().char_dim;
                if !matches!(g.datum().kind, DatumKind::GL(_)) || comp.iter().sum::<usize>() != n {
                    return Err(Error::InvalidArgument(format!("--parabolic {comp:?} does not fit {}", g.datum().kind)));
                }
                Ok(Some(Parabolic::from_composition(g.clone(), comp)?))
            }
        }
    }

    /// Generator for the named task: the run seed selects the key and the label
    /// selects the stream, so tasks draw the same values in any order.
    pub fn rng(&self, label: &str) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream_id(label));
        r
    }

    pub fn verifier(&self, symbols: &Arc<SymbolTable>, default_trunc: u32, label: &str) -> Verifier {
        let ctx = SeriesContext::new(self.trunc_or(default_trunc), symbols.clone());
        Verifier::new(ctx, self.mode, self.points, self.rng(label).next_u64())
    }
}

/// FNV-1a, used only to turn task labels into stream numbers.
fn stream_id(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn datum_flags() {
        assert_eq!(parse_datum(Some("A"), Some(3)).unwrap(), Some(DatumKind::GL(3)));
        assert_eq!(parse_datum(None, Some(2)).unwrap(), Some(DatumKind::GL(2)));
        assert_eq!(parse_datum(Some("SL"), Some(2)).unwrap(), Some(DatumKind::A(2)));
        assert_eq!(parse_datum(Some("G"), None).unwrap(), Some(DatumKind::G2));
        assert_eq!(parse_datum(None, None).unwrap(), None);
        assert!(matches!(parse_datum(Some("E"), Some(8)), Err(Error::UnsupportedDatum(_))));
        assert!(matches!(parse_datum(Some("B"), Some(3)), Err(Error::UnsupportedDatum(_))));
        assert!(parse_datum(Some("A"), None).is_err());
    }

    #[test]
    fn validation() {
        let mut c = RunConfig { datum: Some(DatumKind::GL(3)), parabolic: Some(vec![2, 1]), ..Default::default() };
        assert!(c.validate().is_ok());
        c.parabolic = Some(vec![2, 2]);
        assert!(c.validate().is_err());
        c.parabolic = None;
        c.points = 0;
        assert!(c.validate().is_err());
        c.points = 2;
        c.slope = Some("-1/3".into());
        assert!(matches!(c.validate(), Err(Error::SlopeOutOfRange(_))));
        c.slope = Some("1/3".into());
        assert_eq!(c.slope().unwrap(), Some(crate::theta::rat(1, 3)));
    }

    #[test]
    fn streams_are_order_independent() {
        let c = RunConfig { seed: 42, ..Default::default() };
        let a: u64 = c.rng("theta").gen();
        let _: u64 = c.rng("billey").gen();
        assert_eq!(a, c.rng("theta").gen::<u64>());
        assert_ne!(a, c.rng("billey").gen::<u64>());
        assert_ne!(a, RunConfig { seed: 43, ..Default::default() }.rng("theta").gen::<u64>());
    }
}
