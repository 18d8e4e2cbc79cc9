use std::cell::RefCell;
use std::rc::Rc;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expr::{EvalCache, ThetaExpr};
use super::functions::EvaluationPoint;
use super::scalar::{EvalScalar, SeriesContext, SymScalar};
use crate::error::{Error, Result};

/// How identities between elliptic expressions are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Compare evaluations at random rational points.
    Eval,
    /// Compare fully symbolic truncated series.
    Symbolic,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eval" => Ok(Mode::Eval),
            "symbolic" => Ok(Mode::Symbolic),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s}"))),
        }
    }
}

const MAX_RESAMPLES: usize = 64;

/// Decides identities at a fixed set of evaluation points (or symbolically).
///
/// Points that make some theta argument degenerate are redrawn from the
/// verifier's own seeded generator, so results depend only on the seed and the
/// sequence of queries.
pub struct Verifier {
    pub ctx: Arc<SeriesContext>,
    pub mode: Mode,
    rng: RefCell<ChaCha8Rng>,
    caches: RefCell<Vec<Rc<EvalCache>>>,
}

impl Verifier {
    pub fn new(ctx: Arc<SeriesContext>, mode: Mode, points: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let caches = (0..points.max(1))
            .map(|_| Rc::new(EvalCache::new(EvaluationPoint::sample(&ctx.symbols, &mut rng), ctx.clone())))
            .collect();
        Verifier { ctx, mode, rng: RefCell::new(rng), caches: RefCell::new(caches) }
    }

    pub fn points(&self) -> usize {
        self.caches.borrow().len()
    }

    pub fn point(&self, k: usize) -> EvaluationPoint {
        self.caches.borrow()[k].point.clone()
    }

    fn resample(&self, k: usize) {
        let p = EvaluationPoint::sample(&self.ctx.symbols, &mut self.rng.borrow_mut());
        self.caches.borrow_mut()[k] = Rc::new(EvalCache::new(p, self.ctx.clone()));
    }

    /// Value of `e` at point `k`, redrawing the point if it is degenerate for `e`.
    pub fn eval(&self, e: &ThetaExpr, k: usize) -> Result<EvalScalar> {
        for _ in 0..MAX_RESAMPLES {
            let cache = self.caches.borrow()[k].clone();
            match e.evaluate(&cache) {
                Err(Error::DegeneratePoint(_)) => self.resample(k),
                other => return other,
            }
        }
        Err(Error::DegeneratePoint("no admissible point found".into()))
    }

    pub fn flatten(&self, e: &ThetaExpr) -> Result<SymScalar> {
        e.flatten(&self.ctx)
    }

    pub fn is_zero(&self, e: &ThetaExpr) -> Result<bool> {
        if e.is_zero() {
            return Ok(true);
        }
        match self.mode {
            Mode::Symbolic => Ok(e.flatten(&self.ctx)?.is_zero()),
            Mode::Eval => {
                for k in 0..self.points() {
                    if !self.eval(e, k)?.is_zero() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn equal(&self, a: &ThetaExpr, b: &ThetaExpr) -> Result<bool> {
        self.is_zero(&a.sub(b))
    }
}
