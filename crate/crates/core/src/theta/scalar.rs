use std::fmt;
use std::sync::Arc;

use super::coeff::{Coeff, LaurentPoly, Rational};
use super::series::QSeries;
use super::symbols::SymbolTable;
use crate::error::{Error, Result};

/// Truncation order, q-denominator and symbol alphabet shared by a family of scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesContext {
    /// Series are kept through `q^trunc`.
    pub trunc: u32,
    /// Exponents live in `(1/qden) Z`.
    pub qden: u32,
    pub symbols: Arc<SymbolTable>,
}

impl SeriesContext {
    pub fn new(trunc: u32, symbols: Arc<SymbolTable>) -> Arc<Self> {
        Arc::new(SeriesContext { trunc, qden: 1, symbols })
    }

    pub fn with_qden(trunc: u32, qden: u32, symbols: Arc<SymbolTable>) -> Arc<Self> {
        Arc::new(SeriesContext { trunc, qden, symbols })
    }

    /// Working precision in units of `1/qden`.
    pub fn max_exp(&self) -> i64 {
        self.trunc as i64 * self.qden as i64
    }
}

/// Quotient of two truncated q-series; no common factors are cancelled.
#[derive(Clone, Debug)]
pub struct Scalar<C> {
    pub num: QSeries<C>,
    pub den: QSeries<C>,
    pub ctx: Arc<SeriesContext>,
}

/// Symbolic scalar with Laurent-polynomial coefficients.
pub type SymScalar = Scalar<LaurentPoly>;
/// Scalar evaluated at a rational point.
pub type EvalScalar = Scalar<Rational>;

fn same_ctx(a: &Arc<SeriesContext>, b: &Arc<SeriesContext>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::ContextMismatch(format!(
            "N={}/D={} vs N={}/D={}",
            a.trunc, a.qden, b.trunc, b.qden
        )))
    }
}

impl<C: Coeff> Scalar<C> {
    pub fn from_series(num: QSeries<C>, ctx: Arc<SeriesContext>) -> Self {
        let num = num.truncate(ctx.max_exp());
        Scalar { num, den: QSeries::one(), ctx }
    }

    pub fn from_parts(num: QSeries<C>, den: QSeries<C>, ctx: Arc<SeriesContext>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut s = Scalar { num, den, ctx };
        s.normalize();
        Ok(s)
    }

    pub fn constant(c: C, ctx: Arc<SeriesContext>) -> Self {
        Scalar { num: QSeries::constant(c), den: QSeries::one(), ctx }
    }

    pub fn zero(ctx: Arc<SeriesContext>) -> Self {
        Self::constant(C::zero_coeff(), ctx)
    }

    pub fn one(ctx: Arc<SeriesContext>) -> Self {
        Self::constant(C::one_coeff(), ctx)
    }

    /// Divides out the denominator when its leading coefficient is a unit.
    fn normalize(&mut self) {
        if self.den.leading().is_some_and(|c| c.try_inv().is_some()) {
            if let Some(inv) = self.den.inverse() {
                self.num = self.num.mul(&inv).truncate(self.ctx.max_exp());
                self.den = QSeries::one();
            }
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &o.ctx)?;
        let cap = self.ctx.max_exp();
        if self.den == o.den {
            return Ok(Scalar { num: self.num.add(&o.num).truncate(cap), den: self.den.clone(), ctx: self.ctx.clone() });
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den)).truncate(cap);
        let den = self.den.mul(&o.den).truncate(cap);
        Self::from_parts(num, den, self.ctx.clone())
    }

    pub fn neg(&self) -> Self {
        Scalar { num: self.num.neg(), den: self.den.clone(), ctx: self.ctx.clone() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &o.ctx)?;
        let cap = self.ctx.max_exp();
        let num = self.num.mul(&o.num).truncate(cap);
        let den = self.den.mul(&o.den).truncate(cap);
        Self::from_parts(num, den, self.ctx.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::from_parts(self.den.clone(), self.num.clone(), self.ctx.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    /// Vanishes to the working precision.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality by cross-multiplication to the precision both sides support.
    pub fn equals(&self, o: &Self) -> Result<bool> {
        same_ctx(&self.ctx, &o.ctx)?;
        let lhs = self.num.mul(&o.den);
        let rhs = o.num.mul(&self.den);
        Ok(lhs.sub(&rhs).is_zero())
    }

    /// Highest exponent (units of `1/D`) up to which the cross-multiplied
    /// comparison with `o` is meaningful.
    pub fn compare_precision(&self, o: &Self) -> i64 {
        let lhs = self.num.mul(&o.den);
        let rhs = o.num.mul(&self.den);
        lhs.precision().min(rhs.precision())
    }

    /// Series expansion when the denominator is a unit.
    pub fn as_series(&self) -> Option<QSeries<C>> {
        let inv = self.den.inverse()?;
        Some(self.num.mul(&inv).truncate(self.ctx.max_exp()))
    }
}

impl SymScalar {
    /// Evaluates every coefficient at `values[s] = e^{πi s}`.
    pub fn evaluate(&self, values: &[Rational]) -> Result<EvalScalar> {
        let num = self.num.map_coeffs(|c| c.evaluate(values));
        let den = self.den.map_coeffs(|c| c.evaluate(values));
        if den.is_zero() {
            return Err(Error::DegeneratePoint("denominator vanishes".into()));
        }
        Scalar::from_parts(num, den, self.ctx.clone())
    }
}

impl fmt::Display for SymScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.ctx.symbols;
        let d = self.ctx.qden as i64;
        let show = |s: &QSeries<LaurentPoly>| -> String {
            if s.is_zero() {
                return "0".into();
            }
            s.terms()
                .map(|(e, c)| format!("({}){}", c.display(t), qpow(e, d)))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        if self.den == QSeries::one() {
            write!(f, "{} + O(q^{})", show(&self.num), self.ctx.trunc + 1)
        } else {
            write!(f, "[{}] / [{}] + O(q^{})", show(&self.num), show(&self.den), self.ctx.trunc + 1)
        }
    }
}

impl fmt::Display for EvalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.ctx.qden as i64;
        match self.as_series() {
            Some(s) if s.is_zero() => write!(f, "0 + O(q^{})", self.ctx.trunc + 1),
            Some(s) => {
                let parts: Vec<String> = s.terms().map(|(e, c)| format!("({c}){}", qpow(e, d))).collect();
                write!(f, "{} + O(q^{})", parts.join(" + "), self.ctx.trunc + 1)
            }
            None => write!(f, "<non-unit denominator>"),
        }
    }
}

fn qpow(e: i64, d: i64) -> String {
    if e == 0 {
        String::new()
    } else if d == 1 {
        format!("q^{e}")
    } else {
        format!("q^({e}/{d})")
    }
}
