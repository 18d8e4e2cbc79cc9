use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::coeff::{int, rat, rat_pow, trim, Coeff, LaurentPoly, Rational};
use super::scalar::{EvalScalar, Scalar, SeriesContext, SymScalar};
use super::series::{QSeries, EXACT};
use super::symbols::{LatticeVector, SymbolTable};
use crate::error::{Error, Result};

fn mono(v: &LatticeVector, k: i32, c: Rational) -> LaurentPoly {
    LaurentPoly::monomial(trim(v.0.iter().map(|x| x * k).collect()), c)
}

/// Theta series of `u` as an exact truncation through `q^trunc`, in units of `1/qden`.
pub fn theta_series(u: &LatticeVector, ctx: &SeriesContext) -> QSeries<LaurentPoly> {
    let d = ctx.qden as i64;
    let n = ctx.trunc as i64;
    let prec = ctx.max_exp();
    let lead = mono(u, 1, int(1)).sub(&mono(u, -1, int(1)));
    let mut s = QSeries::from_coeffs(0, vec![lead], EXACT);
    for k in 1..=n {
        let f1 = QSeries::from_coeffs(0, {
            let mut v = vec![LaurentPoly::one()];
            v.resize((k * d) as usize, LaurentPoly::default());
            v.push(mono(u, 2, int(-1)));
            v
        }, EXACT);
        let f2 = QSeries::from_coeffs(0, {
            let mut v = vec![LaurentPoly::one()];
            v.resize((k * d) as usize, LaurentPoly::default());
            v.push(mono(u, -2, int(-1)));
            v
        }, EXACT);
        s = s.mul(&f1).truncate(prec).mul(&f2).truncate(prec);
    }
    s.truncate(prec)
}

/// `θ(u) = (x^{1/2} - x^{-1/2}) ∏_{n≥1} (1 - q^n x)(1 - q^n/x)` with `x = e^{2πi u}`.
pub fn theta(u: &LatticeVector, ctx: &Arc<SeriesContext>) -> SymScalar {
    Scalar::from_series(theta_series(u, ctx), ctx.clone())
}

/// `P(x, y) = θ(x - y) θ(ħ) / (θ(y + ħ) θ(x))`.
pub fn pfun(x: &LatticeVector, y: &LatticeVector, ctx: &Arc<SeriesContext>) -> Result<SymScalar> {
    let h = ctx.symbols.hbar_vector();
    let num = theta(&x.sub(y), ctx).mul(&theta(&h, ctx))?;
    let den = theta(&y.add(&h), ctx).mul(&theta(x, ctx))?;
    if den.is_zero() {
        return Err(Error::Pole(format!("P({}, {})", x.display(&ctx.symbols), y.display(&ctx.symbols))));
    }
    num.div(&den)
}

/// `Q(x, y) = θ(x + ħ) θ(y) / (θ(y + ħ) θ(x))`.
pub fn qfun(x: &LatticeVector, y: &LatticeVector, ctx: &Arc<SeriesContext>) -> Result<SymScalar> {
    let h = ctx.symbols.hbar_vector();
    let num = theta(&x.add(&h), ctx).mul(&theta(y, ctx))?;
    let den = theta(&y.add(&h), ctx).mul(&theta(x, ctx))?;
    if den.is_zero() {
        return Err(Error::Pole(format!("Q({}, {})", x.display(&ctx.symbols), y.display(&ctx.symbols))));
    }
    num.div(&den)
}

/// Rational values assigned to the half-exponentials `e^{πi s}` of every symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationPoint {
    pub values: Vec<Rational>,
}

impl EvaluationPoint {
    pub fn new(values: Vec<Rational>) -> Self {
        EvaluationPoint { values }
    }

    /// Draws `p/q` with `2 <= p, q <= 19` and `p != q` for every symbol.
    pub fn sample(table: &SymbolTable, rng: &mut ChaCha8Rng) -> Self {
        let values = (0..table.len())
            .map(|_| loop {
                let p: i64 = rng.gen_range(2..=19);
                let q: i64 = rng.gen_range(2..=19);
                if p != q {
                    break rat(p, q);
                }
            })
            .collect();
        EvaluationPoint { values }
    }

    /// Value of `e^{πi u}`.
    pub fn half_exp(&self, u: &LatticeVector) -> Rational {
        let mut r = Rational::one();
        for (s, &k) in u.0.iter().enumerate() {
            if k != 0 {
                r *= rat_pow(&self.values[s], k);
            }
        }
        r
    }
}

/// Theta series of `u` evaluated at a point; fails when `e^{πi u} = ±1`.
pub fn theta_eval(u: &LatticeVector, point: &EvaluationPoint, ctx: &SeriesContext) -> Result<QSeries<Rational>> {
    let r = point.half_exp(u);
    let r2 = &r * &r;
    if r2.is_one() {
        return Err(Error::DegeneratePoint(format!("theta({})", u.display(&ctx.symbols))));
    }
    let n = ctx.trunc as usize;
    let d = ctx.qden as usize;
    let len = n * d + 1;
    let mut s = vec![Rational::zero(); len];
    s[0] = &r - r.recip();
    let r2i = r2.recip();
    for k in 1..=n {
        let step = k * d;
        for mult in [&r2, &r2i] {
            for e in (step..len).rev() {
                let t = &s[e - step] * mult;
                s[e] -= t;
            }
        }
    }
    Ok(QSeries::from_coeffs(0, s, ctx.max_exp()))
}

/// Evaluates a symbolic scalar at a point.
pub fn evaluate(s: &SymScalar, point: &EvaluationPoint) -> Result<EvalScalar> {
    s.evaluate(&point.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_at_two() {
        let t = SymbolTable::numbered(1, 0);
        let ctx = SeriesContext::new(5, t.clone());
        let u = t.basis(0);
        let th = theta(&u, &ctx);
        let p = EvaluationPoint::new(vec![int(2), int(3)]);
        let e = evaluate(&th, &p).unwrap().as_series().unwrap();
        assert_eq!(e.coeff(0), rat(3, 2));
        assert_eq!(e.coeff(1), rat(-51, 8));
        let direct = theta_eval(&u, &p, &ctx).unwrap();
        assert_eq!(direct, e);
    }

    #[test]
    fn theta_is_odd_symbolically() {
        let t = SymbolTable::numbered(2, 1);
        let ctx = SeriesContext::new(6, t.clone());
        let u = t.parse_vector("z1-2z2+hbar").unwrap();
        let a = theta(&u, &ctx);
        let b = theta(&u.neg(), &ctx).neg();
        assert!(a.equals(&b).unwrap());
    }

    #[test]
    fn degenerate_point_detected() {
        let t = SymbolTable::numbered(2, 0);
        let ctx = SeriesContext::new(3, t.clone());
        let p = EvaluationPoint::new(vec![int(2), int(4), int(3)]);
        let u = t.parse_vector("2z1-z2").unwrap();
        assert!(matches!(theta_eval(&u, &p, &ctx), Err(Error::DegeneratePoint(_))));
    }
}
