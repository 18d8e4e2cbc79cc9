//! Exact elliptic expressions: rational linear combinations of monomials
//! `∏ θ(u_k)^{e_k}` in theta functions of lattice vectors.
//!
//! Every `P`/`Q` weight is such a monomial, so sums and products of weights,
//! Weyl actions and linear specializations stay exact here. Equality with
//! theta relations taken into account is decided after flattening to
//! [`Scalar`](super::scalar::Scalar)s.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::coeff::{int, LaurentPoly, Rational};
use super::functions::{theta_eval, theta_series, EvaluationPoint};
use super::scalar::{EvalScalar, Scalar, SeriesContext, SymScalar};
use super::series::QSeries;
use super::symbols::{LatticeVector, LinearMap, SymbolTable};
use crate::error::{Error, Result};

/// `∏ θ(u)^e` over sign-normalized, nonzero `u`, sorted by `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ThetaMonomial(Vec<(LatticeVector, i32)>);

impl ThetaMonomial {
    pub fn factors(&self) -> &[(LatticeVector, i32)] {
        &self.0
    }

    fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ThetaMonomial(out)
    }

    fn inv(&self) -> Self {
        ThetaMonomial(self.0.iter().map(|(u, e)| (u.clone(), -e)).collect())
    }
}

/// Finite sum `Σ c_m · m` of theta monomials with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThetaExpr {
    terms: BTreeMap<ThetaMonomial, Rational>,
}

/// Shared zero, for lookups that return references.
pub static ZERO: ThetaExpr = ThetaExpr { terms: BTreeMap::new() };

impl ThetaExpr {
    pub fn zero() -> Self {
        ThetaExpr::default()
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ThetaMonomial::default(), c);
        }
        ThetaExpr { terms }
    }

    /// `θ(u)^e`.
    pub fn theta_pow(u: &LatticeVector, e: i32) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        if u.is_zero() {
            return if e > 0 { Ok(Self::zero()) } else { Err(Error::Pole("theta(0) in a denominator".into())) };
        }
        let (v, sign) = if u.is_negative() { (u.neg(), e % 2 != 0) } else { (u.clone(), false) };
        let mut terms = BTreeMap::new();
        terms.insert(ThetaMonomial(vec![(v, e)]), int(if sign { -1 } else { 1 }));
        Ok(ThetaExpr { terms })
    }

    pub fn theta(u: &LatticeVector) -> Self {
        Self::theta_pow(u, 1).expect("positive power never has a pole")
    }

    /// `P(x, y) = θ(x - y) θ(ħ) / (θ(y + ħ) θ(x))`.
    pub fn p(x: &LatticeVector, y: &LatticeVector, hbar: &LatticeVector) -> Result<Self> {
        Ok(Self::theta_pow(x, -1)?
            .mul(&Self::theta_pow(&y.add(hbar), -1)?)
            .mul(&Self::theta(&x.sub(y)))
            .mul(&Self::theta(hbar)))
    }

    /// `Q(x, y) = θ(x + ħ) θ(y) / (θ(y + ħ) θ(x))`.
    pub fn q(x: &LatticeVector, y: &LatticeVector, hbar: &LatticeVector) -> Result<Self> {
        Ok(Self::theta_pow(x, -1)?
            .mul(&Self::theta_pow(&y.add(hbar), -1)?)
            .mul(&Self::theta(&x.add(hbar)))
            .mul(&Self::theta(y)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ThetaMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// No terms survive; a nonempty expression may still vanish as a function.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.0.is_empty() && c.is_one())
    }

    fn add_term(&mut self, m: ThetaMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ThetaExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        ThetaExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = ThetaExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Inverse of a single-term expression.
    pub fn inv(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(format!("expression with {} terms", self.terms.len())));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(m.inv(), c.recip());
        Ok(ThetaExpr { terms })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Applies a linear map to every theta argument. Factors whose argument
    /// becomes zero annihilate the term (positive power) or raise
    /// [`Error::SpecializedPole`] (negative power).
    pub fn map(&self, f: &LinearMap) -> Result<Self> {
        let mut cache: HashMap<&LatticeVector, LatticeVector> = HashMap::new();
        let mut out = ThetaExpr::zero();
        'terms: for (m, c) in &self.terms {
            let mut acc = ThetaMonomial::default();
            let mut coef = c.clone();
            for (u, e) in &m.0 {
                let v = cache.entry(u).or_insert_with(|| f.apply(u)).clone();
                if v.is_zero() {
                    if *e > 0 {
                        continue 'terms;
                    }
                    return Err(Error::SpecializedPole("theta argument specializes to 0".into()));
                }
                let (v, flip) = if v.is_negative() { (v.neg(), e % 2 != 0) } else { (v, false) };
                if flip {
                    coef = -coef;
                }
                acc = acc.mul(&ThetaMonomial(vec![(v, *e)]));
            }
            out.add_term(acc, coef);
        }
        Ok(out)
    }

    /// Distinct theta arguments occurring in the expression.
    pub fn arguments(&self) -> Vec<LatticeVector> {
        let mut v: Vec<LatticeVector> = self.terms.keys().flat_map(|m| m.0.iter().map(|(u, _)| u.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Evaluates at the cache's point.
    pub fn evaluate(&self, cache: &EvalCache) -> Result<EvalScalar> {
        let ctx = cache.ctx.clone();
        let prec = ctx.max_exp();
        let mut acc = QSeries::<Rational>::zero(prec);
        let mut first = true;
        for (m, c) in &self.terms {
            let mut s = QSeries::constant(c.clone());
            for (u, e) in &m.0 {
                let (th, inv) = cache.get(u)?;
                let f = if *e > 0 { &th } else { &inv };
                for _ in 0..e.abs() {
                    s = s.mul(f).truncate(prec);
                }
            }
            if first {
                acc = s.truncate(prec);
                first = false;
            } else {
                acc = acc.add(&s);
            }
        }
        Ok(Scalar::from_series(acc, ctx))
    }

    /// Brings the expression to a single symbolic fraction over a common
    /// denominator of theta powers.
    pub fn flatten(&self, ctx: &Arc<SeriesContext>) -> Result<SymScalar> {
        let prec = ctx.max_exp();
        let mut den_pow: BTreeMap<&LatticeVector, i32> = BTreeMap::new();
        for m in self.terms.keys() {
            for (u, e) in &m.0 {
                if *e < 0 {
                    let d = den_pow.entry(u).or_insert(0);
                    *d = (*d).max(-e);
                }
            }
        }
        let mut thetas: HashMap<LatticeVector, QSeries<LaurentPoly>> = HashMap::new();
        let mut th = |u: &LatticeVector| thetas.entry(u.clone()).or_insert_with(|| theta_series(u, ctx)).clone();
        let mut den = QSeries::<LaurentPoly>::one();
        for (u, k) in &den_pow {
            let t = th(u);
            for _ in 0..*k {
                den = den.mul(&t).truncate(prec);
            }
        }
        let mut num = QSeries::<LaurentPoly>::zero(prec);
        for (m, c) in &self.terms {
            let mut pw: BTreeMap<&LatticeVector, i32> = den_pow.clone();
            for (u, e) in &m.0 {
                *pw.entry(u).or_insert(0) += e;
            }
            let mut s = QSeries::constant(LaurentPoly::one().scale(c));
            for (u, k) in pw {
                let t = th(u);
                for _ in 0..k {
                    s = s.mul(&t).truncate(prec);
                }
            }
            num = num.add(&s);
        }
        Scalar::from_parts(num, den, ctx.clone())
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> DisplayExpr<'a> {
        DisplayExpr { e: self, table }
    }
}

/// Per-point cache of evaluated theta series and their inverses.
pub struct EvalCache {
    pub point: EvaluationPoint,
    pub ctx: Arc<SeriesContext>,
    thetas: RefCell<HashMap<LatticeVector, (QSeries<Rational>, QSeries<Rational>)>>,
}

impl EvalCache {
    pub fn new(point: EvaluationPoint, ctx: Arc<SeriesContext>) -> Self {
        EvalCache { point, ctx, thetas: RefCell::new(HashMap::new()) }
    }

    fn get(&self, u: &LatticeVector) -> Result<(QSeries<Rational>, QSeries<Rational>)> {
        if let Some(v) = self.thetas.borrow().get(u) {
            return Ok(v.clone());
        }
        let t = theta_eval(u, &self.point, &self.ctx)?;
        let i = t.inverse().ok_or_else(|| Error::DegeneratePoint(format!("theta({})", u.display(&self.ctx.symbols))))?;
        self.thetas.borrow_mut().insert(u.clone(), (t.clone(), i.clone()));
        Ok((t, i))
    }

    /// Checks that every argument of `e` evaluates to a nonzero theta.
    pub fn admissible(&self, e: &ThetaExpr) -> bool {
        e.arguments().iter().all(|u| self.get(u).is_ok())
    }
}

pub struct DisplayExpr<'a> {
    e: &'a ThetaExpr,
    table: &'a SymbolTable,
}

impl fmt::Display for DisplayExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.e.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let num: Vec<String> = m.0.iter().filter(|(_, e)| *e > 0).map(|(u, e)| pw(u, *e, self.table)).collect();
            let den: Vec<String> = m.0.iter().filter(|(_, e)| *e < 0).map(|(u, e)| pw(u, -e, self.table)).collect();
            let mut numer = num.join("");
            if !a.is_one() || numer.is_empty() {
                numer = format!("{a}{numer}");
            }
            if den.is_empty() {
                write!(f, "{numer}")?;
            } else {
                write!(f, "{numer}/({})", den.join(""))?;
            }
        }
        Ok(())
    }
}

fn pw(u: &LatticeVector, e: i32, t: &SymbolTable) -> String {
    if e == 1 {
        format!("θ({})", u.display(t))
    } else {
        format!("θ({})^{e}", u.display(t))
    }
}

/// Decides `a = b` at a list of evaluation points.
pub fn equal_at(a: &ThetaExpr, b: &ThetaExpr, caches: &[EvalCache]) -> Result<bool> {
    let d = a.sub(b);
    if d.is_zero() {
        return Ok(true);
    }
    for c in caches {
        if !d.evaluate(c)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::functions::{pfun, qfun};
    use crate::theta::coeff::rat;

    fn setup() -> (Arc<SymbolTable>, Arc<SeriesContext>) {
        let t = SymbolTable::numbered(2, 2);
        let ctx = SeriesContext::new(4, t.clone());
        (t, ctx)
    }

    #[test]
    fn q_times_swapped_q_cancels_exactly() {
        let (t, _) = setup();
        let h = t.hbar_vector();
        let x = t.parse_vector("z1-z2").unwrap();
        let y = t.parse_vector("l1-l2").unwrap();
        let prod = ThetaExpr::q(&x, &y, &h).unwrap().mul(&ThetaExpr::q(&y, &x, &h).unwrap());
        assert!(prod.is_one());
    }

    #[test]
    fn flatten_matches_scalar_constructors() {
        let (t, ctx) = setup();
        let h = t.hbar_vector();
        let x = t.parse_vector("z1-z2").unwrap();
        let y = t.parse_vector("l1-l2+hbar").unwrap();
        let p = ThetaExpr::p(&x, &y, &h).unwrap().flatten(&ctx).unwrap();
        assert!(p.equals(&pfun(&x, &y, &ctx).unwrap()).unwrap());
        let q = ThetaExpr::q(&x, &y, &h).unwrap().flatten(&ctx).unwrap();
        assert!(q.equals(&qfun(&x, &y, &ctx).unwrap()).unwrap());
    }

    #[test]
    fn evaluation_agrees_with_flatten() {
        let (t, ctx) = setup();
        let h = t.hbar_vector();
        let x = t.parse_vector("z1").unwrap();
        let y = t.parse_vector("l2-z2").unwrap();
        let e = ThetaExpr::p(&x, &y, &h).unwrap().add(&ThetaExpr::q(&y, &x, &h).unwrap().scale(&rat(2, 3)));
        let pt = EvaluationPoint::new(vec![rat(2, 3), rat(5, 7), rat(3, 2), rat(11, 4), rat(7, 5)]);
        let cache = EvalCache::new(pt.clone(), ctx.clone());
        let direct = e.evaluate(&cache).unwrap();
        let via = e.flatten(&ctx).unwrap().evaluate(&pt.values).unwrap();
        assert!(direct.equals(&via).unwrap());
    }

    #[test]
    fn specialization_detects_zero_and_pole() {
        let (t, _) = setup();
        let h = t.hbar_vector();
        let l = t.parse_vector("l1").unwrap();
        let z = t.parse_vector("z1").unwrap();
        let mut m = LinearMap::identity(t.len());
        m.set_image(t.index_of("l1").unwrap(), h.neg());
        assert!(ThetaExpr::q(&l, &z, &h).unwrap().map(&m).unwrap().is_zero());
        assert!(ThetaExpr::p(&l, &z, &h).unwrap().map(&m).unwrap().is_one());
        let bad = ThetaExpr::theta_pow(&l.add(&h), -1).unwrap();
        assert!(matches!(bad.map(&m), Err(Error::SpecializedPole(_))));
    }
}
