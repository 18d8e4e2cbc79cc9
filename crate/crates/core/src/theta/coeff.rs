use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::symbols::{LinearMap, SymbolTable};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer power of a rational, negative exponents allowed.
pub fn rat_pow(r: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

/// Coefficient ring of a q-series.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_coeff() -> Self;
    fn one_coeff() -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }
    /// Multiplicative inverse when it exists in the ring.
    fn try_inv(&self) -> Option<Self>;
}

impl Coeff for Rational {
    fn zero_coeff() -> Self {
        Zero::zero()
    }
    fn one_coeff() -> Self {
        One::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Doubled exponent vector: entry `k` at symbol `s` stands for `e^{πi k s}`,
/// so `x = e^{2πi u}` has exponent `2u` and `x^{1/2}` has exponent `u`.
/// Stored without trailing zeros.
pub type ExponentVector = Vec<i32>;

/// Laurent polynomial in the half-exponentials of a symbol table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<ExponentVector, Rational>,
}

impl LaurentPoly {
    pub fn one() -> Self {
        Self::one_coeff()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(exp: ExponentVector, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(trim(exp), c);
        }
        LaurentPoly { terms }
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: &ExponentVector, c: &Rational) {
        if let Some(v) = self.terms.get_mut(e) {
            *v += c;
            if Zero::is_zero(v) {
                self.terms.remove(e);
            }
        } else if !Zero::is_zero(c) {
            self.terms.insert(e.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if Zero::is_zero(c) {
            return LaurentPoly::default();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Evaluates with `values[s] = e^{πi s}`.
    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        let mut acc: Rational = Zero::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (s, &k) in e.iter().enumerate() {
                if k != 0 {
                    m *= rat_pow(&values[s], k);
                }
            }
            acc += m;
        }
        acc
    }

    /// Applies a linear substitution to every exponent vector.
    pub fn substitute(&self, map: &LinearMap) -> Self {
        let mut out = LaurentPoly::default();
        for (e, c) in &self.terms {
            let v = map.apply(&super::symbols::LatticeVector(e.clone()));
            out.add_term(&trim(v.0), c);
        }
        out
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> DisplayLaurent<'a> {
        DisplayLaurent { p: self, table }
    }
}

impl Coeff for LaurentPoly {
    fn zero_coeff() -> Self {
        LaurentPoly::default()
    }
    fn one_coeff() -> Self {
        LaurentPoly::monomial(Vec::new(), One::one())
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = LaurentPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = add_exp(e1, e2);
                out.add_term(&e, &(c1 * c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn add_assign(&mut self, o: &Self) {
        for (e, c) in &o.terms {
            self.add_term(e, c);
        }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some(LaurentPoly::monomial(e.iter().map(|k| -k).collect(), c.recip()))
    }
}

/// Drops trailing zeros so that exponent vectors compare independently of arity.
pub fn trim(mut v: ExponentVector) -> ExponentVector {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn add_exp(a: &[i32], b: &[i32]) -> ExponentVector {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, x) in out.iter_mut().zip(short) {
        *o += x;
    }
    trim(out)
}

pub struct DisplayLaurent<'a> {
    p: &'a LaurentPoly,
    table: &'a SymbolTable,
}

impl fmt::Display for DisplayLaurent<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.p.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let is_const = e.is_empty();
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
            }
            if !is_const {
                let parts: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(s, &k)| format!("{}^{}", self.table.name(s), fmt_half(k)))
                    .collect();
                if !a.is_one() {
                    write!(f, "*")?;
                }
                write!(f, "e[{}]", parts.join(" "))?;
            }
        }
        Ok(())
    }
}

fn fmt_half(k: i32) -> String {
    if k % 2 == 0 {
        format!("{}", k / 2)
    } else {
        format!("{}/2", k)
    }
}
