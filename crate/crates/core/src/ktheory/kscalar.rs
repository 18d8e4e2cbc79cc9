use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::theta::coeff::trim;
use crate::theta::{Coeff, LatticeVector, LinearMap, LaurentPoly, Rational, SymbolTable};

/// `e(k·v/2)` with coefficient `c`, in the doubled exponent encoding.
pub fn mono(v: &LatticeVector, k: i32, c: Rational) -> LaurentPoly {
    LaurentPoly::monomial(trim(v.0.iter().map(|x| x * k).collect()), c)
}

/// Splits `p` as `unit · p'` where the first term of `p'` is `1`.
fn normalize(p: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    let (e, c) = p.terms().next().expect("nonzero factor");
    let unit = LaurentPoly::monomial(e.clone(), c.clone());
    let inv = unit.try_inv().expect("monomial");
    (unit, p.mul(&inv))
}

/// Rational function in the half-exponentials `e(·/2)` of a symbol table.
///
/// The denominator is kept as a multiset of normalized factors so that sums
/// share a least common denominator. Equality is cross-multiplication.
#[derive(Clone, Debug)]
pub struct KScalar {
    num: LaurentPoly,
    den: BTreeMap<LaurentPoly, u32>,
}

impl Default for KScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl KScalar {
    pub fn zero() -> Self {
        KScalar { num: LaurentPoly::default(), den: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(LaurentPoly::monomial(Vec::new(), c))
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        KScalar { num, den: BTreeMap::new() }
    }

    /// `e(k·v/2)`; `exp(v, -2)` is `e(-v)`.
    pub fn exp(v: &LatticeVector, k: i32) -> Self {
        Self::from_poly(mono(v, k, One::one()))
    }

    /// `y = -e(-ħ)`.
    pub fn y(hbar: &LatticeVector) -> Self {
        Self::from_poly(mono(hbar, -2, -Rational::one()))
    }

    /// `num / ∏ den_i^{k_i}`.
    pub fn fraction(num: LaurentPoly, den: &[(LaurentPoly, u32)]) -> Result<Self> {
        let mut out = Self::from_poly(num);
        for (d, k) in den {
            if d.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let (unit, f) = normalize(d);
            let uinv = unit.try_inv().expect("monomial");
            for _ in 0..*k {
                out.num = out.num.mul(&uinv);
            }
            if f != LaurentPoly::one() {
                *out.den.entry(f).or_insert(0) += k;
            }
        }
        if out.num.is_zero() {
            return Ok(Self::zero());
        }
        Ok(out)
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one();
        for (f, k) in &self.den {
            for _ in 0..*k {
                d = d.mul(f);
            }
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> Self {
        KScalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (f, k) in &o.den {
            *den.entry(f.clone()).or_insert(0) += k;
        }
        KScalar { num: self.num.mul(&o.num), den }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let mut lcm = self.den.clone();
        for (f, &k) in &o.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let lift = |x: &KScalar| {
            let mut n = x.num.clone();
            for (f, &k) in &lcm {
                for _ in x.den.get(f).copied().unwrap_or(0)..k {
                    n = n.mul(f);
                }
            }
            n
        };
        let num = lift(self).add(&lift(o));
        if num.is_zero() {
            return Self::zero();
        }
        KScalar { num, den: lcm }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::fraction(self.denominator(), &[(self.num.clone(), 1)])
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Applies a linear map to every exponent vector.
    pub fn substitute(&self, m: &LinearMap) -> Result<Self> {
        let den: Vec<(LaurentPoly, u32)> = self.den.iter().map(|(f, &k)| (f.substitute(m), k)).collect();
        Self::fraction(self.num.substitute(m), &den)
    }

    /// The value at `y = 0`, i.e. `e(-ħ) → 0`: the ratio of the parts of top
    /// degree in `ħ`, if the degrees allow a finite limit.
    pub fn at_y_zero(&self, hbar_index: usize) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let deg = |e: &Vec<i32>| e.get(hbar_index).copied().unwrap_or(0);
        let top = |p: &LaurentPoly| -> (i32, LaurentPoly) {
            let d = p.terms().map(|(e, _)| deg(e)).max().expect("nonzero");
            let mut t = LaurentPoly::default();
            for (e, c) in p.terms().filter(|(e, _)| deg(e) == d) {
                t.add_assign(&LaurentPoly::monomial(e.clone(), c.clone()));
            }
            (d, t)
        };
        let (dn, tn) = top(&self.num);
        let mut dd = 0;
        let mut parts = Vec::new();
        for (f, &k) in &self.den {
            let (d, t) = top(f);
            dd += d * k as i32;
            parts.push((t, k));
        }
        match dn.cmp(&dd) {
            std::cmp::Ordering::Less => Ok(Self::zero()),
            std::cmp::Ordering::Equal => Self::fraction(tn, &parts),
            std::cmp::Ordering::Greater => Err(Error::LimitDoesNotExist("pole at y = 0".into())),
        }
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduced(&self) -> Self {
        let mut out = self.clone();
        for (f, k) in self.den.iter() {
            for _ in 0..*k {
                match exact_div(&out.num, f) {
                    Some(q) => {
                        out.num = q;
                        let m = out.den.get_mut(f).expect("factor");
                        *m -= 1;
                        if *m == 0 {
                            out.den.remove(f);
                        }
                    }
                    None => break,
                }
            }
        }
        out
    }

    /// Shown in lowest terms with respect to the stored factors.
    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> DisplayK<'a> {
        DisplayK { k: self.reduced(), table }
    }
}

/// `n / f` when `f` divides `n` in the Laurent ring, by long division in the
/// lexicographic order on padded exponents.
fn exact_div(n: &LaurentPoly, f: &LaurentPoly) -> Option<LaurentPoly> {
    let len = n.terms().chain(f.terms()).map(|(e, _)| e.len()).max().unwrap_or(0);
    let pad = |e: &Vec<i32>| {
        let mut v = e.clone();
        v.resize(len, 0);
        v
    };
    let lead = |p: &LaurentPoly| p.terms().map(|(e, c)| (pad(e), c.clone())).max_by(|a, b| a.0.cmp(&b.0));
    let trail = |p: &LaurentPoly| p.terms().map(|(e, _)| pad(e)).min().expect("nonzero");
    let (fe, fc) = lead(f)?;
    let floor: Vec<i32> = trail(n).iter().zip(trail(f)).map(|(a, b)| a - b).collect();
    let mut rem = n.clone();
    let mut q = LaurentPoly::default();
    while let Some((re, rc)) = lead(&rem) {
        let qe: Vec<i32> = re.iter().zip(&fe).map(|(a, b)| a - b).collect();
        if qe < floor {
            return None;
        }
        let m = LaurentPoly::monomial(trim(qe), rc / &fc);
        rem = rem.sub(&m.mul(f));
        q.add_assign(&m);
    }
    Some(q)
}

impl PartialEq for KScalar {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

pub struct DisplayK<'a> {
    k: KScalar,
    table: &'a SymbolTable,
}

impl fmt::Display for DisplayK<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k.den.is_empty() {
            return write!(f, "{}", self.k.num.display(self.table));
        }
        write!(f, "({})/(", self.k.num.display(self.table))?;
        for (i, (p, k)) in self.k.den.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "({})", p.display(self.table))?;
            if *k > 1 {
                write!(f, "^{k}")?;
            }
        }
        write!(f, ")")
    }
}
