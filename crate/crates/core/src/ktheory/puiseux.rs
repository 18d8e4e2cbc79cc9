use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::kscalar::{mono, KScalar};
use crate::error::{Error, Result};
use crate::roots::{DatumKind, Parabolic, RootDatum};
use crate::theta::{int, rat, Coeff, LatticeVector, LaurentPoly, QSeries, Rational, SymbolKind, SymbolTable, ThetaExpr, EXACT};

/// `λ ↦ (ħ-part) + h·s₀·τ` on the dynamical symbols of a table.
#[derive(Clone, Debug)]
pub struct TauSubstitution {
    table: Arc<SymbolTable>,
    slope: Rational,
    /// Indexed by symbol; `None` for symbols that are kept.
    images: Vec<Option<(LatticeVector, i64)>>,
}

impl TauSubstitution {
    /// `images` lists `(symbol, non-τ image, height)`; every other symbol is kept.
    pub fn new(table: &Arc<SymbolTable>, slope: Rational, images: Vec<(usize, LatticeVector, i64)>) -> Result<Self> {
        if !slope.is_positive() {
            return Err(Error::SlopeOutOfRange(format!("slope {slope} must be positive")));
        }
        let mut im = vec![None; table.len()];
        for (s, v, h) in images {
            if table.kind(s) != SymbolKind::Lambda {
                return Err(Error::InvalidArgument(format!("{} is not a dynamical symbol", table.name(s))));
            }
            im[s] = Some((v, h));
        }
        Ok(TauSubstitution { table: table.clone(), slope, images: im })
    }

    /// `1/(2 h_max)`.
    pub fn default_slope(d: &RootDatum) -> Rational {
        rat(1, 2 * d.max_coroot_height().max(1) as i64)
    }

    fn check_slope(d: &RootDatum, slope: &Rational) -> Result<()> {
        let h = int(d.max_coroot_height().max(1) as i64);
        if !slope.is_positive() || slope * &h >= Rational::one() {
            return Err(Error::SlopeOutOfRange(format!("need 0 < s < 1/{h}, got {slope}")));
        }
        Ok(())
    }

    /// `λ_{α^∨} = s₀τ` for every simple `α`.
    pub fn for_datum(d: &RootDatum, slope: Option<Rational>) -> Result<Self> {
        Self::build(d, &[], slope)
    }

    /// `λ_{α^∨} = -ħ` for `α ∈ Σ_P` and `s₀τ` otherwise.
    pub fn for_parabolic(p: &Parabolic, slope: Option<Rational>) -> Result<Self> {
        Self::build(p.group().datum(), &p.sigma, slope)
    }

    fn build(d: &RootDatum, sigma: &[usize], slope: Option<Rational>) -> Result<Self> {
        let slope = slope.unwrap_or_else(|| Self::default_slope(d));
        Self::check_slope(d, &slope)?;
        let t = d.symbols();
        let ls = t.indices_of(SymbolKind::Lambda);
        let h = t.hbar_vector();
        let zero = t.zero();
        let mut images = Vec::with_capacity(ls.len());
        match d.kind {
            DatumKind::GL(_) => {
                // λ_{k+1} = λ_k - λ_{α_k^∨}, with λ_1 = 0.
                let (mut v, mut ht) = (zero.clone(), 0i64);
                for (k, &s) in ls.iter().enumerate() {
                    if k > 0 {
                        if sigma.contains(&k) {
                            v = v.add(&h);
                        } else {
                            ht -= 1;
                        }
                    }
                    images.push((s, v.clone(), ht));
                }
            }
            _ => {
                for (k, &s) in ls.iter().enumerate() {
                    if sigma.contains(&(k + 1)) {
                        images.push((s, h.neg(), 0));
                    } else {
                        images.push((s, zero.clone(), 1));
                    }
                }
            }
        }
        Self::new(t, slope, images)
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    /// `v ↦ (u, c)` with `v = u + c·τ` after substitution.
    pub fn split(&self, v: &LatticeVector) -> (LatticeVector, Rational) {
        let mut u = v.clone();
        let mut h = 0i64;
        for (s, im) in self.images.iter().enumerate() {
            let k = v.0.get(s).copied().unwrap_or(0);
            if let (Some((img, ht)), true) = (im, k != 0) {
                u.0[s] = 0;
                u = u.add(&img.scale(k));
                h += ht * k as i64;
            }
        }
        (u, &self.slope * int(h))
    }
}

/// A theta expression after `λ ↦ sτ`: a sum of products of `θ(u + cτ)^e` with
/// rational `c`, expanded lazily in `q^{1/D}`.
#[derive(Clone, Debug)]
pub struct PuiseuxScalar {
    terms: Vec<(Rational, Vec<(LatticeVector, Rational, i32)>)>,
    qden: i64,
}

pub fn tau_substitute(e: &ThetaExpr, t: &TauSubstitution) -> Result<PuiseuxScalar> {
    let mut terms = Vec::with_capacity(e.num_terms());
    let mut den = num_bigint::BigInt::one();
    'terms: for (m, c) in e.terms() {
        let mut fs = Vec::with_capacity(m.factors().len());
        for (v, k) in m.factors() {
            let (u, c) = t.split(v);
            if u.is_zero() && c.is_zero() {
                if *k > 0 {
                    continue 'terms;
                }
                return Err(Error::Pole("theta argument vanishes after substitution".into()));
            }
            den = den.lcm(c.denom());
            fs.push((u, c, *k));
        }
        terms.push((c.clone(), fs));
    }
    let qden = (den * num_bigint::BigInt::from(2)).to_i64().ok_or_else(|| Error::BoundExceeded("q-denominator".into()))?;
    Ok(PuiseuxScalar { terms, qden })
}

/// `q`-order of `θ(u + cτ)` in units of `1/D`, with `C = c·D`.
fn factor_order(cu: i64, d: i64) -> i64 {
    let a = cu.abs();
    let mut ord = -a / 2;
    let mut n = 1;
    while n * d < a {
        ord += n * d - a;
        n += 1;
    }
    ord
}

/// `θ(u + cτ) = q^{ord} · unit · ∏ zeros · R` with `R ∈ 1 + q^{1/D}(...)`.
#[derive(Clone)]
struct Split {
    unit: LaurentPoly,
    zeros: Vec<LaurentPoly>,
    r: QSeries<LaurentPoly>,
}

fn split_factor(u: &LatticeVector, cu: i64, d: i64, prec: i64) -> Split {
    let x = mono(u, 2, int(1));
    let xi = mono(u, -2, int(1));
    let mut unit = mono(u, -1, int(-1));
    let mut zeros = Vec::new();
    let mut r = QSeries::<LaurentPoly>::one();
    let mut binomial = |m: i64, xx: &LaurentPoly, xinv: &LaurentPoly| {
        if m < 0 {
            unit = unit.mul(&xx.neg());
            if -m <= prec {
                r = r.mul(&one_minus(-m, xinv)).truncate(prec);
            }
        } else if m == 0 {
            zeros.push(LaurentPoly::one().sub(xx));
        } else if m <= prec {
            r = r.mul(&one_minus(m, xx)).truncate(prec);
        }
    };
    binomial(cu, &x, &xi);
    let mut n = 1;
    while n * d - cu.abs() <= prec.max(0) {
        binomial(n * d + cu, &x, &xi);
        binomial(n * d - cu, &xi, &x);
        n += 1;
    }
    Split { unit, zeros, r }
}

fn one_minus(m: i64, x: &LaurentPoly) -> QSeries<LaurentPoly> {
    let mut v = vec![LaurentPoly::one()];
    v.resize(m as usize, LaurentPoly::default());
    v.push(x.neg());
    QSeries::from_coeffs(0, v, EXACT)
}

impl PuiseuxScalar {
    pub fn qden(&self) -> i64 {
        self.qden
    }

    fn units(&self, c: &Rational) -> i64 {
        (c * int(self.qden)).to_integer().to_i64().expect("small exponent")
    }

    fn term_order(&self, fs: &[(LatticeVector, Rational, i32)]) -> i64 {
        fs.iter().map(|(_, c, e)| *e as i64 * factor_order(self.units(c), self.qden)).sum()
    }

    /// Smallest `q`-order among the terms (the sum may cancel further).
    pub fn order_bound(&self) -> Option<Rational> {
        self.terms.iter().map(|(_, fs)| self.term_order(fs)).min().map(|o| rat(o, self.qden))
    }

    /// Coefficients of `q^{k/D}` for `k` from [`order_bound`](Self::order_bound) through `0`.
    pub fn leading_coefficients(&self) -> Result<(i64, Vec<KScalar>)> {
        let orders: Vec<i64> = self.terms.iter().map(|(_, fs)| self.term_order(fs)).collect();
        let lo = orders.iter().copied().min().unwrap_or(0).min(0);
        let mut acc = vec![KScalar::zero(); (-lo + 1) as usize];
        let mut cache: HashMap<(LatticeVector, i64, i64), Split> = HashMap::new();
        for ((c, fs), &ord) in self.terms.iter().zip(&orders) {
            if ord > 0 {
                continue;
            }
            let prec = -ord;
            let mut unit = LaurentPoly::monomial(Vec::new(), c.clone());
            let mut num = Vec::new();
            let mut den = Vec::new();
            let mut r = QSeries::<LaurentPoly>::one();
            for (u, cc, e) in fs {
                let cu = self.units(cc);
                let s = cache
                    .entry((u.clone(), cu, prec))
                    .or_insert_with(|| split_factor(u, cu, self.qden, prec))
                    .clone();
                let (su, sr) = if *e > 0 {
                    (s.unit.clone(), s.r.clone())
                } else {
                    (s.unit.try_inv().expect("monomial"), s.r.inverse().expect("unit series").truncate(prec))
                };
                for _ in 0..e.unsigned_abs() {
                    unit = unit.mul(&su);
                    r = r.mul(&sr).truncate(prec);
                }
                for z in s.zeros {
                    if *e > 0 {
                        num.push((z, *e as u32));
                    } else {
                        den.push((z, e.unsigned_abs()));
                    }
                }
            }
            let mut base = unit;
            for (z, k) in &num {
                for _ in 0..*k {
                    base = base.mul(z);
                }
            }
            for k in ord..=0 {
                let rc = r.coeff(k - ord);
                if rc.is_zero() {
                    continue;
                }
                let idx = (k - lo) as usize;
                acc[idx] = acc[idx].add(&KScalar::fraction(base.mul(&rc), &den)?);
            }
        }
        Ok((lo, acc))
    }
}

/// `lim_{q→0}`: the `q^0` coefficient, provided no negative power survives.
pub fn limit_q0(p: &PuiseuxScalar) -> Result<KScalar> {
    let (lo, acc) = p.leading_coefficients()?;
    if let Some(k) = acc[..acc.len() - 1].iter().position(|c| !c.is_zero()) {
        return Err(Error::LimitDoesNotExist(format!("nonzero coefficient at q^({}/{})", lo + k as i64, p.qden)));
    }
    Ok(acc.last().cloned().unwrap_or_default())
}

/// `tau_substitute` followed by [`limit_q0`].
pub fn limit(e: &ThetaExpr, t: &TauSubstitution) -> Result<KScalar> {
    limit_q0(&tau_substitute(e, t)?)
}

/// Which of the two `q → 0` limits of `P(±sτ, v)` / `Q(±sτ, v)` to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PQLimit {
    P,
    Q,
}

/// Closed forms, for `0 < s < 1`, with `a = e(-v)` and `b = e(-ħ)`:
/// `P(sτ) → (1-b)/(1-ab)`, `Q(sτ) → (1-a)b/(1-ab)`,
/// `P(-sτ) → (1-b)a/(1-ab)`, `Q(-sτ) → (1-a)/(1-ab)`.
pub fn limit_pq(f: PQLimit, positive: bool, v: &LatticeVector, hbar: &LatticeVector) -> KScalar {
    let a = mono(v, -2, int(1));
    let b = mono(hbar, -2, int(1));
    let one = LaurentPoly::one();
    let den = one.sub(&a.mul(&b));
    let num = match (f, positive) {
        (PQLimit::P, true) => one.sub(&b),
        (PQLimit::Q, true) => one.sub(&a).mul(&b),
        (PQLimit::P, false) => one.sub(&b).mul(&a),
        (PQLimit::Q, false) => one.sub(&a),
    };
    KScalar::fraction(num, &[(den, 1)]).expect("nonzero denominator")
}
