//! The doubly twisted group algebra, elliptic Demazure–Lusztig operators and
//! their expansion coefficients.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::roots::{Elem, WeylGroup};
use crate::theta::expr::ZERO;
use crate::theta::{ThetaExpr, Verifier};

/// Element `Σ a_{w,v} δ_w δ^d_v` with coefficients written on the left.
#[derive(Clone, Debug)]
pub struct TwistedElement {
    group: Arc<WeylGroup>,
    terms: BTreeMap<(Elem, Elem), ThetaExpr>,
}

impl TwistedElement {
    pub fn zero(group: &Arc<WeylGroup>) -> Self {
        TwistedElement { group: group.clone(), terms: BTreeMap::new() }
    }

    /// `a δ_w δ^d_v`.
    pub fn basis(group: &Arc<WeylGroup>, a: ThetaExpr, w: Elem, v: Elem) -> Self {
        let mut t = Self::zero(group);
        t.add_term(w, v, &a);
        t
    }

    pub fn one(group: &Arc<WeylGroup>) -> Self {
        let e = group.identity();
        Self::basis(group, ThetaExpr::one(), e, e)
    }

    pub fn scalar(group: &Arc<WeylGroup>, a: ThetaExpr) -> Self {
        let e = group.identity();
        Self::basis(group, a, e, e)
    }

    pub fn delta(group: &Arc<WeylGroup>, w: Elem) -> Self {
        Self::basis(group, ThetaExpr::one(), w, group.identity())
    }

    pub fn delta_d(group: &Arc<WeylGroup>, v: Elem) -> Self {
        Self::basis(group, ThetaExpr::one(), group.identity(), v)
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Elem, Elem), &ThetaExpr)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: Elem, v: Elem) -> &ThetaExpr {
        self.terms.get(&(w, v)).unwrap_or(&ZERO)
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, w: Elem, v: Elem, a: &ThetaExpr) {
        if a.is_zero() {
            return;
        }
        let slot = self.terms.entry((w, v)).or_default();
        slot.add_assign(a);
        if slot.is_zero() {
            self.terms.remove(&(w, v));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&(w, v), a) in &o.terms {
            r.add_term(w, v, a);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TwistedElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(k, a)| (*k, a.neg())).collect(),
        }
    }

    /// `a · self`.
    pub fn left_scale(&self, a: &ThetaExpr) -> Self {
        let mut r = Self::zero(&self.group);
        for (&(w, v), c) in &self.terms {
            r.add_term(w, v, &a.mul(c));
        }
        r
    }

    /// `a δ_w δ^d_v · a' δ_{w'} δ^d_{v'} = a · ^{w v^d}a' δ_{ww'} δ^d_{vv'}`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let g = &self.group;
        let mut r = Self::zero(g);
        for (&(w, v), a) in &self.terms {
            let m = g.action(w, v);
            for (&(w2, v2), a2) in &o.terms {
                let moved = if m.is_identity() { a2.clone() } else { a2.map(&m)? };
                r.add_term(g.mul(w, w2), g.mul(v, v2), &a.mul(&moved));
            }
        }
        Ok(r)
    }

    /// Coefficientwise identity test.
    pub fn equals(&self, o: &Self, ver: &Verifier) -> Result<bool> {
        let diff = self.sub(o);
        for a in diff.terms.values() {
            if !ver.is_zero(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn simple_data(g: &WeylGroup, i: usize) -> Result<(crate::theta::LatticeVector, crate::theta::LatticeVector)> {
    g.validate_word(&[i])?;
    let d = g.datum();
    Ok((d.z(&d.simple_roots[i - 1]), d.lambda(&d.simple_coroots[i - 1])))
}

/// `T_α = δ^d_α (P(z_α, λ_{α^∨}) + Q(z_α, λ_{α^∨}) δ_α)` for the `i`-th simple root.
pub fn dl_operator(g: &Arc<WeylGroup>, i: usize) -> Result<TwistedElement> {
    let (z, l) = simple_data(g, i)?;
    let h = g.datum().hbar();
    let s = g.simple(i);
    let e = g.identity();
    let inner = TwistedElement::scalar(g, ThetaExpr::p(&z, &l, &h)?)
        .add(&TwistedElement::basis(g, ThetaExpr::q(&z, &l, &h)?, s, e));
    TwistedElement::delta_d(g, s).mul(&inner)
}

/// `T^d_α = δ_α (P(λ_{α^∨}, z_α) + Q(λ_{α^∨}, z_α) δ^d_α)`.
pub fn dual_dl_operator(g: &Arc<WeylGroup>, i: usize) -> Result<TwistedElement> {
    let (z, l) = simple_data(g, i)?;
    let h = g.datum().hbar();
    let s = g.simple(i);
    let e = g.identity();
    let inner = TwistedElement::scalar(g, ThetaExpr::p(&l, &z, &h)?)
        .add(&TwistedElement::basis(g, ThetaExpr::q(&l, &z, &h)?, e, s));
    TwistedElement::delta(g, s).mul(&inner)
}

/// Ordered product of DL operators (or their duals) along `word`.
pub fn t_word(g: &Arc<WeylGroup>, word: &[usize], dual: bool) -> Result<TwistedElement> {
    g.validate_word(word)?;
    let mut acc = TwistedElement::one(g);
    for &i in word {
        let t = if dual { dual_dl_operator(g, i)? } else { dl_operator(g, i)? };
        acc = acc.mul(&t)?;
    }
    Ok(acc)
}

/// Table `(u, w) ↦ c_{u,w}` over a Weyl group; absent entries are zero.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    group: Arc<WeylGroup>,
    entries: HashMap<(Elem, Elem), ThetaExpr>,
}

impl CoefficientTable {
    pub fn new(group: &Arc<WeylGroup>) -> Self {
        CoefficientTable { group: group.clone(), entries: HashMap::new() }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn get(&self, u: Elem, w: Elem) -> &ThetaExpr {
        self.entries.get(&(u, w)).unwrap_or(&ZERO)
    }

    pub fn set(&mut self, u: Elem, w: Elem, c: ThetaExpr) {
        if c.is_zero() {
            self.entries.remove(&(u, w));
        } else {
            self.entries.insert((u, w), c);
        }
    }

    /// Nonzero entries in row `u`.
    pub fn row(&self, u: Elem) -> Vec<(Elem, &ThetaExpr)> {
        let mut r: Vec<_> = self.group.elements().filter_map(|w| self.entries.get(&(u, w)).map(|c| (w, c))).collect();
        r.sort_by_key(|(w, _)| (self.group.length(*w), *w));
        r
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inverse of a Bruhat-triangular table whose diagonal entries are single monomials.
    pub fn invert_triangular(&self) -> Result<CoefficientTable> {
        let g = &self.group;
        let mut out = CoefficientTable::new(g);
        let mut diag_inv: HashMap<Elem, ThetaExpr> = HashMap::new();
        for w in g.elements() {
            let d = self.get(w, w);
            if d.is_zero() {
                return Err(Error::NotInvertible(format!("zero diagonal entry at {}", g.label(w))));
            }
            diag_inv.insert(w, d.inv()?);
        }
        let by_len = g.elements_by_length();
        for u in g.elements() {
            let lower = g.lower_interval(u);
            let below: Vec<Elem> = by_len.iter().rev().copied().filter(|w| lower[w.0]).collect();
            let mut row: Vec<(Elem, ThetaExpr)> = Vec::new();
            for &w in &below {
                let target = if w == u { ThetaExpr::one() } else { ThetaExpr::zero() };
                let mut acc = target;
                for (v, bv) in &row {
                    let a = self.get(*v, w);
                    if !a.is_zero() {
                        acc = acc.sub(&bv.mul(a));
                    }
                }
                let b = acc.mul(&diag_inv[&w]);
                if !b.is_zero() {
                    row.push((w, b));
                }
            }
            for (w, b) in row {
                out.set(u, w, b);
            }
        }
        Ok(out)
    }

    /// Entries `(u, w)` with `w ≰ u` that are nonzero.
    pub fn triangularity_violations(&self) -> Vec<(Elem, Elem)> {
        let mut v: Vec<_> = self.entries.keys().filter(|(u, w)| !self.group.bruhat_leq(*w, *u)).copied().collect();
        v.sort();
        v
    }

    /// Table identity test up to the verifier.
    pub fn equals(&self, o: &CoefficientTable, ver: &Verifier) -> Result<bool> {
        for u in self.group.elements() {
            for w in self.group.elements() {
                if !ver.equal(self.get(u, w), o.get(u, w))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Matrix product `Σ_v self_{u,v} o_{v,w}` (coefficients commute).
    pub fn matmul(&self, o: &CoefficientTable) -> CoefficientTable {
        let g = &self.group;
        let mut out = CoefficientTable::new(g);
        for u in g.elements() {
            for w in g.elements() {
                let mut acc = ThetaExpr::zero();
                for v in g.elements() {
                    let (a, b) = (self.get(u, v), o.get(v, w));
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                out.set(u, w, acc);
            }
        }
        out
    }
}

/// `a_{u,w}` from `δ^d_{u^{-1}} T_u = Σ_w a_{u,w} δ_w`.
pub fn expand_a(g: &Arc<WeylGroup>) -> Result<CoefficientTable> {
    expand(g, false)
}

/// `a^d_{u,w}` from `δ_{u^{-1}} T^d_u = Σ_w a^d_{u,w} δ^d_w`.
pub fn expand_a_dual(g: &Arc<WeylGroup>) -> Result<CoefficientTable> {
    expand(g, true)
}

fn expand(g: &Arc<WeylGroup>, dual: bool) -> Result<CoefficientTable> {
    let mut table = CoefficientTable::new(g);
    let e = g.identity();
    for u in g.elements() {
        let ui = g.inverse(u);
        let pre = if dual { TwistedElement::delta(g, ui) } else { TwistedElement::delta_d(g, ui) };
        let x = pre.mul(&t_word(g, g.word(u), dual)?)?;
        for (&(w, v), c) in x.terms() {
            let (main, other) = if dual { (v, w) } else { (w, v) };
            if other != e {
                return Err(Error::InvalidArgument(format!(
                    "expansion of {} has a stray twisted component",
                    g.label(u)
                )));
            }
            table.set(u, main, c.clone());
        }
    }
    Ok(table)
}

/// `b_{u,w}` as the inverse of the `a`-table.
pub fn invert_to_b(a: &CoefficientTable) -> Result<CoefficientTable> {
    a.invert_triangular()
}
