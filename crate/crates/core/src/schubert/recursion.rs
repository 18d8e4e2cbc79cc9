use std::sync::Arc;

use crate::error::Result;
use crate::roots::{Elem, WeylGroup};
use crate::theta::ThetaExpr;
use crate::twisted::CoefficientTable;

/// `b_{u,w}` built by induction on `u` through left multiplication
/// `u = s_α u'`, using the first letter of the canonical word.
pub fn b_table_left(g: &Arc<WeylGroup>) -> Result<CoefficientTable> {
    let d = g.datum().clone();
    let h = d.hbar();
    let mut t = CoefficientTable::new(g);
    let e = g.identity();
    t.set(e, e, ThetaExpr::one());
    for u in g.elements_by_length().into_iter().skip(1) {
        let i = g.word(u)[0];
        let prev = g.lmul_simple(i, u);
        let s = g.simple(i);
        let act = g.action(s, e);
        let za = d.z(&d.simple_roots[i - 1]);
        let lower = g.lower_interval(u);
        for w in g.elements().filter(|w| lower[w.0]) {
            let lam = d.lambda(&g.act_cochar(g.inverse(w), &d.simple_coroots[i - 1]));
            let mut acc = ThetaExpr::zero();
            let b1 = t.get(prev, w);
            if !b1.is_zero() {
                acc.add_assign(&ThetaExpr::p(&lam, &za, &h)?.mul(&b1.map(&act)?));
            }
            let b2 = t.get(prev, g.lmul_simple(i, w));
            if !b2.is_zero() {
                acc.add_assign(&ThetaExpr::q(&lam.neg(), &za, &h)?.mul(&b2.map(&act)?));
            }
            t.set(u, w, acc);
        }
    }
    Ok(t)
}

/// `b_{u,w}` built through right multiplication `u = u' s_α`, using the last letter.
pub fn b_table_right(g: &Arc<WeylGroup>) -> Result<CoefficientTable> {
    let d = g.datum().clone();
    let h = d.hbar();
    let mut t = CoefficientTable::new(g);
    let e = g.identity();
    t.set(e, e, ThetaExpr::one());
    for u in g.elements_by_length().into_iter().skip(1) {
        let i = *g.word(u).last().expect("nontrivial element");
        let prev = g.rmul_simple(u, i);
        let s = g.simple(i);
        let act = g.action(e, s);
        let lam = d.lambda(&d.simple_coroots[i - 1]);
        let z = g.z_of(prev, &d.simple_roots[i - 1]);
        let p = ThetaExpr::p(&lam, &z, &h)?;
        let q = ThetaExpr::q(&lam, &z, &h)?;
        let lower = g.lower_interval(u);
        for w in g.elements().filter(|w| lower[w.0]) {
            let mut acc = ThetaExpr::zero();
            let b1 = t.get(prev, w);
            if !b1.is_zero() {
                acc.add_assign(&p.mul(b1));
            }
            let b2 = t.get(prev, g.rmul_simple(w, i));
            if !b2.is_zero() {
                acc.add_assign(&q.mul(&b2.map(&act)?));
            }
            t.set(u, w, acc);
        }
    }
    Ok(t)
}

/// `b^d_{u,w}`, the Langlands-dual coefficients, by left induction.
pub fn b_dual_table(g: &Arc<WeylGroup>) -> Result<CoefficientTable> {
    let d = g.datum().clone();
    let h = d.hbar();
    let mut t = CoefficientTable::new(g);
    let e = g.identity();
    t.set(e, e, ThetaExpr::one());
    for u in g.elements_by_length().into_iter().skip(1) {
        let i = g.word(u)[0];
        let prev = g.lmul_simple(i, u);
        let s = g.simple(i);
        let act = g.action(e, s);
        let la = d.lambda(&d.simple_coroots[i - 1]);
        let lower = g.lower_interval(u);
        for w in g.elements().filter(|w| lower[w.0]) {
            let z = g.z_of(g.inverse(w), &d.simple_roots[i - 1]);
            let mut acc = ThetaExpr::zero();
            let b1 = t.get(prev, w);
            if !b1.is_zero() {
                acc.add_assign(&b1.map(&act)?.mul(&ThetaExpr::p(&z, &la, &h)?));
            }
            let b2 = t.get(prev, g.lmul_simple(i, w));
            if !b2.is_zero() {
                acc.add_assign(&b2.map(&act)?.mul(&ThetaExpr::q(&z.neg(), &la, &h)?));
            }
            t.set(u, w, acc);
        }
    }
    Ok(t)
}

/// `E_u(u) = ∏_{α>0, uα<0} Q(λ_{α^∨}, z_{-uα})`.
pub fn diagonal_b(g: &WeylGroup, u: Elem) -> Result<ThetaExpr> {
    let d = g.datum();
    let h = d.hbar();
    let mut acc = ThetaExpr::one();
    for k in g.inversions(u) {
        let r = &d.roots()[k];
        let img: Vec<i32> = g.act_char(u, &r.char).iter().map(|x| -x).collect();
        acc = acc.mul(&ThetaExpr::q(&d.lambda(&r.coroot), &d.z(&img), &h)?);
    }
    Ok(acc)
}

/// `a_{u,u} = ∏_{α>0, uα<0} Q(z_{-uα}, λ_{α^∨})`.
pub fn diagonal_a(g: &WeylGroup, u: Elem) -> Result<ThetaExpr> {
    let d = g.datum();
    let h = d.hbar();
    let mut acc = ThetaExpr::one();
    for k in g.inversions(u) {
        let r = &d.roots()[k];
        let img: Vec<i32> = g.act_char(u, &r.char).iter().map(|x| -x).collect();
        acc = acc.mul(&ThetaExpr::q(&d.z(&img), &d.lambda(&r.coroot), &h)?);
    }
    Ok(acc)
}
