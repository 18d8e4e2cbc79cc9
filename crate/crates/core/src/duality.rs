//! Poincaré pairings and the classes dual to elliptic Schubert classes.
//!
//! `𝔈(X_w)` is produced by the R-matrix recursion from
//! `𝔈(X_id) = ∏_{α>0} θ(-z_α) f_id`, and
//! `𝔈'(X_w) = 𝔈(X_w) · ∏_{α>0, wα<0} θ(λ_{α^∨} - ħ)/θ(λ_{α^∨} + ħ)`.
//!
//! For `G/P` no `θ'(0)` is needed. Writing `C_w` for the normalizing product
//! that relates `E(X_w)_x` and `𝔈'(X_w)(x)`, one has
//! `E(X_w)_x = 𝔈'(X_w)(x) / (C_w ∏_{α>0} θ(-z_{xα}))`. Summing over `x = uv`,
//! `v ∈ W_P`, specializing, and multiplying by `[C_w]_P ∏_{α∈Φ⁺∖Φ_P⁺} θ(-z_{uα})`
//! cancels `[C_w]_P`; since `W_P` permutes `Φ⁺∖Φ_P⁺`, what is left is
//! `𝔈'(X^P_w)(u) = Σ_{v∈W_P} [𝔈'(X_w)(uv)]_P / ∏_{α∈Φ_P⁺} θ(-z_{uvα})`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{Elem, Parabolic, WeylGroup};
use crate::schubert::{elliptic_class, parabolic_class, ClassTables, LocalizedClass};
use crate::theta::{ThetaExpr, Verifier};

/// Fixed points summed over and the inverse denominators `1/∏ θ(-z_{uα})`.
#[derive(Clone, Debug)]
pub struct PairingContext {
    group: Arc<WeylGroup>,
    parabolic: Option<Parabolic>,
    inv_den: BTreeMap<Elem, ThetaExpr>,
}

impl PairingContext {
    /// `⟨f, g⟩_{G/B}`: all `u ∈ W`, all positive roots.
    pub fn full(g: &Arc<WeylGroup>) -> Result<Self> {
        let roots: Vec<Vec<i32>> = g.datum().positive_roots().map(|r| r.char.clone()).collect();
        Self::build(g, None, g.elements().collect(), &roots)
    }

    /// `⟨f, g⟩_{G/P}`: `u ∈ W^P`, roots in `Φ⁺ ∖ Φ_P⁺`.
    pub fn parabolic(p: &Parabolic) -> Result<Self> {
        let g = p.group();
        let d = g.datum();
        let levi = p.levi_positive_roots();
        let roots: Vec<Vec<i32>> = d
            .roots()
            .iter()
            .enumerate()
            .filter(|(k, r)| r.is_positive() && !levi.contains(k))
            .map(|(_, r)| r.char.clone())
            .collect();
        Self::build(g, Some(p.clone()), p.min_reps(), &roots)
    }

    fn build(g: &Arc<WeylGroup>, parabolic: Option<Parabolic>, points: Vec<Elem>, roots: &[Vec<i32>]) -> Result<Self> {
        let mut inv_den = BTreeMap::new();
        for u in points {
            inv_den.insert(u, theta_product(g, u, roots).inv()?);
        }
        Ok(PairingContext { group: g.clone(), parabolic, inv_den })
    }

    pub fn parabolic_subgroup(&self) -> Option<&Parabolic> {
        self.parabolic.as_ref()
    }

    pub fn points(&self) -> impl Iterator<Item = Elem> + '_ {
        self.inv_den.keys().copied()
    }

    /// `1/∏ θ(-z_{uα})`.
    pub fn inverse_denominator(&self, u: Elem) -> &ThetaExpr {
        &self.inv_den[&u]
    }
}

/// `∏ θ(-z_{uα})` over the given roots.
fn theta_product(g: &WeylGroup, u: Elem, roots: &[Vec<i32>]) -> ThetaExpr {
    roots.iter().fold(ThetaExpr::one(), |acc, a| acc.mul(&ThetaExpr::theta(&g.z_of(u, a).neg())))
}

/// `⟨f, g⟩ = Σ_u f(u) g(u) / ∏ θ(-z_{uα})`.
pub fn pair(f: &LocalizedClass, g: &LocalizedClass, ctx: &PairingContext) -> Result<ThetaExpr> {
    if !Arc::ptr_eq(f.group(), &ctx.group) || !Arc::ptr_eq(g.group(), &ctx.group) {
        return Err(Error::InvalidArgument("classes and pairing use different groups".into()));
    }
    let mut acc = ThetaExpr::zero();
    for (u, d) in &ctx.inv_den {
        let (a, b) = (f.at(*u), g.at(*u));
        if !a.is_zero() && !b.is_zero() {
            acc.add_assign(&a.mul(b).mul(d));
        }
    }
    Ok(acc)
}

/// `(^w γ)(u) = ^w(γ(w^{-1}u))`, acting on the `z` variables.
pub fn twist(gamma: &LocalizedClass, w: Elem) -> Result<LocalizedClass> {
    let g = gamma.group();
    let act = g.action(w, g.identity());
    let wi = g.inverse(w);
    let mut values = BTreeMap::new();
    for u in g.elements() {
        let v = gamma.at(g.mul(wi, u));
        if !v.is_zero() {
            values.insert(u, v.map(&act)?);
        }
    }
    Ok(LocalizedClass::new(g, None, values))
}

/// `𝔈(X_id) = ∏_{α>0} θ(-z_α) f_id`.
pub fn rescaled_identity(g: &Arc<WeylGroup>) -> LocalizedClass {
    let roots: Vec<Vec<i32>> = g.datum().positive_roots().map(|r| r.char.clone()).collect();
    let mut values = BTreeMap::new();
    values.insert(g.identity(), theta_product(g, g.identity(), &roots));
    LocalizedClass::new(g, None, values)
}

/// `𝔈(X_w)` along a reduced word of `w`, applying
/// `𝔈(X_{s_α v}) = -P(λ_γ, z_α)/Q(-λ_γ, z_α) 𝔈(X_v) + 1/Q(-λ_γ, z_α) ^{s_α}𝔈(X_v)`
/// with `γ = v^{-1}α^∨`, letters taken from the right.
pub fn rescaled_class_along(g: &Arc<WeylGroup>, word: &[usize]) -> Result<LocalizedClass> {
    if !g.is_reduced(word)? {
        return Err(Error::InvalidWord(format!("{word:?} is not reduced")));
    }
    let d = g.datum();
    let h = d.hbar();
    let mut cur = rescaled_identity(g);
    let mut v = g.identity();
    for &i in word.iter().rev() {
        let s = g.simple(i);
        let lam = d.lambda(&g.act_cochar(g.inverse(v), &d.simple_coroots[i - 1]));
        let za = d.z(&d.simple_roots[i - 1]);
        let qinv = ThetaExpr::q(&lam.neg(), &za, &h)?.inv()?;
        let c1 = ThetaExpr::p(&lam, &za, &h)?.mul(&qinv).neg();
        let act = g.action(s, g.identity());
        let mut values = BTreeMap::new();
        for u in g.elements() {
            let mut x = c1.mul(cur.at(u));
            let t = cur.at(g.mul(s, u));
            if !t.is_zero() {
                x.add_assign(&qinv.mul(&t.map(&act)?));
            }
            if !x.is_zero() {
                values.insert(u, x);
            }
        }
        cur = LocalizedClass::new(g, None, values);
        v = g.mul(s, v);
    }
    Ok(cur)
}

/// `𝔈(X_w)` along the canonical reduced word.
pub fn rescaled_class(g: &Arc<WeylGroup>, w: Elem) -> Result<LocalizedClass> {
    rescaled_class_along(g, g.word(w))
}

/// `∏_{α>0, wα<0} θ(λ_{α^∨} + ħ)/θ(λ_{α^∨} - ħ)`.
pub fn inversion_ratio(g: &WeylGroup, w: Elem) -> Result<ThetaExpr> {
    let d = g.datum();
    let h = d.hbar();
    let mut acc = ThetaExpr::one();
    for r in d.positive_roots() {
        if !d.is_positive_root(&g.act_char(w, &r.char))? {
            let l = d.lambda(&r.coroot);
            acc = acc.mul(&ThetaExpr::theta(&l.add(&h))).div(&ThetaExpr::theta(&l.sub(&h)))?;
        }
    }
    Ok(acc)
}

/// `𝔈'(X_w) = 𝔈(X_w) · ∏_{α>0, wα<0} θ(λ_{α^∨} - ħ)/θ(λ_{α^∨} + ħ)`.
pub fn renormalized_class(g: &Arc<WeylGroup>, w: Elem) -> Result<LocalizedClass> {
    scale(&rescaled_class(g, w)?, &inversion_ratio(g, w)?.inv()?)
}

fn scale(c: &LocalizedClass, k: &ThetaExpr) -> Result<LocalizedClass> {
    let values = c.values.iter().map(|(u, v)| (*u, v.mul(k))).collect();
    Ok(LocalizedClass::new(c.group(), c.parabolic().cloned(), values))
}

/// `𝔈'(X^P_w)` on `W^P`, assembled from the full-flag class as in the module notes.
pub fn parabolic_renormalized_class(p: &Parabolic, w: Elem) -> Result<LocalizedClass> {
    let g = p.group();
    if !p.is_min_rep(w) {
        return Err(Error::InvalidArgument(format!("{} is not a minimal coset representative", g.label(w))));
    }
    let full = renormalized_class(g, w)?;
    let spec = p.specialization();
    let d = g.datum();
    let levi: Vec<Vec<i32>> = p.levi_positive_roots().into_iter().map(|k| d.roots()[k].char.clone()).collect();
    let wp = p.wp_elements();
    let mut values = BTreeMap::new();
    for u in p.min_reps() {
        let mut acc = ThetaExpr::zero();
        for &v in &wp {
            let x = g.mul(u, v);
            let val = full.at(x);
            if val.is_zero() {
                continue;
            }
            acc.add_assign(&val.map(&spec)?.mul(&theta_product(g, x, &levi).inv()?));
        }
        if !acc.is_zero() {
            values.insert(u, acc);
        }
    }
    Ok(LocalizedClass::new(g, Some(p.clone()), values))
}

/// Pairing matrices against the elliptic Schubert classes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DualityReport {
    pub size: usize,
    /// `⟨𝔈'(X_u), E_w⟩ = δ_{u,w}` for every pair.
    pub dual_basis: bool,
    /// `⟨𝔈(X_u), E_w⟩ = δ_{u,w} ∏ θ(λ+ħ)/θ(λ-ħ)` for every pair.
    pub rescaled_diagonal: bool,
    /// Pairs `(u, w)` where some identity failed.
    pub failures: Vec<(String, String)>,
}

pub fn dual_basis_check(tables: &ClassTables, ver: &Verifier) -> Result<DualityReport> {
    let g = tables.group();
    let ctx = PairingContext::full(g)?;
    let classes: Vec<(Elem, LocalizedClass)> =
        g.elements().map(|w| Ok((w, elliptic_class(tables, w)?))).collect::<Result<_>>()?;
    let mut r = DualityReport { size: g.order(), dual_basis: true, rescaled_diagonal: true, failures: Vec::new() };
    for u in g.elements() {
        let resc = rescaled_class(g, u)?;
        let ratio = inversion_ratio(g, u)?;
        let renorm = scale(&resc, &ratio.inv()?)?;
        for (w, ew) in &classes {
            let want = if u == *w { ThetaExpr::one() } else { ThetaExpr::zero() };
            let ok1 = ver.equal(&pair(&renorm, ew, &ctx)?, &want)?;
            let ok2 = ver.equal(&pair(&resc, ew, &ctx)?, &want.mul(&ratio))?;
            r.dual_basis &= ok1;
            r.rescaled_diagonal &= ok2;
            if !(ok1 && ok2) {
                r.failures.push((g.label(u), g.label(*w)));
            }
        }
    }
    Ok(r)
}

/// `⟨𝔈'(X^P_u), E^P_w⟩_{G/P} = δ_{u,w}` on `W^P`.
pub fn parabolic_dual_basis_check(p: &Parabolic, ver: &Verifier) -> Result<DualityReport> {
    let g = p.group();
    let ctx = PairingContext::parabolic(p)?;
    let reps = p.min_reps();
    let classes: Vec<(Elem, LocalizedClass)> =
        reps.iter().map(|&w| Ok((w, parabolic_class(p, w)?))).collect::<Result<_>>()?;
    let mut r = DualityReport { size: reps.len(), dual_basis: true, rescaled_diagonal: true, failures: Vec::new() };
    for &u in &reps {
        let du = parabolic_renormalized_class(p, u)?;
        for (w, ew) in &classes {
            let want = if u == *w { ThetaExpr::one() } else { ThetaExpr::zero() };
            if !ver.equal(&pair(&du, ew, &ctx)?, &want)? {
                r.dual_basis = false;
                r.failures.push((g.label(u), g.label(*w)));
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{DatumKind, RootDatum};
    use crate::theta::{Mode, SeriesContext};

    fn setup(n: usize) -> (Arc<WeylGroup>, Verifier) {
        let g = WeylGroup::new(RootDatum::new(DatumKind::GL(n)).unwrap()).unwrap();
        let ctx = SeriesContext::new(5, g.datum().symbols().clone());
        (g, Verifier::new(ctx, Mode::Eval, 2, 17))
    }

    fn fixed_point(g: &Arc<WeylGroup>, u: Elem) -> LocalizedClass {
        let mut values = BTreeMap::new();
        values.insert(u, ThetaExpr::one());
        LocalizedClass::new(g, None, values)
    }

    #[test]
    fn fixed_point_pairings() {
        let (g, ver) = setup(3);
        let ctx = PairingContext::full(&g).unwrap();
        let u = g.from_one_line("231").unwrap();
        let fu = fixed_point(&g, u);
        assert!(ver.equal(&pair(&fu, &fu, &ctx).unwrap(), ctx.inverse_denominator(u)).unwrap());
        assert!(pair(&fu, &fixed_point(&g, g.identity()), &ctx).unwrap().is_zero());
    }

    #[test]
    fn identity_class_evaluates() {
        let (g, ver) = setup(3);
        let tables = ClassTables::new(&g);
        let ctx = PairingContext::full(&g).unwrap();
        let e = rescaled_identity(&g);
        for w in g.elements() {
            let gamma = elliptic_class(&tables, w).unwrap();
            let got = pair(&e, &gamma, &ctx).unwrap();
            assert!(ver.equal(&got, gamma.at(g.identity())).unwrap());
        }
    }

    #[test]
    fn rank_one_diagonal() {
        let (g, ver) = setup(2);
        let tables = ClassTables::new(&g);
        let ctx = PairingContext::full(&g).unwrap();
        let s = g.simple(1);
        let got = pair(&rescaled_class(&g, s).unwrap(), &elliptic_class(&tables, s).unwrap(), &ctx).unwrap();
        let d = g.datum();
        let l = d.lambda(&d.simple_coroots[0]);
        let h = d.hbar();
        let want = ThetaExpr::theta(&l.add(&h)).div(&ThetaExpr::theta(&l.sub(&h))).unwrap();
        assert!(ver.equal(&got, &want).unwrap());
    }

    #[test]
    fn longest_element_word_independence() {
        let (g, ver) = setup(3);
        let w0 = g.longest();
        let a = rescaled_class_along(&g, &[1, 2, 1]).unwrap();
        let b = rescaled_class_along(&g, &[2, 1, 2]).unwrap();
        assert_eq!(g.from_word(&[1, 2, 1]).unwrap(), w0);
        for u in g.elements() {
            assert!(ver.equal(a.at(u), b.at(u)).unwrap(), "{}", g.label(u));
        }
        assert!(matches!(rescaled_class_along(&g, &[1, 1]), Err(Error::InvalidWord(_))));
    }

    #[test]
    fn dual_bases_s2_s3() {
        for n in [2, 3] {
            let (g, ver) = setup(n);
            let r = dual_basis_check(&ClassTables::new(&g), &ver).unwrap();
            assert_eq!(r.size, g.order());
            assert!(r.dual_basis && r.rescaled_diagonal, "{r:?}");
        }
    }

    #[test]
    fn parabolic_orthonormality_gl3() {
        let (g, ver) = setup(3);
        let p = Parabolic::new(g.clone(), vec![1]).unwrap();
        let r = parabolic_dual_basis_check(&p, &ver).unwrap();
        assert_eq!(r.size, 3);
        assert!(r.dual_basis, "{r:?}");
    }
}
