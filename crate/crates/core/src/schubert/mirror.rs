use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::roots::{beta_sequence, Elem, WeylGroup};
use crate::theta::{ThetaExpr, Verifier};
use crate::twisted::CoefficientTable;

/// `Σ_w b_{u,w} b^d_{w^{-1},v^{-1}}` for all `(u, v)`.
pub fn mirror_matrix(b: &CoefficientTable, bd: &CoefficientTable) -> CoefficientTable {
    let g = b.group();
    let mut out = CoefficientTable::new(g);
    for u in g.elements() {
        for v in g.elements() {
            let vi = g.inverse(v);
            let mut acc = ThetaExpr::zero();
            for w in g.elements() {
                let (x, y) = (b.get(u, w), bd.get(g.inverse(w), vi));
                if !x.is_zero() && !y.is_zero() {
                    acc.add_assign(&x.mul(y));
                }
            }
            out.set(u, v, acc);
        }
    }
    out
}

/// Is `m` the identity matrix up to the verifier?
pub fn is_identity_table(m: &CoefficientTable, ver: &Verifier) -> Result<bool> {
    let g = m.group();
    for u in g.elements() {
        for v in g.elements() {
            let want = if u == v { ThetaExpr::one() } else { ThetaExpr::zero() };
            if !ver.equal(m.get(u, v), &want)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the diagrammatic mirror check for one `u`.
#[derive(Clone, Debug, Serialize)]
pub struct SubSubWiringReport {
    pub u: String,
    pub diagrams: usize,
    pub cancelling_pairs: usize,
    /// Every involution pair has total weight zero.
    pub pairs_cancel: bool,
    /// The unique fixed diagram (`v = u`) has weight one.
    pub fixed_weight_one: bool,
    /// Per-`v` sums agree with the Kronecker delta.
    pub sums_match: bool,
}

struct Diagram {
    j_set: u64,
    k_set: u64,
    weight: ThetaExpr,
}

/// Enumerates pairs `K ⊆ J` of positions of the canonical word of `u` (sub-sub-wiring
/// diagrams) and checks the leftmost-toggle involution.
///
/// A position is of kind (I) when in `K`, (II) when in `J \ K` and (III) otherwise.
/// The involution swaps (II) and (III) at the leftmost position not of kind (I).
pub fn sub_sub_wiring(g: &Arc<WeylGroup>, u: Elem, ver: &Verifier) -> Result<SubSubWiringReport> {
    let d = g.datum();
    let h = d.hbar();
    let word = g.word(u).clone();
    let l = word.len();
    let betas = beta_sequence(d, &word);
    let mut diagrams = Vec::new();
    let mut sums: HashMap<Elem, ThetaExpr> = HashMap::new();
    for j_set in 0u64..1 << l {
        // suffix products of J and γ̌^J
        let mut suffix = vec![g.identity(); l + 1];
        for k in (0..l).rev() {
            suffix[k] = if j_set >> k & 1 == 1 { g.lmul_simple(word[k], suffix[k + 1]) } else { suffix[k + 1] };
        }
        let gammas: Vec<Vec<i32>> =
            (0..l).map(|k| g.act_cochar(g.inverse(suffix[k + 1]), &d.simple_coroots[word[k] - 1])).collect();
        let mut base = ThetaExpr::one();
        for k in 0..l {
            let (lam, z) = (d.lambda(&gammas[k]), d.z(&betas[k]));
            let f = if j_set >> k & 1 == 1 { ThetaExpr::q(&lam, &z, &h)? } else { ThetaExpr::p(&lam, &z, &h)? };
            base = base.mul(&f);
        }
        let mut k_set = j_set;
        loop {
            // prefix products of K give the dual roots
            let mut weight = base.clone();
            let mut prefix = g.identity();
            for k in 0..l {
                if j_set >> k & 1 == 0 {
                    continue;
                }
                let root = g.act_char(prefix, &d.simple_roots[word[k] - 1]);
                let (z, lam) = (d.z(&root), d.lambda(&gammas[k]));
                let f = if k_set >> k & 1 == 1 { ThetaExpr::q(&z, &lam, &h)? } else { ThetaExpr::p(&z, &lam, &h)? };
                weight = weight.mul(&f);
                if k_set >> k & 1 == 1 {
                    prefix = g.rmul_simple(prefix, word[k]);
                }
            }
            sums.entry(prefix).or_default().add_assign(&weight);
            diagrams.push(Diagram { j_set, k_set, weight });
            if k_set == 0 {
                break;
            }
            k_set = (k_set - 1) & j_set;
        }
    }
    let index: HashMap<(u64, u64), usize> =
        diagrams.iter().enumerate().map(|(i, dg)| ((dg.j_set, dg.k_set), i)).collect();
    let full = (1u64 << l) - 1;
    let mut pairs = 0;
    let mut pairs_cancel = true;
    let mut fixed_weight_one = false;
    for dg in &diagrams {
        if dg.j_set == full && dg.k_set == full {
            fixed_weight_one = ver.equal(&dg.weight, &ThetaExpr::one())?;
            continue;
        }
        let first = (0..l).find(|&k| dg.k_set >> k & 1 == 0).expect("not the fixed diagram");
        let partner = dg.j_set ^ (1 << first);
        if dg.j_set >> first & 1 == 1 {
            continue;
        }
        pairs += 1;
        let other = &diagrams[index[&(partner, dg.k_set)]];
        if !ver.is_zero(&dg.weight.add(&other.weight))? {
            pairs_cancel = false;
        }
    }
    let mut sums_match = true;
    for v in g.elements() {
        let want = if v == u { ThetaExpr::one() } else { ThetaExpr::zero() };
        let got = sums.get(&v).cloned().unwrap_or_default();
        if !ver.equal(&got, &want)? {
            sums_match = false;
        }
    }
    Ok(SubSubWiringReport {
        u: g.label(u),
        diagrams: diagrams.len(),
        cancelling_pairs: pairs,
        pairs_cancel,
        fixed_weight_one,
        sums_match,
    })
}
