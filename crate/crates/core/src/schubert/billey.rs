use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{beta_sequence, Elem, Parabolic, WeylGroup};
use crate::theta::{LinearMap, ThetaExpr};

/// Longest word accepted by the subword enumerations.
pub const MAX_WORD_LEN: usize = 24;

/// One factor `Q(λ_{γ̌_j}, z_{β_j})` (for `j ∈ J`) or `P(λ_{γ̌_j}, z_{β_j})`.
#[derive(Clone, Debug, Serialize)]
pub struct BilleyFactor {
    /// 1-based position in the word.
    pub j: usize,
    pub letter: usize,
    pub in_subset: bool,
    pub beta: Vec<i32>,
    pub gamma: Vec<i32>,
    #[serde(skip)]
    pub value: ThetaExpr,
}

#[derive(Clone, Debug, Serialize)]
pub struct BilleyTerm {
    /// 1-based positions in `J`.
    pub subset: Vec<usize>,
    pub factors: Vec<BilleyFactor>,
    #[serde(skip)]
    pub product: ThetaExpr,
}

/// Subword expansion of `E_w(u)` over a fixed word of `u`.
#[derive(Clone, Debug)]
pub struct BilleySum {
    pub word: Vec<usize>,
    pub target: Elem,
    pub terms: Vec<BilleyTerm>,
    pub total: ThetaExpr,
}

/// Subsets `J` of positions with `w(J) = target`, found right to left.
///
/// `filter(x)` is consulted on every suffix product `s_{i_j}^{ε_j} ⋯ s_{i_ℓ}^{ε_ℓ}`
/// and prunes the branch when it fails.
fn subsets_for(
    g: &WeylGroup,
    word: &[usize],
    target: Elem,
    filter: &dyn Fn(Elem) -> bool,
) -> Result<Vec<(Vec<bool>, Vec<Elem>)>> {
    if word.len() > MAX_WORD_LEN {
        return Err(Error::BoundExceeded(format!("word of length {} exceeds {MAX_WORD_LEN}", word.len())));
    }
    g.validate_word(word)?;
    let mut out = Vec::new();
    let mut subset = vec![false; word.len()];
    let mut suffix = vec![g.identity(); word.len() + 1];
    // suffix[j] is the product of selected letters at positions >= j.
    fn rec(
        g: &WeylGroup,
        word: &[usize],
        target: Elem,
        filter: &dyn Fn(Elem) -> bool,
        j: usize,
        subset: &mut Vec<bool>,
        suffix: &mut Vec<Elem>,
        out: &mut Vec<(Vec<bool>, Vec<Elem>)>,
    ) {
        // Remaining prefix has j letters; the product must still reach target.
        let need = g.mul(target, g.inverse(suffix[j]));
        if g.length(need) > j {
            return;
        }
        if j == 0 {
            if suffix[0] == target {
                out.push((subset.clone(), suffix.clone()));
            }
            return;
        }
        let k = j - 1;
        for take in [false, true] {
            let x = if take { g.lmul_simple(word[k], suffix[j]) } else { suffix[j] };
            if !filter(x) {
                continue;
            }
            subset[k] = take;
            suffix[k] = x;
            rec(g, word, target, filter, k, subset, suffix, out);
        }
        subset[k] = false;
    }
    rec(g, word, target, filter, word.len(), &mut subset, &mut suffix, &mut out);
    Ok(out)
}

fn assemble(
    g: &WeylGroup,
    word: &[usize],
    target: Elem,
    found: Vec<(Vec<bool>, Vec<Elem>)>,
    spec: Option<&LinearMap>,
) -> Result<BilleySum> {
    let d = g.datum();
    let h = d.hbar();
    let betas = beta_sequence(d, word);
    let mut terms = Vec::new();
    let mut total = ThetaExpr::zero();
    for (subset, suffix) in found {
        let mut product = ThetaExpr::one();
        let mut factors = Vec::with_capacity(word.len());
        for j in 0..word.len() {
            let gamma = g.act_cochar(g.inverse(suffix[j + 1]), &d.simple_coroots[word[j] - 1]);
            let (l, z) = (d.lambda(&gamma), d.z(&betas[j]));
            let mut value = if subset[j] { ThetaExpr::q(&l, &z, &h)? } else { ThetaExpr::p(&l, &z, &h)? };
            if let Some(m) = spec {
                value = value.map(m)?;
            }
            product = product.mul(&value);
            factors.push(BilleyFactor {
                j: j + 1,
                letter: word[j],
                in_subset: subset[j],
                beta: betas[j].clone(),
                gamma,
                value,
            });
        }
        total.add_assign(&product);
        let positions = (0..word.len()).filter(|&j| subset[j]).map(|j| j + 1).collect();
        terms.push(BilleyTerm { subset: positions, factors, product });
    }
    Ok(BilleySum { word: word.to_vec(), target, terms, total })
}

/// `E_w(u)` as a sum over subwords of `word` (any word for `u`, reduced or not).
pub fn billey(g: &WeylGroup, word: &[usize], w: Elem) -> Result<BilleySum> {
    let found = subsets_for(g, word, w, &|_| true)?;
    assemble(g, word, w, found, None)
}

/// `E^P_w(u)` as a sum over subwords whose every suffix product lies in `W^P`,
/// with each factor specialized before multiplying.
pub fn billey_parabolic(p: &Parabolic, word: &[usize], w: Elem) -> Result<BilleySum> {
    let g = p.group();
    let found = subsets_for(g, word, w, &|x| p.is_min_rep(x))?;
    assemble(g, word, w, found, Some(&p.specialization()))
}

/// The full subword sum with every factor specialized, without the `W^P` filter.
pub fn billey_specialized(p: &Parabolic, word: &[usize], w: Elem) -> Result<BilleySum> {
    let g = p.group();
    let found = subsets_for(g, word, w, &|_| true)?;
    assemble(g, word, w, found, Some(&p.specialization()))
}

/// Langlands-dual subword sum for `b^d_{u,w}`: the roles of `z` and `λ` are
/// exchanged, with coroots `β̌_j` along the word and roots `γ_j^K`.
pub fn billey_dual(g: &WeylGroup, word: &[usize], w: Elem) -> Result<BilleySum> {
    let d = g.datum();
    let h = d.hbar();
    let found = subsets_for(g, word, w, &|_| true)?;
    let betas = crate::roots::beta_coroots(d, word);
    let mut terms = Vec::new();
    let mut total = ThetaExpr::zero();
    for (subset, suffix) in found {
        let mut product = ThetaExpr::one();
        let mut factors = Vec::new();
        for j in 0..word.len() {
            let gamma = g.act_char(g.inverse(suffix[j + 1]), &d.simple_roots[word[j] - 1]);
            let (z, l) = (d.z(&gamma), d.lambda(&betas[j]));
            let value = if subset[j] { ThetaExpr::q(&z, &l, &h)? } else { ThetaExpr::p(&z, &l, &h)? };
            product = product.mul(&value);
            factors.push(BilleyFactor {
                j: j + 1,
                letter: word[j],
                in_subset: subset[j],
                beta: betas[j].clone(),
                gamma,
                value,
            });
        }
        total.add_assign(&product);
        let positions = (0..word.len()).filter(|&j| subset[j]).map(|j| j + 1).collect();
        terms.push(BilleyTerm { subset: positions, factors, product });
    }
    Ok(BilleySum { word: word.to_vec(), target: w, terms, total })
}
