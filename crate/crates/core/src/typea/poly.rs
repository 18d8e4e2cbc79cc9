use std::sync::Arc;

use serde::Serialize;

use super::pipes::{enumerate_grid, poly_symbols, GenericPipeDream, Tile};
use super::weight::WeightExpr;
use super::wiring::{inverse_perm, lmul_s, Perm};
use crate::error::{Error, Result};
use crate::theta::{LinearMap, SymbolTable, ThetaExpr, Verifier};

/// `𝓔_w(x, y, λ)`: the sum of pipe-dream weights over `GPD(w)`.
pub fn polynomial_rep(n: usize, w: &Perm) -> Result<WeightExpr> {
    let mut e = WeightExpr::zero(&poly_symbols(n));
    for pd in enumerate_grid(n, w)? {
        e.add(pd.weight());
    }
    Ok(e)
}

fn sym(t: &SymbolTable, s: &str) -> crate::theta::LatticeVector {
    t.basis(t.index_of(s).expect("symbol"))
}

/// `Loc(f)(u) = f(uz, z, λ)`: `x_i ↦ z_{u(i)}`, `y_i ↦ z_i`, onto the numbered
/// `GL_n` symbols `z1..zn, l1..ln, hbar`.
pub fn loc_map(n: usize, u: &Perm) -> Result<LinearMap> {
    if u.len() != n {
        return Err(Error::InvalidPermutation(format!("{u:?} is not in S_{n}")));
    }
    let src = poly_symbols(n);
    let dst = SymbolTable::numbered(n, n);
    let mut images = Vec::with_capacity(src.len());
    for name in src.names() {
        let (head, idx) = name.split_at(1);
        let v = match head {
            "x" => sym(&dst, &format!("z{}", u[idx.parse::<usize>().expect("index") - 1])),
            "y" => sym(&dst, &format!("z{idx}")),
            _ => sym(&dst, name),
        };
        images.push(v);
    }
    Ok(LinearMap::new(images, dst.len()))
}

pub fn loc(e: &WeightExpr, u: &Perm) -> Result<ThetaExpr> {
    let n = u.len();
    if e.symbols().as_ref() != poly_symbols(n).as_ref() {
        return Err(Error::InvalidArgument("expression is not over the n-variable alphabet".into()));
    }
    e.to_theta()?.map(&loc_map(n, u)?)
}

/// Outcome of the left recursion on polynomial representatives for one `(w, α)`.
#[derive(Clone, Debug, Serialize)]
pub struct PolyRecursionReport {
    pub w: Perm,
    pub alpha: usize,
    pub passed: bool,
}

/// Checks `𝓔_{s_α w} = -P(λ_γ, -y_α)/Q(-λ_γ, -y_α) 𝓔_w + 𝓔_w(x, s_α y, λ)/Q(-λ_γ, -y_α)`
/// with `γ = w^{-1}α^∨`, both sides built independently by [`polynomial_rep`].
pub fn poly_recursion_check(n: usize, w: &Perm, alpha: usize, ver: &Verifier) -> Result<PolyRecursionReport> {
    if alpha == 0 || alpha >= n {
        return Err(Error::InvalidWord(format!("simple root {alpha} out of range for S_{n}")));
    }
    let t = poly_symbols(n);
    let h = t.hbar_vector();
    let wi = inverse_perm(w);
    let lam = sym(&t, &format!("l{}", wi[alpha - 1])).sub(&sym(&t, &format!("l{}", wi[alpha])));
    let ya = sym(&t, &format!("y{alpha}")).sub(&sym(&t, &format!("y{}", alpha + 1)));
    let ew = polynomial_rep(n, w)?.to_theta()?;
    let lhs = polynomial_rep(n, &lmul_s(alpha, w))?.to_theta()?;
    let mut swap = LinearMap::identity(t.len());
    let (a, b) = (t.index_of(&format!("y{alpha}"))?, t.index_of(&format!("y{}", alpha + 1))?);
    swap.set_image(a, t.basis(b));
    swap.set_image(b, t.basis(a));
    let qinv = ThetaExpr::q(&lam.neg(), &ya.neg(), &h)?.inv()?;
    let p = ThetaExpr::p(&lam, &ya.neg(), &h)?;
    let rhs = p.mul(&qinv).mul(&ew).neg().add(&qinv.mul(&ew.map(&swap)?));
    Ok(PolyRecursionReport { w: w.clone(), alpha, passed: ver.equal(&lhs, &rhs)? })
}

/// `[·]_P` on the polynomial alphabet: `λ_{i+1} ↦ λ_i + ħ` inside each block of `comp`.
pub fn poly_specialization(n: usize, comp: &[usize]) -> Result<LinearMap> {
    if comp.iter().sum::<usize>() != n || comp.contains(&0) {
        return Err(Error::InvalidArgument(format!("{comp:?} is not a composition of {n}")));
    }
    let t = poly_symbols(n);
    let h = t.hbar_vector();
    let mut m = LinearMap::identity(t.len());
    let mut start = 1;
    for &a in comp {
        for i in start + 1..start + a {
            let prev = m.image(t.index_of(&format!("l{}", i - 1))?).clone();
            m.set_image(t.index_of(&format!("l{i}"))?, prev.add(&h));
        }
        start += a;
    }
    Ok(m)
}

fn block_of(comp: &[usize], p: usize) -> usize {
    let mut end = 0;
    for (k, &a) in comp.iter().enumerate() {
        end += a;
        if p <= end {
            return k;
        }
    }
    comp.len()
}

/// Partial-flag representative: pipe dreams in which no two pipes of the same block
/// cross, each weight specialized by `[·]_P`.
pub fn polynomial_rep_parabolic(n: usize, comp: &[usize], w: &Perm) -> Result<(Arc<SymbolTable>, ThetaExpr)> {
    let spec = poly_specialization(n, comp)?;
    let mut total = ThetaExpr::zero();
    for pd in enumerate_grid(n, w)? {
        if same_block_crossing(&pd, comp) {
            continue;
        }
        total.add_assign(&pd.weight().to_theta()?.map(&spec)?);
    }
    Ok((poly_symbols(n), total))
}

fn same_block_crossing(pd: &GenericPipeDream, comp: &[usize]) -> bool {
    let tr = pd.trace();
    (0..pd.n).any(|r| {
        (0..pd.n).any(|c| {
            pd.tiles[r][c] == Tile::X && block_of(comp, tr.left[r][c].expect("pipe")) == block_of(comp, tr.bottom[r][c].expect("pipe"))
        })
    })
}
