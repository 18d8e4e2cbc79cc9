use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::{SymbolTable, ThetaExpr};

/// Permutation in one-line notation with 1-based values.
pub type Perm = Vec<usize>;

pub fn identity_perm(m: usize) -> Perm {
    (1..=m).collect()
}

/// `s_i · x`: swap the values `i` and `i+1`.
pub fn lmul_s(i: usize, x: &Perm) -> Perm {
    x.iter().map(|&v| if v == i { i + 1 } else if v == i + 1 { i } else { v }).collect()
}

/// `x · s_i`: swap the positions `i` and `i+1`.
pub fn rmul_s(x: &Perm, i: usize) -> Perm {
    let mut y = x.clone();
    y.swap(i - 1, i);
    y
}

pub fn inverse_perm(x: &Perm) -> Perm {
    let mut y = vec![0; x.len()];
    for (k, &v) in x.iter().enumerate() {
        y[v - 1] = k + 1;
    }
    y
}

pub fn perm_length(x: &Perm) -> usize {
    let mut c = 0;
    for a in 0..x.len() {
        for b in a + 1..x.len() {
            if x[a] > x[b] {
                c += 1;
            }
        }
    }
    c
}

pub fn compose(x: &Perm, y: &Perm) -> Perm {
    y.iter().map(|&v| x[v - 1]).collect()
}

pub fn word_product(word: &[usize], m: usize) -> Perm {
    word.iter().fold(identity_perm(m), |acc, &i| rmul_s(&acc, i))
}

/// Parse a one-line permutation such as `"2,1,3"` or `"213"`.
pub fn parse_perm(s: &str) -> Result<Perm> {
    let s = s.trim();
    let p: Vec<usize> = if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad permutation {s}"))))
            .collect::<Result<_>>()?
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse(format!("bad permutation {s}"))))
            .collect::<Result<_>>()?
    };
    let mut seen = vec![false; p.len()];
    for &v in &p {
        if v == 0 || v > p.len() || seen[v - 1] {
            return Err(Error::InvalidPermutation(s.to_string()));
        }
        seen[v - 1] = true;
    }
    Ok(p)
}

/// Labels of the `j`-th crossing of a sub-wiring diagram: red strings `a < b`
/// with `β_j = ε_a - ε_b` and blue strings with `γ̌_j^J = ε_c - ε_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub letter: usize,
    pub kept: bool,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// Sub-wiring diagram: a word of `u ∈ S_m` with a subset `J` of kept crossings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubWiring {
    pub m: usize,
    pub word: Vec<usize>,
    pub subset: Vec<bool>,
}

impl SubWiring {
    pub fn new(m: usize, word: Vec<usize>, subset: Vec<bool>) -> Result<Self> {
        if subset.len() != word.len() {
            return Err(Error::InvalidArgument("subset and word lengths differ".into()));
        }
        if let Some(&i) = word.iter().find(|&&i| i == 0 || i >= m) {
            return Err(Error::InvalidWord(format!("letter {i} out of range for S_{m}")));
        }
        Ok(SubWiring { m, word, subset })
    }

    /// Permutation of the blue strings, `w(J)`.
    pub fn permutation(&self) -> Perm {
        let kept: Vec<usize> = self.word.iter().zip(&self.subset).filter(|(_, &k)| k).map(|(&i, _)| i).collect();
        word_product(&kept, self.m)
    }

    /// Per-position labels, read off from prefix and suffix products.
    pub fn crossings(&self) -> Vec<Crossing> {
        let l = self.word.len();
        let mut suffix = vec![identity_perm(self.m); l + 1];
        for k in (0..l).rev() {
            suffix[k] = if self.subset[k] { lmul_s(self.word[k], &suffix[k + 1]) } else { suffix[k + 1].clone() };
        }
        let mut prefix = identity_perm(self.m);
        let mut out = Vec::with_capacity(l);
        for k in 0..l {
            let i = self.word[k];
            let inv = inverse_perm(&suffix[k + 1]);
            out.push(Crossing {
                letter: i,
                kept: self.subset[k],
                a: prefix[i - 1],
                b: prefix[i],
                c: inv[i - 1],
                d: inv[i],
            });
            prefix = rmul_s(&prefix, i);
        }
        out
    }

    /// `∏_j Q(λ_c - λ_d, z_a - z_b)` (kept) or `P(…)` (resolved), over the
    /// numbered symbols `z1..zm, l1..lm, hbar`.
    pub fn weight(&self, table: &SymbolTable) -> Result<ThetaExpr> {
        let z = |k: usize| table.basis(table.index_of(&format!("z{k}")).expect("z symbol"));
        let l = |k: usize| table.basis(table.index_of(&format!("l{k}")).expect("l symbol"));
        let h = table.hbar_vector();
        let mut acc = ThetaExpr::one();
        for c in self.crossings() {
            let x = l(c.c).sub(&l(c.d));
            let y = z(c.a).sub(&z(c.b));
            let f = if c.kept { ThetaExpr::q(&x, &y, &h)? } else { ThetaExpr::p(&x, &y, &h)? };
            acc = acc.mul(&f);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{beta_sequence, DatumKind, RootDatum, WeylGroup};
    use crate::schubert::billey;

    #[test]
    fn worked_example_labels() {
        let sw = SubWiring::new(4, vec![1, 2, 3, 2, 1, 3], vec![false, true, false, true, true, false]).unwrap();
        let cs = sw.crossings();
        let ab: Vec<(usize, usize)> = cs.iter().map(|c| (c.a, c.b)).collect();
        let cd: Vec<(usize, usize)> = cs.iter().map(|c| (c.c, c.d)).collect();
        assert_eq!(ab[..4], [(1, 2), (1, 3), (1, 4), (3, 4)]);
        assert_eq!(cd, vec![(2, 1), (3, 1), (1, 4), (1, 3), (1, 2), (3, 4)]);
        // the last two red pairs follow from the prefix products
        let d = RootDatum::new(DatumKind::GL(4)).unwrap();
        let betas = beta_sequence(&d, &sw.word);
        for (k, &(a, b)) in ab.iter().enumerate() {
            let mut e = vec![0; 4];
            e[a - 1] = 1;
            e[b - 1] = -1;
            assert_eq!(betas[k], e);
        }
        assert_eq!(sw.permutation(), vec![2, 1, 3, 4]);
    }

    #[test]
    fn weight_matches_billey_term() {
        let d = RootDatum::new(DatumKind::GL(4)).unwrap();
        let g = WeylGroup::new(d.clone()).unwrap();
        let word = vec![1, 2, 3, 2, 1, 3];
        for w in g.elements() {
            let sum = billey(&g, &word, w).unwrap();
            for t in &sum.terms {
                let mut subset = vec![false; word.len()];
                for &j in &t.subset {
                    subset[j - 1] = true;
                }
                let sw = SubWiring::new(4, word.clone(), subset).unwrap();
                assert_eq!(sw.weight(d.symbols()).unwrap(), t.product);
                assert_eq!(g.from_permutation(&sw.permutation(), 4).unwrap(), w);
            }
        }
    }

    #[test]
    fn parse_perm_forms() {
        assert_eq!(parse_perm("321").unwrap(), vec![3, 2, 1]);
        assert_eq!(parse_perm("2,1,3").unwrap(), vec![2, 1, 3]);
        assert!(parse_perm("113").is_err());
    }
}
