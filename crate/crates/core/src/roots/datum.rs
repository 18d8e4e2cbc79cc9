use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::{LatticeVector, SymbolKind, SymbolTable};

/// Supported root data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DatumKind {
    /// `GL_n` with `X^* = X_* = Z^n`.
    GL(usize),
    /// Simply connected `A_r`.
    A(usize),
    /// Simply connected `B_2`.
    B2,
    /// Simply connected `G_2`.
    G2,
}

impl fmt::Display for DatumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatumKind::GL(n) => write!(f, "GL{n}"),
            DatumKind::A(r) => write!(f, "A{r}"),
            DatumKind::B2 => write!(f, "B2"),
            DatumKind::G2 => write!(f, "G2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    /// Coordinates in the character lattice.
    pub char: Vec<i32>,
    /// Coroot in the cocharacter lattice.
    pub coroot: Vec<i32>,
    /// Coefficients in the simple roots.
    pub coeffs: Vec<i32>,
    /// Coefficients of the coroot in the simple coroots.
    pub coroot_coeffs: Vec<i32>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn coroot_height(&self) -> i32 {
        self.coroot_coeffs.iter().sum()
    }
}

/// Reductive root datum with a fixed base.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub kind: DatumKind,
    /// `cartan[i][j] = <α_i, α_j^∨>`.
    pub cartan: Vec<Vec<i32>>,
    pub simple_roots: Vec<Vec<i32>>,
    pub simple_coroots: Vec<Vec<i32>>,
    pub char_dim: usize,
    pub cochar_dim: usize,
    roots: Vec<Root>,
    root_index: HashMap<Vec<i32>, usize>,
    symbols: Arc<SymbolTable>,
}

impl RootDatum {
    pub fn new(kind: DatumKind) -> Result<Arc<Self>> {
        let (cartan, simple_roots, simple_coroots, char_dim) = match kind {
            DatumKind::GL(n) => {
                if n < 1 {
                    return Err(Error::UnsupportedDatum("GL0".into()));
                }
                let r = n - 1;
                let mut sr = Vec::new();
                for i in 0..r {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v[i + 1] = -1;
                    sr.push(v);
                }
                (cartan_from(&sr, &sr), sr.clone(), sr, n)
            }
            DatumKind::A(r) => {
                if r < 1 {
                    return Err(Error::UnsupportedDatum("A0".into()));
                }
                let mut a = vec![vec![0; r]; r];
                for i in 0..r {
                    a[i][i] = 2;
                    if i + 1 < r {
                        a[i][i + 1] = -1;
                        a[i + 1][i] = -1;
                    }
                }
                simply_connected(a)
            }
            DatumKind::B2 => simply_connected(vec![vec![2, -2], vec![-1, 2]]),
            DatumKind::G2 => simply_connected(vec![vec![2, -1], vec![-3, 2]]),
        };
        let cochar_dim = char_dim;
        let roots = root_system(&cartan, &simple_roots, &simple_coroots);
        let root_index = roots.iter().enumerate().map(|(i, r)| (r.char.clone(), i)).collect();
        let symbols = match kind {
            DatumKind::GL(n) => SymbolTable::numbered(n, n),
            _ => SymbolTable::numbered(char_dim, cochar_dim),
        };
        Ok(Arc::new(RootDatum {
            kind,
            cartan,
            simple_roots,
            simple_coroots,
            char_dim,
            cochar_dim,
            roots,
            root_index,
            symbols,
        }))
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn symbols(&self) -> &Arc<SymbolTable> {
        &self.symbols
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn root_by_char(&self, v: &[i32]) -> Option<&Root> {
        self.root_index.get(v).map(|&i| &self.roots[i])
    }

    /// Positivity of a character-lattice vector that is a root.
    pub fn is_positive_root(&self, v: &[i32]) -> Result<bool> {
        self.root_by_char(v)
            .map(|r| r.is_positive())
            .ok_or_else(|| Error::InvalidArgument(format!("{v:?} is not a root")))
    }

    /// Largest height of a coroot in the simple coroots.
    pub fn max_coroot_height(&self) -> i32 {
        self.roots.iter().map(|r| r.coroot_height()).max().unwrap_or(0)
    }

    /// `z_v` for a character `v`.
    pub fn z(&self, v: &[i32]) -> LatticeVector {
        self.symbols.embed(SymbolKind::Z, v)
    }

    /// `λ_v` for a cocharacter `v`.
    pub fn lambda(&self, v: &[i32]) -> LatticeVector {
        self.symbols.embed(SymbolKind::Lambda, v)
    }

    pub fn hbar(&self) -> LatticeVector {
        self.symbols.hbar_vector()
    }

    pub fn pair(&self, ch: &[i32], coch: &[i32]) -> i32 {
        ch.iter().zip(coch).map(|(a, b)| a * b).sum()
    }

    /// `s_i` on a character (`i` is 1-based).
    pub fn reflect_char(&self, i: usize, v: &[i32]) -> Vec<i32> {
        let a = &self.simple_roots[i - 1];
        let c = self.pair(v, &self.simple_coroots[i - 1]);
        v.iter().zip(a).map(|(x, y)| x - c * y).collect()
    }

    /// `s_i` on a cocharacter (`i` is 1-based).
    pub fn reflect_cochar(&self, i: usize, v: &[i32]) -> Vec<i32> {
        let a = &self.simple_coroots[i - 1];
        let c = self.pair(&self.simple_roots[i - 1], v);
        v.iter().zip(a).map(|(x, y)| x - c * y).collect()
    }

    /// Order of the Weyl group, computed from the type.
    pub fn weyl_order(&self) -> u64 {
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        match self.kind {
            DatumKind::GL(n) => fact(n),
            DatumKind::A(r) => fact(r + 1),
            DatumKind::B2 => 8,
            DatumKind::G2 => 12,
        }
    }
}

fn cartan_from(roots: &[Vec<i32>], coroots: &[Vec<i32>]) -> Vec<Vec<i32>> {
    roots
        .iter()
        .map(|a| coroots.iter().map(|c| a.iter().zip(c).map(|(x, y)| x * y).sum()).collect())
        .collect()
}

/// Characters in the fundamental-weight basis, cocharacters in the simple-coroot basis.
fn simply_connected(a: Vec<Vec<i32>>) -> (Vec<Vec<i32>>, Vec<Vec<i32>>, Vec<Vec<i32>>, usize) {
    let r = a.len();
    let roots: Vec<Vec<i32>> = a.clone();
    let coroots: Vec<Vec<i32>> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect();
    (a, roots, coroots, r)
}

fn root_system(cartan: &[Vec<i32>], sr: &[Vec<i32>], sc: &[Vec<i32>]) -> Vec<Root> {
    let r = cartan.len();
    let unit = |i: usize| {
        let mut v = vec![0; r];
        v[i] = 1;
        v
    };
    let mut seen: HashMap<Vec<i32>, usize> = HashMap::new();
    let mut pairs: Vec<(Vec<i32>, Vec<i32>)> = Vec::new();
    for i in 0..r {
        for sign in [1, -1] {
            let c: Vec<i32> = unit(i).iter().map(|x| x * sign).collect();
            if !seen.contains_key(&c) {
                seen.insert(c.clone(), pairs.len());
                pairs.push((c.clone(), c));
            }
        }
    }
    let mut k = 0;
    while k < pairs.len() {
        let (c, d) = pairs[k].clone();
        for i in 0..r {
            let p: i32 = (0..r).map(|j| c[j] * cartan[j][i]).sum();
            let q: i32 = (0..r).map(|j| d[j] * cartan[i][j]).sum();
            let mut c2 = c.clone();
            let mut d2 = d.clone();
            c2[i] -= p;
            d2[i] -= q;
            if !seen.contains_key(&c2) {
                seen.insert(c2.clone(), pairs.len());
                pairs.push((c2, d2));
            }
        }
        k += 1;
    }
    let dim = sr.first().map_or(0, |v| v.len());
    pairs
        .into_iter()
        .map(|(c, d)| {
            let mut ch = vec![0; dim];
            let mut co = vec![0; dim];
            for i in 0..r {
                for t in 0..dim {
                    ch[t] += c[i] * sr[i][t];
                    co[t] += d[i] * sc[i][t];
                }
            }
            Root { char: ch, coroot: co, coeffs: c, coroot_coeffs: d }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        for (k, n) in [(DatumKind::GL(4), 12), (DatumKind::A(2), 6), (DatumKind::B2, 8), (DatumKind::G2, 12)] {
            let d = RootDatum::new(k).unwrap();
            assert_eq!(d.roots().len(), n, "{k}");
            assert_eq!(d.positive_roots().count(), n / 2);
        }
    }

    #[test]
    fn coroot_pairs_to_two() {
        for k in [DatumKind::GL(3), DatumKind::B2, DatumKind::G2] {
            let d = RootDatum::new(k).unwrap();
            for r in d.roots() {
                assert_eq!(d.pair(&r.char, &r.coroot), 2);
            }
        }
    }

    #[test]
    fn max_heights() {
        assert_eq!(RootDatum::new(DatumKind::GL(4)).unwrap().max_coroot_height(), 3);
        assert_eq!(RootDatum::new(DatumKind::B2).unwrap().max_coroot_height(), 3);
        assert_eq!(RootDatum::new(DatumKind::G2).unwrap().max_coroot_height(), 5);
    }
}
