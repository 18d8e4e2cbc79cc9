use std::sync::Arc;

use super::datum::DatumKind;
use super::weyl::{Elem, WeylGroup};
use crate::error::{Error, Result};
use crate::theta::{LinearMap, SymbolKind};

/// Parabolic subgroup `W_P` generated by a set `Σ_P` of simple roots, its
/// minimal coset representatives `W^P`, and the specialization `[·]_P`
/// sending `λ_{α^∨}` to `-ħ` for `α ∈ Σ_P`.
#[derive(Clone, Debug)]
pub struct Parabolic {
    group: Arc<WeylGroup>,
    /// 1-based simple-root indices.
    pub sigma: Vec<usize>,
}

impl Parabolic {
    pub fn new(group: Arc<WeylGroup>, mut sigma: Vec<usize>) -> Result<Self> {
        sigma.sort_unstable();
        sigma.dedup();
        group.validate_word(&sigma)?;
        Ok(Parabolic { group, sigma })
    }

    /// Block composition of `n` for `GL_n`, e.g. `[2, 1]` gives `Σ_P = {α_1}`.
    pub fn from_composition(group: Arc<WeylGroup>, comp: &[usize]) -> Result<Self> {
        let n = match group.datum().kind {
            DatumKind::GL(n) => n,
            DatumKind::A(r) => r + 1,
            _ => return Err(Error::InvalidArgument("compositions describe type A parabolics".into())),
        };
        if comp.iter().sum::<usize>() != n || comp.contains(&0) {
            return Err(Error::InvalidArgument(format!("{comp:?} is not a composition of {n}")));
        }
        let mut sigma = Vec::new();
        let mut start = 1;
        for &a in comp {
            for i in start..start + a - 1 {
                sigma.push(i);
            }
            start += a;
        }
        Self::new(group, sigma)
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn contains_simple(&self, i: usize) -> bool {
        self.sigma.binary_search(&i).is_ok()
    }

    /// `w ∈ W^P`, i.e. `wα > 0` for every `α ∈ Σ_P`.
    pub fn is_min_rep(&self, w: Elem) -> bool {
        let g = &self.group;
        let d = g.datum();
        self.sigma.iter().all(|&i| {
            let img = g.act_char(w, &d.simple_roots[i - 1]);
            d.is_positive_root(&img).expect("roots map to roots")
        })
    }

    pub fn in_wp(&self, w: Elem) -> bool {
        self.group.word(w).iter().all(|&i| self.contains_simple(i))
    }

    pub fn wp_elements(&self) -> Vec<Elem> {
        self.group.elements_by_length().into_iter().filter(|&w| self.in_wp(w)).collect()
    }

    pub fn min_reps(&self) -> Vec<Elem> {
        self.group.elements_by_length().into_iter().filter(|&w| self.is_min_rep(w)).collect()
    }

    /// Minimal representative of the coset `u W_P`.
    pub fn min_rep(&self, mut u: Elem) -> Elem {
        let g = &self.group;
        loop {
            let Some(&i) = self.sigma.iter().find(|&&i| g.length(g.rmul_simple(u, i)) < g.length(u)) else {
                return u;
            };
            u = g.rmul_simple(u, i);
        }
    }

    /// Positive roots of the Levi factor, as indices into the datum's roots.
    pub fn levi_positive_roots(&self) -> Vec<usize> {
        let d = self.group.datum();
        d.roots()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_positive())
            .filter(|(_, r)| r.coeffs.iter().enumerate().all(|(k, &c)| c == 0 || self.contains_simple(k + 1)))
            .map(|(k, _)| k)
            .collect()
    }

    /// The specialization `[·]_P` as a map on symbol lattices.
    ///
    /// For `GL_n` this is `λ_{i+1} ↦ λ_i + ħ` along each block; for the simply
    /// connected data `λ_{α_i^∨} ↦ -ħ`.
    pub fn specialization(&self) -> LinearMap {
        let d = self.group.datum();
        let t = d.symbols();
        let ls = t.indices_of(SymbolKind::Lambda);
        let h = t.hbar_vector();
        let mut m = LinearMap::identity(t.len());
        match d.kind {
            DatumKind::GL(_) => {
                for i in 1..ls.len() {
                    if self.contains_simple(i) {
                        let prev = m.image(ls[i - 1]).clone();
                        m.set_image(ls[i], prev.add(&h));
                    }
                }
            }
            _ => {
                for &i in &self.sigma {
                    m.set_image(ls[i - 1], h.neg());
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::RootDatum;

    #[test]
    fn coset_counts() {
        let g = WeylGroup::new(RootDatum::new(DatumKind::GL(4)).unwrap()).unwrap();
        let p = Parabolic::from_composition(g.clone(), &[2, 1, 1]).unwrap();
        assert_eq!(p.sigma, vec![1]);
        assert_eq!(p.min_reps().len(), 12);
        let p2 = Parabolic::new(g.clone(), vec![1, 3]).unwrap();
        assert_eq!(p2.min_reps().len(), 6);
        assert_eq!(p2.wp_elements().len(), 4);
        for u in g.elements() {
            let m = p2.min_rep(u);
            assert!(p2.is_min_rep(m));
        }
    }

    #[test]
    fn gl_specialization_sends_block_coroots_to_minus_hbar() {
        let g = WeylGroup::new(RootDatum::new(DatumKind::GL(3)).unwrap()).unwrap();
        let p = Parabolic::new(g.clone(), vec![1]).unwrap();
        let d = g.datum();
        let m = p.specialization();
        let a1 = d.lambda(&d.simple_coroots[0]);
        assert_eq!(m.apply(&a1), d.hbar().neg());
        let a2 = d.lambda(&d.simple_coroots[1]);
        assert_eq!(m.apply(&a2), d.symbols().parse_vector("l1+hbar-l3").unwrap());
    }
}
