use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use super::datum::{DatumKind, RootDatum};
use crate::error::{Error, Result};
use crate::theta::{LatticeVector, LinearMap, SymbolKind};

/// Default cap on the size of an enumerated Weyl group.
pub const DEFAULT_GROUP_BOUND: u64 = 40320;

/// Element of a [`WeylGroup`], by index into its enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub usize);

/// Word in the simple reflections; letters are 1-based.
pub type Word = Vec<usize>;

struct ElemData {
    /// Matrix on the character lattice, row-major.
    char_m: Vec<i32>,
    length: usize,
    word: Word,
    inverse: usize,
}

/// Fully enumerated Weyl group of a root datum.
pub struct WeylGroup {
    datum: Arc<RootDatum>,
    elems: Vec<ElemData>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    lower: Mutex<HashMap<usize, Arc<Vec<bool>>>>,
    actions: Mutex<HashMap<(usize, usize), Arc<LinearMap>>>,
}

impl std::fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WeylGroup({}, order {})", self.datum.kind, self.elems.len())
    }
}

fn matmul(a: &[i32], b: &[i32], n: usize) -> Vec<i32> {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    c[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    c
}

fn matvec(a: &[i32], v: &[i32], n: usize) -> Vec<i32> {
    (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect()
}

impl WeylGroup {
    pub fn new(datum: Arc<RootDatum>) -> Result<Arc<Self>> {
        Self::with_bound(datum, DEFAULT_GROUP_BOUND)
    }

    pub fn with_bound(datum: Arc<RootDatum>, bound: u64) -> Result<Arc<Self>> {
        let order = datum.weyl_order();
        if order > bound {
            return Err(Error::BoundExceeded(format!("|W| = {order} exceeds {bound}")));
        }
        let n = datum.char_dim;
        let r = datum.rank();
        let rho: Vec<i32> = match datum.kind {
            DatumKind::GL(m) => (0..m).map(|i| (m - i) as i32).collect(),
            _ => vec![1; n],
        };
        let refl: Vec<Vec<i32>> = (0..r)
            .map(|i| {
                let a = &datum.simple_roots[i];
                let c = &datum.simple_coroots[i];
                let mut m = vec![0; n * n];
                for x in 0..n {
                    for y in 0..n {
                        m[x * n + y] = i32::from(x == y) - a[x] * c[y];
                    }
                }
                m
            })
            .collect();
        let mut id = vec![0; n * n];
        for i in 0..n {
            id[i * n + i] = 1;
        }
        let mut index: HashMap<Vec<i32>, usize> = HashMap::new();
        let mut mats = vec![id.clone()];
        let mut lens = vec![0usize];
        index.insert(rho.clone(), 0);
        let mut left = vec![vec![usize::MAX; r]];
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for i in 0..r {
                let m = matmul(&refl[i], &mats[w], n);
                let key = matvec(&m, &rho, n);
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = mats.len();
                        index.insert(key, j);
                        mats.push(m);
                        lens.push(lens[w] + 1);
                        left.push(vec![usize::MAX; r]);
                        queue.push_back(j);
                        j
                    }
                };
                left[w][i] = j;
            }
        }
        let count = mats.len();
        let right: Vec<Vec<usize>> = (0..count)
            .map(|w| {
                (0..r)
                    .map(|i| {
                        let m = matmul(&mats[w], &refl[i], n);
                        index[&matvec(&m, &rho, n)]
                    })
                    .collect()
            })
            .collect();
        let mut order_by_len: Vec<usize> = (0..count).collect();
        order_by_len.sort_by_key(|&w| lens[w]);
        let mut words: Vec<Word> = vec![Vec::new(); count];
        for &w in &order_by_len {
            if lens[w] == 0 {
                continue;
            }
            let i = (0..r).find(|&i| lens[left[w][i]] < lens[w]).expect("nonidentity has a left descent");
            let mut word = vec![i + 1];
            word.extend_from_slice(&words[left[w][i]]);
            words[w] = word;
        }
        let inverses: Vec<usize> = (0..count)
            .map(|w| words[w].iter().fold(0usize, |acc, &i| left[acc][i - 1]))
            .collect();
        let elems = (0..count)
            .map(|w| ElemData {
                char_m: mats[w].clone(),
                length: lens[w],
                word: words[w].clone(),
                inverse: inverses[w],
            })
            .collect();
        Ok(Arc::new(WeylGroup { datum, elems, left, right, lower: Mutex::new(HashMap::new()), actions: Mutex::new(HashMap::new()) }))
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn identity(&self) -> Elem {
        Elem(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.elems.len()).map(Elem)
    }

    /// Elements sorted by length, then by canonical word.
    pub fn elements_by_length(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.elements().collect();
        v.sort_by(|a, b| self.length(*a).cmp(&self.length(*b)).then_with(|| self.word(*a).cmp(self.word(*b))));
        v
    }

    pub fn length(&self, w: Elem) -> usize {
        self.elems[w.0].length
    }

    /// Lexicographically least reduced word.
    pub fn word(&self, w: Elem) -> &Word {
        &self.elems[w.0].word
    }

    pub fn inverse(&self, w: Elem) -> Elem {
        Elem(self.elems[w.0].inverse)
    }

    pub fn simple(&self, i: usize) -> Elem {
        Elem(self.left[0][i - 1])
    }

    pub fn lmul_simple(&self, i: usize, w: Elem) -> Elem {
        Elem(self.left[w.0][i - 1])
    }

    pub fn rmul_simple(&self, w: Elem, i: usize) -> Elem {
        Elem(self.right[w.0][i - 1])
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.elems[a.0].word.iter().rev().fold(b, |acc, &i| self.lmul_simple(i, acc))
    }

    pub fn validate_word(&self, word: &[usize]) -> Result<()> {
        let r = self.rank();
        if let Some(&bad) = word.iter().find(|&&i| i == 0 || i > r) {
            return Err(Error::InvalidWord(format!("letter {bad} outside 1..={r}")));
        }
        Ok(())
    }

    /// Product `s_{i_1} ... s_{i_k}`.
    pub fn from_word(&self, word: &[usize]) -> Result<Elem> {
        self.validate_word(word)?;
        Ok(word.iter().rev().fold(self.identity(), |acc, &i| self.lmul_simple(i, acc)))
    }

    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        Ok(self.length(self.from_word(word)?) == word.len())
    }

    pub fn longest(&self) -> Elem {
        self.elements().max_by_key(|&w| self.length(w)).expect("group is nonempty")
    }

    /// `w` applied to a character.
    pub fn act_char(&self, w: Elem, v: &[i32]) -> Vec<i32> {
        matvec(&self.elems[w.0].char_m, v, self.datum.char_dim)
    }

    /// `w` applied to a cocharacter.
    pub fn act_cochar(&self, w: Elem, v: &[i32]) -> Vec<i32> {
        self.word(w).iter().rev().fold(v.to_vec(), |acc, &i| self.datum.reflect_cochar(i, &acc))
    }

    /// Positive roots sent to negative roots, in character coordinates.
    pub fn inversions(&self, w: Elem) -> Vec<usize> {
        let d = &self.datum;
        d.roots()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_positive())
            .filter(|(_, r)| !d.root_by_char(&self.act_char(w, &r.char)).expect("roots map to roots").is_positive())
            .map(|(k, _)| k)
            .collect()
    }

    /// Action on symbol-lattice vectors: `w` on the z-block, `v` on the λ-block.
    pub fn action_map(&self, w: Elem, v: Elem) -> LinearMap {
        let d = &self.datum;
        let t = d.symbols();
        let mut m = LinearMap::identity(t.len());
        let zs = t.indices_of(SymbolKind::Z);
        let ls = t.indices_of(SymbolKind::Lambda);
        if w != self.identity() {
            for (k, &s) in zs.iter().enumerate() {
                let mut e = vec![0; zs.len()];
                e[k] = 1;
                m.set_image(s, d.z(&self.act_char(w, &e)));
            }
        }
        if v != self.identity() {
            for (k, &s) in ls.iter().enumerate() {
                let mut e = vec![0; ls.len()];
                e[k] = 1;
                m.set_image(s, d.lambda(&self.act_cochar(v, &e)));
            }
        }
        m
    }

    /// Cached [`WeylGroup::action_map`].
    pub fn action(&self, w: Elem, v: Elem) -> Arc<LinearMap> {
        if let Some(m) = self.actions.lock().expect("lock").get(&(w.0, v.0)) {
            return m.clone();
        }
        let m = Arc::new(self.action_map(w, v));
        self.actions.lock().expect("lock").insert((w.0, v.0), m.clone());
        m
    }

    /// `z_{wα}` for a character `α`.
    pub fn z_of(&self, w: Elem, alpha: &[i32]) -> LatticeVector {
        self.datum.z(&self.act_char(w, alpha))
    }

    /// Bruhat order by the subword criterion on the canonical word of `w`.
    pub fn bruhat_leq(&self, u: Elem, w: Elem) -> bool {
        if self.length(u) > self.length(w) {
            return false;
        }
        self.lower_interval(w)[u.0]
    }

    /// Indicator of `{u : u <= w}`.
    pub fn lower_interval(&self, w: Elem) -> Arc<Vec<bool>> {
        if let Some(v) = self.lower.lock().expect("lock").get(&w.0) {
            return v.clone();
        }
        let mut set = vec![false; self.order()];
        set[0] = true;
        let mut members = vec![0usize];
        for &i in self.word(w) {
            let new: Vec<usize> = members.iter().map(|&x| self.right[x][i - 1]).filter(|&y| !set[y]).collect();
            for y in new {
                if !set[y] {
                    set[y] = true;
                    members.push(y);
                }
            }
        }
        let set = Arc::new(set);
        self.lower.lock().expect("lock").insert(w.0, set.clone());
        set
    }

    /// Parses one-line notation (`GL_n` only), e.g. `321` or `3,2,1`.
    pub fn from_one_line(&self, s: &str) -> Result<Elem> {
        let n = match self.datum.kind {
            DatumKind::GL(n) => n,
            DatumKind::A(r) => r + 1,
            _ => return Err(Error::InvalidPermutation("one-line notation needs type A".into())),
        };
        let digits: Vec<usize> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<usize>()).collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidPermutation(s.into()))?
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidPermutation(s.into()))?
        };
        self.from_permutation(&digits, n)
    }

    pub fn from_permutation(&self, perm: &[usize], n: usize) -> Result<Elem> {
        let mut seen = vec![false; n + 1];
        if perm.len() != n || perm.iter().any(|&p| p == 0 || p > n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation of 1..={n}")));
        }
        let mut p = perm.to_vec();
        let mut word = Vec::new();
        // swapping adjacent positions is right multiplication by s_i
        while let Some(i) = (0..n - 1).find(|&i| p[i] > p[i + 1]) {
            p.swap(i, i + 1);
            word.push(i + 1);
        }
        let rev: Vec<usize> = word.into_iter().rev().collect();
        self.from_word(&rev)
    }

    /// One-line notation `[w(1), ..., w(n)]` for type A.
    pub fn one_line(&self, w: Elem) -> Option<Vec<usize>> {
        let n = match self.datum.kind {
            DatumKind::GL(n) => n,
            DatumKind::A(r) => r + 1,
            _ => return None,
        };
        let mut p: Vec<usize> = (1..=n).collect();
        for &i in self.word(w).iter().rev() {
            for x in p.iter_mut() {
                if *x == i {
                    *x = i + 1;
                } else if *x == i + 1 {
                    *x = i;
                }
            }
        }
        Some(p)
    }

    /// Compact display: one-line notation in type A, canonical word otherwise.
    pub fn label(&self, w: Elem) -> String {
        match self.one_line(w) {
            Some(p) if p.len() < 10 => p.iter().map(|x| x.to_string()).collect(),
            Some(p) => p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            None if self.length(w) == 0 => "id".into(),
            None => format!("s{}", self.word(w).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".s")),
        }
    }

    /// Parses `id`, a label such as `s1.s2`, a comma-separated word prefixed by
    /// `w:`, or one-line notation. A bare word is accepted when the string is not a
    /// permutation.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("w:") {
            return self.from_word(&parse_word(rest)?);
        }
        if s == "id" {
            return Ok(self.identity());
        }
        if s.starts_with('s') {
            let word: Result<Word> = s
                .split('.')
                .map(|t| t.strip_prefix('s').and_then(|t| t.parse().ok()).ok_or_else(|| Error::InvalidWord(s.into())))
                .collect();
            return self.from_word(&word?);
        }
        match self.one_line(self.identity()) {
            Some(_) => self.from_one_line(s).or_else(|e| parse_word(s).and_then(|w| self.from_word(&w)).map_err(|_| e)),
            None => self.from_word(&parse_word(s)?),
        }
    }
}

pub fn parse_word(s: &str) -> Result<Word> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidWord(s.into())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(k: DatumKind) -> Arc<WeylGroup> {
        WeylGroup::new(RootDatum::new(k).unwrap()).unwrap()
    }

    #[test]
    fn orders_and_longest_lengths() {
        for (k, order, top) in [
            (DatumKind::GL(3), 6, 3),
            (DatumKind::GL(4), 24, 6),
            (DatumKind::A(2), 6, 3),
            (DatumKind::B2, 8, 4),
            (DatumKind::G2, 12, 6),
        ] {
            let g = group(k);
            assert_eq!(g.order(), order);
            assert_eq!(g.length(g.longest()), top);
        }
    }

    #[test]
    fn length_equals_inversion_count() {
        for k in [DatumKind::GL(4), DatumKind::B2, DatumKind::G2] {
            let g = group(k);
            for w in g.elements() {
                assert_eq!(g.length(w), g.inversions(w).len());
                assert_eq!(g.from_word(g.word(w)).unwrap(), w);
                assert_eq!(g.mul(w, g.inverse(w)), g.identity());
            }
        }
    }

    #[test]
    fn one_line_round_trip() {
        let g = group(DatumKind::GL(4));
        for w in g.elements() {
            let p = g.one_line(w).unwrap();
            assert_eq!(g.from_permutation(&p, 4).unwrap(), w);
        }
        let s1 = g.simple(1);
        assert_eq!(g.one_line(s1).unwrap(), vec![2, 1, 3, 4]);
        let w = g.from_one_line("2341").unwrap();
        // w(1) = 2: w sends e1 to e2
        assert_eq!(g.act_char(w, &[1, 0, 0, 0]), vec![0, 1, 0, 0]);
    }

    #[test]
    fn canonical_word_is_lex_least() {
        let g = group(DatumKind::GL(3));
        let w0 = g.longest();
        assert_eq!(g.word(w0), &vec![1, 2, 1]);
    }

    #[test]
    fn rejects_bad_letters() {
        let g = group(DatumKind::GL(3));
        assert!(matches!(g.from_word(&[1, 3]), Err(Error::InvalidWord(_))));
        assert!(matches!(g.from_one_line("112"), Err(Error::InvalidPermutation(_))));
    }

    #[test]
    fn bound_is_enforced() {
        let d = RootDatum::new(DatumKind::GL(9)).unwrap();
        assert!(matches!(WeylGroup::new(d), Err(Error::BoundExceeded(_))));
    }
}
