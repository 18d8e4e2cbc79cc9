use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolKind {
    /// Equivariant (character) variable.
    Z,
    /// Dynamical (cocharacter) variable.
    Lambda,
    Hbar,
}

/// Ordered list of formal symbols; lattice vectors and exponent vectors are
/// dense over this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolTable {
    names: Vec<String>,
    kinds: Vec<SymbolKind>,
}

impl SymbolTable {
    /// Builds a table `z.., lambda.., hbar` from the given names.
    pub fn new<S: AsRef<str>>(z: &[S], lambda: &[S]) -> Arc<SymbolTable> {
        let mut names = Vec::new();
        let mut kinds = Vec::new();
        for n in z {
            names.push(n.as_ref().to_string());
            kinds.push(SymbolKind::Z);
        }
        for n in lambda {
            names.push(n.as_ref().to_string());
            kinds.push(SymbolKind::Lambda);
        }
        names.push("hbar".to_string());
        kinds.push(SymbolKind::Hbar);
        Arc::new(SymbolTable { names, kinds })
    }

    /// `z1..zn, lambda1..lambdan, hbar`.
    pub fn numbered(nz: usize, nl: usize) -> Arc<SymbolTable> {
        let z: Vec<String> = (1..=nz).map(|i| format!("z{i}")).collect();
        let l: Vec<String> = (1..=nl).map(|i| format!("l{i}")).collect();
        Self::new(&z, &l)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn kind(&self, i: usize) -> SymbolKind {
        self.kinds[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown symbol {name}")))
    }

    pub fn hbar(&self) -> usize {
        self.names.len() - 1
    }

    pub fn indices_of(&self, kind: SymbolKind) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.kinds[i] == kind).collect()
    }

    pub fn zero(&self) -> LatticeVector {
        LatticeVector::zero(self.len())
    }

    pub fn basis(&self, i: usize) -> LatticeVector {
        let mut v = self.zero();
        v.0[i] = 1;
        v
    }

    pub fn hbar_vector(&self) -> LatticeVector {
        self.basis(self.hbar())
    }

    /// Embeds `coords` into the block of symbols of the given kind.
    pub fn embed(&self, kind: SymbolKind, coords: &[i32]) -> LatticeVector {
        let idx = self.indices_of(kind);
        assert_eq!(idx.len(), coords.len(), "coordinate length mismatch");
        let mut v = self.zero();
        for (k, &i) in idx.iter().enumerate() {
            v.0[i] = coords[k];
        }
        v
    }

    /// Parses a linear combination such as `z1-z2+2hbar`.
    pub fn parse_vector(&self, s: &str) -> Result<LatticeVector> {
        let mut v = self.zero();
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(v);
        }
        let bytes: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1;
            if bytes[i] == '+' || bytes[i] == '-' {
                if bytes[i] == '-' {
                    sign = -1;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coef: i32 = if i > start {
                bytes[start..i].iter().collect::<String>().parse().map_err(|_| Error::Parse(s.clone()))?
            } else {
                1
            };
            if i < bytes.len() && bytes[i] == '*' {
                i += 1;
            }
            let ns = i;
            while i < bytes.len() && bytes[i] != '+' && bytes[i] != '-' {
                i += 1;
            }
            let name: String = bytes[ns..i].iter().collect();
            if name.is_empty() {
                return Err(Error::Parse(format!("missing symbol in {s}")));
            }
            let idx = self.index_of(&name)?;
            v.0[idx] += sign * coef;
        }
        Ok(v)
    }
}

/// Integer vector over the symbols of a table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<i32>);

impl LatticeVector {
    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i32) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    /// True when the first nonzero coordinate is negative.
    pub fn is_negative(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0)
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> DisplayVector<'a> {
        DisplayVector { v: self, table }
    }
}

pub struct DisplayVector<'a> {
    v: &'a LatticeVector,
    table: &'a SymbolTable,
}

impl fmt::Display for DisplayVector<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.v.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = self.table.name(i);
            if first {
                if c == -1 {
                    write!(f, "-")?;
                } else if c != 1 {
                    write!(f, "{c}")?;
                }
            } else if c == 1 {
                write!(f, "+")?;
            } else if c == -1 {
                write!(f, "-")?;
            } else if c > 0 {
                write!(f, "+{c}")?;
            } else {
                write!(f, "{c}")?;
            }
            write!(f, "{name}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Linear map between symbol lattices, given by the image of each source symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    images: Vec<LatticeVector>,
    target_len: usize,
}

impl LinearMap {
    pub fn new(images: Vec<LatticeVector>, target_len: usize) -> Self {
        debug_assert!(images.iter().all(|v| v.len() == target_len));
        LinearMap { images, target_len }
    }

    pub fn identity(n: usize) -> Self {
        let images = (0..n)
            .map(|i| {
                let mut v = LatticeVector::zero(n);
                v.0[i] = 1;
                v
            })
            .collect();
        LinearMap { images, target_len: n }
    }

    pub fn is_identity(&self) -> bool {
        self.images.len() == self.target_len
            && self.images.iter().enumerate().all(|(i, v)| v.0.iter().enumerate().all(|(j, &c)| c == (i == j) as i32))
    }

    pub fn source_len(&self) -> usize {
        self.images.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn set_image(&mut self, i: usize, v: LatticeVector) {
        self.images[i] = v;
    }

    pub fn image(&self, i: usize) -> &LatticeVector {
        &self.images[i]
    }

    pub fn apply(&self, u: &LatticeVector) -> LatticeVector {
        let mut out = vec![0i32; self.target_len];
        for (i, &c) in u.0.iter().enumerate() {
            if c != 0 {
                for (o, &m) in out.iter_mut().zip(&self.images[i].0) {
                    *o += c * m;
                }
            }
        }
        LatticeVector(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            images: other.images.iter().map(|v| self.apply(v)).collect(),
            target_len: self.target_len,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let t = SymbolTable::numbered(3, 3);
        let v = t.parse_vector("z1-z2+2hbar").unwrap();
        assert_eq!(v.0, vec![1, -1, 0, 0, 0, 0, 2]);
        assert_eq!(v.display(&t).to_string(), "z1-z2+2hbar");
        assert_eq!(t.parse_vector("-l3").unwrap().display(&t).to_string(), "-l3");
        assert!(t.parse_vector("w1").is_err());
    }

    #[test]
    fn linear_map_composes() {
        let t = SymbolTable::numbered(2, 0);
        let mut swap = LinearMap::identity(t.len());
        swap.set_image(0, t.basis(1));
        swap.set_image(1, t.basis(0));
        let v = t.parse_vector("z1+3z2").unwrap();
        assert_eq!(swap.apply(&v), t.parse_vector("3z1+z2").unwrap());
        assert_eq!(swap.compose(&swap).apply(&v), v);
    }
}
