use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::{LatticeVector, SymbolTable, ThetaExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PQ {
    P,
    Q,
}

/// `P(x, y)` or `Q(x, y)` with arguments over a symbol table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub f: PQ,
    pub x: LatticeVector,
    pub y: LatticeVector,
}

/// Sum of products of `P`/`Q` atoms, kept unexpanded for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightExpr {
    symbols: Arc<SymbolTable>,
    pub terms: Vec<Vec<Atom>>,
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    #[serde(rename = "fn")]
    f: PQ,
    arg1: String,
    arg2: String,
}

#[derive(Serialize, Deserialize)]
struct ProductJson {
    product: Vec<AtomJson>,
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    symbols: Vec<String>,
    sum: Vec<ProductJson>,
}

impl WeightExpr {
    pub fn zero(symbols: &Arc<SymbolTable>) -> Self {
        WeightExpr { symbols: symbols.clone(), terms: Vec::new() }
    }

    pub fn product(symbols: &Arc<SymbolTable>, atoms: Vec<Atom>) -> Self {
        WeightExpr { symbols: symbols.clone(), terms: vec![atoms] }
    }

    pub fn symbols(&self) -> &Arc<SymbolTable> {
        &self.symbols
    }

    pub fn add(&mut self, o: WeightExpr) {
        self.terms.extend(o.terms);
    }

    pub fn to_theta(&self) -> Result<ThetaExpr> {
        let h = self.symbols.hbar_vector();
        let mut total = ThetaExpr::zero();
        for t in &self.terms {
            let mut acc = ThetaExpr::one();
            for a in t {
                let f = match a.f {
                    PQ::P => ThetaExpr::p(&a.x, &a.y, &h)?,
                    PQ::Q => ThetaExpr::q(&a.x, &a.y, &h)?,
                };
                acc = acc.mul(&f);
            }
            total.add_assign(&acc);
        }
        Ok(total)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = WeightJson {
            symbols: self.symbols.names().to_vec(),
            sum: self
                .terms
                .iter()
                .map(|t| ProductJson {
                    product: t
                        .iter()
                        .map(|a| AtomJson {
                            f: a.f,
                            arg1: a.x.display(&self.symbols).to_string(),
                            arg2: a.y.display(&self.symbols).to_string(),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: WeightJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let (mut z, mut l) = (Vec::new(), Vec::new());
        for s in &doc.symbols {
            if s == "hbar" {
                continue;
            }
            if s.starts_with('l') { l.push(s.clone()) } else { z.push(s.clone()) }
        }
        let symbols = SymbolTable::new(&z, &l);
        if symbols.names() != doc.symbols.as_slice() {
            return Err(Error::Parse("symbols must be listed as z.., l.., hbar".into()));
        }
        let mut terms = Vec::new();
        for p in doc.sum {
            let mut t = Vec::new();
            for a in p.product {
                t.push(Atom { f: a.f, x: symbols.parse_vector(&a.arg1)?, y: symbols.parse_vector(&a.arg2)? });
            }
            terms.push(t);
        }
        Ok(WeightExpr { symbols, terms })
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let tex = |v: &LatticeVector| latex_vector(&v.display(&self.symbols).to_string());
        self.terms
            .iter()
            .map(|t| {
                if t.is_empty() {
                    return "1".to_string();
                }
                t.iter()
                    .map(|a| format!("{:?}({},{})", a.f, tex(&a.x), tex(&a.y)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `l3-2hbar` becomes `\lambda_{3}-2\hbar`.
fn latex_vector(s: &str) -> String {
    let mut out = String::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                i += 1;
            }
            let name: String = cs[st..i].iter().collect();
            let ds = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let idx: String = cs[ds..i].iter().collect();
            let base = match name.as_str() {
                "l" => "\\lambda".to_string(),
                "hbar" => "\\hbar".to_string(),
                other => other.to_string(),
            };
            if idx.is_empty() {
                out.push_str(&base);
            } else {
                out.push_str(&format!("{base}_{{{idx}}}"));
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

impl fmt::Display for WeightExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if t.is_empty() {
                write!(f, "1")?;
            }
            for (j, a) in t.iter().enumerate() {
                if j > 0 {
                    write!(f, "·")?;
                }
                write!(f, "{:?}({}, {})", a.f, a.x.display(&self.symbols), a.y.display(&self.symbols))?;
            }
        }
        Ok(())
    }
}
