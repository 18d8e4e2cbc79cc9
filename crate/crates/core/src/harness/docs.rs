//! Documents emitted by the command-line front end.
//!
//! Exact values are written as `{num, den}`, each a map from the `q`-exponent
//! to a list of `{coeff, exp}` monomials; `exp` is the doubled exponent vector
//! over the document's `symbols` (entry `k` stands for `e(k·s/2)`).

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::config::{RunConfig, DEFAULT_TRUNC};
use crate::error::{Error, Result};
use crate::roots::{parse_word, DatumKind};
use crate::schubert::{billey, billey_parabolic, elliptic_class, parabolic_class, specialized_table, BilleySum, ClassTables};
use crate::theta::{Coeff, EvalScalar, LaurentPoly, Mode, QSeries, Rational, SymScalar, SymbolTable, ThetaExpr, Verifier, EXACT};
use crate::typea::{enumerate_grid, parse_perm, polynomial_rep, polynomial_rep_parabolic, GenericPipeDream, Perm};

pub const CLASS_TABLE_SCHEMA: &str = "elliptic-schubert/class-table/v1";
pub const BILLEY_SCHEMA: &str = "elliptic-schubert/billey/v1";
pub const PIPE_DREAMS_SCHEMA: &str = "elliptic-schubert/pipe-dreams/v1";
pub const POLY_SCHEMA: &str = "elliptic-schubert/poly/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub coeff: String,
    pub exp: Vec<i32>,
}

/// Truncated series; `prec` is the last known `q`-exponent, `null` when exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson<T> {
    pub prec: Option<String>,
    pub terms: BTreeMap<String, T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolicJson {
    pub num: SeriesJson<Vec<MonomialJson>>,
    pub den: SeriesJson<Vec<MonomialJson>>,
}

/// Value at one rational point; `point[s]` is the value of `e(s/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationJson {
    pub point: Vec<String>,
    pub num: SeriesJson<String>,
    pub den: SeriesJson<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueJson {
    /// Exact theta expression, or `0` when the value vanishes.
    pub expr: String,
    pub zero: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<SymbolicJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<Vec<EvaluationJson>>,
}

fn q_exponent(k: i64, qden: u32) -> String {
    Rational::new(k.into(), (qden as i64).into()).to_string()
}

fn series_json<C: Coeff, T>(s: &QSeries<C>, qden: u32, f: impl Fn(&C) -> T) -> SeriesJson<T> {
    SeriesJson {
        prec: (s.precision() < EXACT).then(|| q_exponent(s.precision(), qden)),
        terms: s.terms().map(|(k, c)| (q_exponent(k, qden), f(c))).collect(),
    }
}

fn laurent_json(p: &LaurentPoly) -> Vec<MonomialJson> {
    p.terms().map(|(e, c)| MonomialJson { coeff: c.to_string(), exp: e.clone() }).collect()
}

pub fn symbolic_json(s: &SymScalar) -> SymbolicJson {
    let d = s.ctx.qden;
    SymbolicJson { num: series_json(&s.num, d, laurent_json), den: series_json(&s.den, d, laurent_json) }
}

fn evaluation_json(s: &EvalScalar, point: &[Rational]) -> EvaluationJson {
    let d = s.ctx.qden;
    EvaluationJson {
        point: point.iter().map(|r| r.to_string()).collect(),
        num: series_json(&s.num, d, |c| c.to_string()),
        den: series_json(&s.den, d, |c| c.to_string()),
    }
}

/// Serializes `e` in the verifier's mode, writing `0` for values it decides vanish.
pub fn value_json(e: &ThetaExpr, ver: &Verifier, table: &SymbolTable) -> Result<ValueJson> {
    let zero = ver.is_zero(e)?;
    let e = if zero { ThetaExpr::zero() } else { e.clone() };
    let mut v = ValueJson { expr: e.display(table).to_string(), zero, symbolic: None, evaluations: None };
    match ver.mode {
        Mode::Symbolic => v.symbolic = Some(symbolic_json(&ver.flatten(&e)?)),
        Mode::Eval => {
            let mut out = Vec::with_capacity(ver.points());
            for k in 0..ver.points() {
                let s = ver.eval(&e, k)?;
                out.push(evaluation_json(&s, &ver.point(k).values));
            }
            v.evaluations = Some(out);
        }
    }
    Ok(v)
}

/// Rendering shared by every document.
pub trait Document: Serialize {
    fn to_ascii(&self) -> String;
    fn to_latex(&self) -> String;

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    fn render(&self, format: super::Format) -> String {
        match format {
            super::Format::Json => self.to_json(),
            super::Format::Ascii => self.to_ascii(),
            super::Format::Latex => self.to_latex(),
        }
    }
}

fn type_name(k: DatumKind) -> String {
    k.to_string()
}

fn looks_one_line(s: &str) -> Option<usize> {
    if s.contains(',') {
        let parts: Vec<&str> = s.split(',').collect();
        return parts.iter().all(|p| p.trim().parse::<usize>().is_ok()).then_some(parts.len());
    }
    (!s.is_empty() && s.chars().all(|c| c.is_ascii_digit())).then_some(s.len())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub u: String,
    pub w: String,
    pub value: ValueJson,
}

/// `E_w(u)` (or `E^P_w(u)`) for every `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassTableDoc {
    pub schema: String,
    #[serde(rename = "type")]
    pub datum: String,
    pub rank: usize,
    pub trunc: u32,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parabolic: Option<Vec<usize>>,
    pub symbols: Vec<String>,
    pub w: String,
    pub entries: Vec<EntryJson>,
}

pub fn localize(config: &RunConfig, w: &str) -> Result<ClassTableDoc> {
    config.validate()?;
    let kind = match config.datum {
        Some(k) => k,
        None => DatumKind::GL(looks_one_line(w).ok_or_else(|| Error::InvalidArgument(format!("cannot infer the group from --w {w}; pass --type/--rank")))?),
    };
    let g = config.group(kind)?;
    let d = g.datum();
    let table = d.symbols();
    let we = g.parse_elem(w)?;
    let ver = config.verifier(table, DEFAULT_TRUNC, "localize");
    let tables = ClassTables::new(&g);
    let par = config.parabolic_for(&g)?;
    let values: BTreeMap<_, ThetaExpr> = match &par {
        None => elliptic_class(&tables, we)?.values,
        Some(p) if p.is_min_rep(we) => {
            let c = parabolic_class(p, we)?;
            g.elements().map(|u| (u, c.at(u).clone())).collect()
        }
        Some(p) => {
            let spec = specialized_table(p, tables.b_right()?)?;
            g.elements().map(|u| (u, spec.get(u, we).clone())).collect()
        }
    };
    let mut entries = Vec::with_capacity(values.len());
    for u in g.elements_by_length() {
        let v = values.get(&u).cloned().unwrap_or_default();
        entries.push(EntryJson { u: g.label(u), w: g.label(we), value: value_json(&v, &ver, table)? });
    }
    Ok(ClassTableDoc {
        schema: CLASS_TABLE_SCHEMA.into(),
        datum: type_name(kind),
        rank: d.char_dim,
        trunc: ver.ctx.trunc,
        mode: config.mode,
        parabolic: config.parabolic.clone(),
        symbols: table.names().to_vec(),
        w: g.label(we),
        entries,
    })
}

impl Document for ClassTableDoc {
    fn to_ascii(&self) -> String {
        let mut s = format!("E_{}(u) on {}", self.w, self.datum);
        if let Some(p) = &self.parabolic {
            let _ = write!(s, ", blocks {p:?}");
        }
        s.push('\n');
        let width = self.entries.iter().map(|e| e.u.len()).max().unwrap_or(1);
        for e in &self.entries {
            let _ = writeln!(s, "{:width$}  {}", e.u, e.value.expr);
        }
        s
    }

    fn to_latex(&self) -> String {
        let mut s = String::from("\\begin{tabular}{ll}\n$u$ & $E_{");
        let _ = writeln!(s, "{}}}(u)$ \\\\\n\\hline", self.w);
        for e in &self.entries {
            let _ = writeln!(s, "${}$ & ${}$ \\\\", e.u, latex_expr(&e.value.expr));
        }
        s.push_str("\\end{tabular}\n");
        s
    }
}

fn latex_expr(s: &str) -> String {
    s.replace("θ", "\\theta").replace("hbar", "\\hbar")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilleyFactorJson {
    pub j: usize,
    pub letter: usize,
    pub in_subset: bool,
    /// `β_j` in the character lattice.
    pub beta: Vec<i32>,
    /// `γ̌_j^J` in the cocharacter lattice.
    pub gamma: Vec<i32>,
    /// `P(λ_γ, z_β)` or `Q(λ_γ, z_β)`.
    pub atom: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilleyTermJson {
    /// Positions in `J`, 1-based.
    pub subset: Vec<usize>,
    /// `ε_j = 1` for `j ∈ J`.
    pub epsilon: Vec<u8>,
    pub factors: Vec<BilleyFactorJson>,
}

/// The subword expansion of `E_w(u)` over a word of `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilleyDoc {
    pub schema: String,
    #[serde(rename = "type")]
    pub datum: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parabolic: Option<Vec<usize>>,
    pub word: Vec<usize>,
    pub u: String,
    pub w: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_filter: Option<Vec<usize>>,
    /// Number of terms before filtering.
    pub term_count: usize,
    pub terms: Vec<BilleyTermJson>,
    pub value: ValueJson,
}

/// `word` is comma separated; `subset`, if given, keeps only the term with that `J`.
pub fn billey_terms(config: &RunConfig, word: &str, w: &str, subset: Option<&[usize]>) -> Result<BilleyDoc> {
    config.validate()?;
    let word = parse_word(word)?;
    let kind = config.datum_or_gl(word.iter().copied().max().unwrap_or(0) + 1);
    let g = config.group(kind)?;
    let d = g.datum();
    let table = d.symbols();
    let we = g.parse_elem(w)?;
    let sum: BilleySum = match config.parabolic_for(&g)? {
        Some(p) => billey_parabolic(&p, &word, we)?,
        None => billey(&g, &word, we)?,
    };
    let ver = config.verifier(table, DEFAULT_TRUNC, "billey");
    let mut terms = Vec::new();
    for t in &sum.terms {
        if subset.is_some_and(|s| s != t.subset.as_slice()) {
            continue;
        }
        let mut factors = Vec::with_capacity(t.factors.len());
        for f in &t.factors {
            let (lam, z) = (d.lambda(&f.gamma), d.z(&f.beta));
            let name = if f.in_subset { "Q" } else { "P" };
            factors.push(BilleyFactorJson {
                j: f.j,
                letter: f.letter,
                in_subset: f.in_subset,
                beta: f.beta.clone(),
                gamma: f.gamma.clone(),
                atom: format!("{name}({}, {})", lam.display(table), z.display(table)),
            });
        }
        let mut epsilon = vec![0u8; word.len()];
        for &j in &t.subset {
            epsilon[j - 1] = 1;
        }
        terms.push(BilleyTermJson { subset: t.subset.clone(), epsilon, factors });
    }
    Ok(BilleyDoc {
        schema: BILLEY_SCHEMA.into(),
        datum: type_name(kind),
        rank: d.char_dim,
        parabolic: config.parabolic.clone(),
        word: word.clone(),
        u: g.label(g.from_word(&word)?),
        w: g.label(we),
        subset_filter: subset.map(|s| s.to_vec()),
        term_count: sum.terms.len(),
        terms,
        value: value_json(&sum.total, &ver, table)?,
    })
}

impl Document for BilleyDoc {
    fn to_ascii(&self) -> String {
        let mut s = format!(
            "word {:?} (u = {}), w = {}: {} term(s)\n",
            self.word, self.u, self.w, self.term_count
        );
        for t in &self.terms {
            let _ = writeln!(s, "J = {:?}", t.subset);
            for f in &t.factors {
                let _ = writeln!(
                    s,
                    "  j={} s{} eps={} beta={:?} gamma={:?}  {}",
                    f.j, f.letter, f.in_subset as u8, f.beta, f.gamma, f.atom
                );
            }
        }
        let _ = writeln!(s, "value = {}", self.value.expr);
        s
    }

    fn to_latex(&self) -> String {
        let mut s = String::from("\\begin{tabular}{llll}\n$j$ & $\\epsilon_j$ & $\\beta_j$ & $\\check\\gamma_j^J$ \\\\\n\\hline\n");
        for t in &self.terms {
            let _ = writeln!(s, "\\multicolumn{{4}}{{l}}{{$J = \\{{{}\\}}$}} \\\\", join(&t.subset));
            for f in &t.factors {
                let _ = writeln!(s, "{} & {} & $({})$ & $({})$ \\\\", f.j, f.in_subset as u8, join(&f.beta), join(&f.gamma));
            }
        }
        s.push_str("\\end{tabular}\n");
        s
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipeDreamJson {
    /// One string of tile letters per row.
    pub tiles: Vec<String>,
    /// Levels of the single-pipe tiles, `null` elsewhere.
    pub levels: Vec<Vec<Option<i32>>>,
    pub permutation: Vec<usize>,
    /// Product of `{fn, arg1, arg2}` atoms.
    pub weight: serde_json::Value,
    pub weight_latex: String,
    pub latex: String,
}

impl PipeDreamJson {
    pub fn from_pipe_dream(pd: &GenericPipeDream) -> Self {
        let w = pd.weight();
        PipeDreamJson {
            tiles: pd.tiles.iter().map(|r| r.iter().map(|t| t.letter()).collect()).collect(),
            levels: pd.levels.clone(),
            permutation: pd.permutation(),
            weight: w.to_json(),
            weight_latex: w.to_latex(),
            latex: pd.to_latex(),
        }
    }

    pub fn pipe_dream(&self) -> Result<GenericPipeDream> {
        let rows: Vec<&str> = self.tiles.iter().map(|s| s.as_str()).collect();
        let pd = GenericPipeDream::parse_rows(&rows)?;
        if pd.levels != self.levels || pd.permutation() != self.permutation {
            return Err(Error::Parse("pipe dream fields are inconsistent".into()));
        }
        Ok(pd)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipeDreamsDoc {
    pub schema: String,
    pub n: usize,
    pub w: Vec<usize>,
    pub count: usize,
    pub pipe_dreams: Vec<PipeDreamJson>,
}

fn size_and_perm(config: &RunConfig, w: &str) -> Result<(usize, Perm)> {
    let w = parse_perm(w)?;
    let n = match config.datum {
        None => w.len(),
        Some(DatumKind::GL(n)) => n,
        Some(k) => return Err(Error::InvalidArgument(format!("pipe dreams need type A, got {k}"))),
    };
    if w.len() != n {
        return Err(Error::InvalidPermutation(format!("{w:?} is not in S_{n}")));
    }
    Ok((n, w))
}

pub fn pipe_dreams(config: &RunConfig, w: &str) -> Result<PipeDreamsDoc> {
    config.validate()?;
    let (n, w) = size_and_perm(config, w)?;
    let pds = enumerate_grid(n, &w)?;
    Ok(PipeDreamsDoc {
        schema: PIPE_DREAMS_SCHEMA.into(),
        n,
        count: pds.len(),
        w,
        pipe_dreams: pds.iter().map(PipeDreamJson::from_pipe_dream).collect(),
    })
}

impl Document for PipeDreamsDoc {
    fn to_ascii(&self) -> String {
        let mut s = format!("{} generic pipe dream(s) for w = {}\n", self.count, join(&self.w));
        for pd in &self.pipe_dreams {
            s.push('\n');
            if let Ok(p) = pd.pipe_dream() {
                s.push_str(&p.to_ascii());
            }
            let _ = writeln!(s, "weight: {}", pd.weight_latex);
        }
        s
    }

    fn to_latex(&self) -> String {
        let mut s = String::new();
        for pd in &self.pipe_dreams {
            let _ = writeln!(s, "{} \\quad {}\n", pd.latex, pd.weight_latex);
        }
        s
    }
}

/// `𝓔_w` as a sum of pipe-dream weights (or its parabolic specialization).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub schema: String,
    pub n: usize,
    pub w: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parabolic: Option<Vec<usize>>,
    pub terms: usize,
    /// Sum of products of `{fn, arg1, arg2}` atoms; absent after specialization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<serde_json::Value>,
    pub latex: String,
    pub expr: String,
}

pub fn poly(config: &RunConfig, w: &str) -> Result<PolyDoc> {
    config.validate()?;
    let (n, w) = size_and_perm(config, w)?;
    let e = polynomial_rep(n, &w)?;
    let terms = e.terms.len();
    let doc = match &config.parabolic {
        None => PolyDoc {
            schema: POLY_SCHEMA.into(),
            n,
            w,
            parabolic: None,
            terms,
            latex: e.to_latex(),
            expr: e.to_string(),
            weight: Some(e.to_json()),
        },
        Some(comp) => {
            let (t, x) = polynomial_rep_parabolic(n, comp, &w)?;
            let expr = x.display(&t).to_string();
            PolyDoc { schema: POLY_SCHEMA.into(), n, w, parabolic: Some(comp.clone()), terms, latex: latex_expr(&expr), expr, weight: None }
        }
    };
    Ok(doc)
}

impl Document for PolyDoc {
    fn to_ascii(&self) -> String {
        format!("E_{} = {}\n", join(&self.w), self.expr)
    }

    fn to_latex(&self) -> String {
        format!("\\mathcal{{E}}_{{{}}} = {}\n", join(&self.w), self.latex)
    }
}

impl Document for super::ReportDocument {
    fn to_ascii(&self) -> String {
        super::ReportDocument::to_ascii(self)
    }

    fn to_latex(&self) -> String {
        super::ReportDocument::to_latex(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::SeriesContext;

    #[test]
    fn vanishing_values_print_zero() {
        let t = SymbolTable::numbered(2, 1);
        let u = t.parse_vector("z1-z2").unwrap();
        let e = ThetaExpr::theta(&u).add(&ThetaExpr::theta(&u.neg()));
        let ver = Verifier::new(SeriesContext::new(3, t.clone()), Mode::Symbolic, 1, 0);
        let v = value_json(&e, &ver, &t).unwrap();
        assert!(v.zero);
        assert_eq!(v.expr, "0");
        assert!(v.symbolic.is_some() && v.evaluations.is_none());
    }

    #[test]
    fn group_is_inferred_from_operands() {
        let c = RunConfig::default();
        let d = localize(&c, "2413").unwrap();
        assert_eq!((d.datum.as_str(), d.rank, d.entries.len()), ("GL4", 4, 24));
        let b = billey_terms(&c, "2,1", "132", None).unwrap();
        assert_eq!(b.datum, "GL3");
        assert!(localize(&c, "s1.s2").is_err());
    }

    #[test]
    fn billey_filters_and_empty_sums() {
        let c = RunConfig::default();
        let all = billey_terms(&c, "1,2,1", "213", None).unwrap();
        assert_eq!((all.term_count, all.terms.len()), (2, 2));
        let one = billey_terms(&c, "1,2,1", "213", Some(&[3])).unwrap();
        assert_eq!((one.term_count, one.terms.len()), (2, 1));
        assert_eq!(one.terms[0].subset, vec![3]);
        let none = billey_terms(&c, "1", "321", None);
        assert!(none.is_err());
        let c3 = RunConfig { datum: Some(DatumKind::GL(3)), ..RunConfig::default() };
        let none = billey_terms(&c3, "1", "321", None).unwrap();
        assert_eq!((none.term_count, none.value.expr.as_str()), (0, "0"));
    }

    #[test]
    fn pipe_dream_json_rebuilds_the_grid() {
        let d = pipe_dreams(&RunConfig::default(), "132").unwrap();
        assert_eq!(d.count, d.pipe_dreams.len());
        for p in &d.pipe_dreams {
            assert_eq!(PipeDreamJson::from_pipe_dream(&p.pipe_dream().unwrap()), *p);
        }
    }
}
