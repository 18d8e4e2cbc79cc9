use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use serde_json::json;

use super::config::RunConfig;
use super::report::{CheckRecord, ReportDocument};
use crate::duality::{dual_basis_check, parabolic_dual_basis_check};
use crate::error::{Error, Result};
use crate::ktheory::{
    k_recursion_check, k_table, k_table_billey, limit, limit_pq, limit_weight_table_check, KScalar, PQLimit,
    TauSubstitution, TileKind,
};
use crate::roots::{DatumKind, Elem, Parabolic, RootDatum, WeylGroup};
use crate::schubert::{
    billey, elliptic_class, is_identity_table, mirror_matrix, rmatrix_product, sub_sub_wiring, verify_parabolic,
    verify_yang_baxter, ClassTables,
};
use crate::theta::{pfun, qfun, rat, theta, LatticeVector, SeriesContext, SymbolTable, ThetaExpr, Verifier};
use crate::twisted::{expand_a, invert_to_b, t_word};
use crate::typea::{
    enumerate_grid, filtered_subwords, loc, poly_recursion_check, poly_symbols, polynomial_rep, subwiring_poly_weight,
    u0_data, Atom, GenericPipeDream, Perm, PQ,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    All,
    Theta,
    Twisted,
    Billey,
    Ybe,
    Mirror,
    Parabolic,
    Gpd,
    Poly,
    Klimit,
    Duality,
}

impl Suite {
    pub const NAMES: [&'static str; 11] =
        ["all", "theta", "twisted", "billey", "ybe", "mirror", "parabolic", "gpd", "poly", "klimit", "duality"];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    fn members() -> [Suite; 10] {
        use Suite::*;
        [Theta, Twisted, Billey, Ybe, Mirror, Parabolic, Gpd, Poly, Klimit, Duality]
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use Suite::*;
        let all = [All, Theta, Twisted, Billey, Ybe, Mirror, Parabolic, Gpd, Poly, Klimit, Duality];
        all.into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s}; expected one of {}", Self::NAMES.join(", "))))
    }
}

type Outcome = Result<(bool, String)>;

/// A check waiting to run: metadata plus the work.
pub struct Check {
    pub name: String,
    pub identity: String,
    pub anchor: String,
    pub parameters: serde_json::Value,
    run: Box<dyn FnOnce() -> Outcome + Send>,
}

impl Check {
    fn new(
        name: impl Into<String>,
        identity: impl Into<String>,
        anchor: impl Into<String>,
        parameters: serde_json::Value,
        run: impl FnOnce() -> Outcome + Send + 'static,
    ) -> Self {
        Check { name: name.into(), identity: identity.into(), anchor: anchor.into(), parameters, run: Box::new(run) }
    }
}

/// Runs the checks on separate threads; the report is sorted by check name.
pub fn run_checks(config: &RunConfig, suite: &str, checks: Vec<Check>) -> ReportDocument {
    let timing = config.timing;
    let records = std::thread::scope(|s| {
        let handles: Vec<_> = checks
            .into_iter()
            .map(|c| {
                let Check { name, identity, anchor, parameters, run } = c;
                let h = s.spawn(move || {
                    let t0 = Instant::now();
                    let out = run();
                    (out, t0.elapsed().as_millis() as u64)
                });
                (name, identity, anchor, parameters, h)
            })
            .collect();
        handles
            .into_iter()
            .map(|(name, identity, anchor, parameters, h)| {
                let (passed, detail, ms) = match h.join() {
                    Ok((Ok((p, d)), ms)) => (p, d, Some(ms)),
                    Ok((Err(e), ms)) => (false, format!("error: {e}"), Some(ms)),
                    Err(_) => (false, "panicked".to_string(), None),
                };
                CheckRecord { name, identity, anchor, parameters, passed, detail, elapsed_ms: if timing { ms } else { None } }
            })
            .collect()
    });
    ReportDocument::new(suite, config.seed, records)
}

/// `cmd_verify`: the checks of `suite` under `config`.
pub fn verify(config: &RunConfig, suite: Suite) -> Result<ReportDocument> {
    config.validate()?;
    Ok(run_checks(config, suite.name(), checks(config, suite)?))
}

pub fn checks(config: &RunConfig, suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::All => {
            let mut v = Vec::new();
            for s in Suite::members() {
                v.extend(checks(config, s)?);
            }
            v
        }
        Suite::Theta => theta_checks(config),
        Suite::Twisted => twisted_checks(config),
        Suite::Billey => billey_checks(config),
        Suite::Ybe => ybe_checks(config),
        Suite::Mirror => mirror_checks(config),
        Suite::Parabolic => parabolic_checks(config)?,
        Suite::Gpd => gpd_checks(config),
        Suite::Poly => poly_checks(config),
        Suite::Klimit => klimit_checks(config)?,
        Suite::Duality => duality_checks(config)?,
    })
}

fn group(k: DatumKind) -> Result<Arc<WeylGroup>> {
    WeylGroup::new(RootDatum::new(k)?)
}

fn eval_params(config: &RunConfig, trunc: u32) -> serde_json::Value {
    json!({ "trunc": config.trunc_or(trunc), "mode": config.mode, "points": config.points })
}

fn summarize(failures: &[String], total: usize) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("{total} instance(s)"))
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(|s| s.as_str()).collect();
        (false, format!("{} of {total} failed: {}", failures.len(), shown.join("; ")))
    }
}

fn theta_checks(config: &RunConfig) -> Vec<Check> {
    let trunc = config.trunc_or(8);
    let params = json!({ "trunc": trunc, "mode": "symbolic" });
    let table = SymbolTable::numbered(2, 1);
    let ctx = SeriesContext::new(trunc, table.clone());
    let v = |s: &str| table.parse_vector(s).expect("symbol");
    let pairs: Vec<(LatticeVector, LatticeVector)> =
        [("z1", "z2"), ("z1+l1", "z2-hbar"), ("2*z1", "z1+z2"), ("l1", "z1")].iter().map(|(a, b)| (v(a), v(b))).collect();
    let mut out = Vec::new();
    {
        let (ctx, pairs) = (ctx.clone(), pairs.clone());
        out.push(Check::new(
            "theta/pq_inverse",
            "Q(x,y)Q(y,x) = 1 and P(x,y) + Q(x,y)P(y,x) = 0",
            "inverse pair of P/Q matrices",
            params.clone(),
            move || {
                let mut bad = Vec::new();
                let one = crate::theta::Scalar::one(ctx.clone());
                for (x, y) in &pairs {
                    let qq = qfun(x, y, &ctx)?.mul(&qfun(y, x, &ctx)?)?;
                    let pq = pfun(x, y, &ctx)?.add(&qfun(x, y, &ctx)?.mul(&pfun(y, x, &ctx)?)?)?;
                    if !qq.equals(&one)? || !pq.is_zero() {
                        bad.push(format!("{} / {}", x.display(&ctx.symbols), y.display(&ctx.symbols)));
                    }
                }
                Ok(summarize(&bad, pairs.len()))
            },
        ));
    }
    {
        let ctx = ctx.clone();
        let (y, x) = (v("z1"), v("z2+l1"));
        out.push(Check::new(
            "theta/pq_normalization",
            "P(-hbar,y) = 1, Q(-hbar,y) = 0, P(x,0) = 1, Q(x,0) = 0",
            "normalization of P/Q",
            params.clone(),
            move || {
                let h = ctx.symbols.hbar_vector();
                let zero = ctx.symbols.zero();
                let one = crate::theta::Scalar::one(ctx.clone());
                let ok = [
                    pfun(&h.neg(), &y, &ctx)?.equals(&one)?,
                    qfun(&h.neg(), &y, &ctx)?.is_zero(),
                    pfun(&x, &zero, &ctx)?.equals(&one)?,
                    qfun(&x, &zero, &ctx)?.is_zero(),
                ];
                let n = ok.iter().filter(|b| **b).count();
                Ok((n == 4, format!("{n} of 4 hold")))
            },
        ));
    }
    {
        let ctx = ctx.clone();
        let mut rng = config.rng("theta/odd");
        let vectors: Vec<LatticeVector> = (0..50)
            .map(|_| loop {
                let c: Vec<i32> = (0..table.len()).map(|_| rng.gen_range(-3..=3)).collect();
                if c.iter().any(|&x| x != 0) {
                    break LatticeVector(c);
                }
            })
            .collect();
        out.push(Check::new(
            "theta/odd",
            "theta(-u) = -theta(u)",
            "oddness of the theta function",
            json!({ "trunc": trunc, "vectors": 50, "mode": "symbolic" }),
            move || {
                let mut bad = Vec::new();
                for u in &vectors {
                    if !theta(&u.neg(), &ctx).equals(&theta(u, &ctx).neg())? {
                        bad.push(u.display(&ctx.symbols).to_string());
                    }
                }
                Ok(summarize(&bad, vectors.len()))
            },
        ));
    }
    out
}

fn twisted_checks(config: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let kinds: Vec<DatumKind> = match config.datum {
        Some(k) => vec![k],
        None => vec![DatumKind::A(2), DatumKind::B2],
    };
    for k in kinds.clone() {
        let c = config.clone();
        out.push(Check::new(
            format!("twisted/braid/{k}"),
            "braid relations for T_i and their dual operators",
            "elliptic Demazure-Lusztig operators satisfy the braid relations",
            eval_params(config, 5),
            move || {
                let g = group(k)?;
                let ver = c.verifier(g.datum().symbols(), 5, &format!("twisted/braid/{k}"));
                let d = g.datum();
                let mut bad = Vec::new();
                let mut total = 0;
                for i in 1..=d.rank() {
                    for j in i + 1..=d.rank() {
                        let m = match d.cartan[i - 1][j - 1] * d.cartan[j - 1][i - 1] {
                            0 => 2,
                            1 => 3,
                            2 => 4,
                            _ => 6,
                        };
                        let w1: Vec<usize> = (0..m).map(|t| if t % 2 == 0 { i } else { j }).collect();
                        let w2: Vec<usize> = (0..m).map(|t| if t % 2 == 0 { j } else { i }).collect();
                        for dual in [false, true] {
                            total += 1;
                            if !t_word(&g, &w1, dual)?.equals(&t_word(&g, &w2, dual)?, &ver)? {
                                bad.push(format!("{w1:?} dual={dual}"));
                            }
                        }
                    }
                }
                Ok(summarize(&bad, total))
            },
        ));
    }
    let kinds = match config.datum {
        Some(k) => vec![k],
        None => vec![DatumKind::GL(3), DatumKind::B2],
    };
    for k in kinds {
        let c = config.clone();
        out.push(Check::new(
            format!("twisted/ab_identity/{k}"),
            "sum_v a_{u,v} b_{v,w} = delta_{u,w}",
            "the T-expansion of delta_u inverts the delta-expansion of T_u",
            eval_params(config, 5),
            move || {
                let g = group(k)?;
                let ver = c.verifier(g.datum().symbols(), 5, &format!("twisted/ab_identity/{k}"));
                let a = expand_a(&g)?;
                let b = invert_to_b(&a)?;
                let prod = a.matmul(&b);
                let mut bad = Vec::new();
                for u in g.elements() {
                    for w in g.elements() {
                        let want = if u == w { ThetaExpr::one() } else { ThetaExpr::zero() };
                        if !ver.equal(prod.get(u, w), &want)? {
                            bad.push(format!("({}, {})", g.label(u), g.label(w)));
                        }
                    }
                }
                Ok(summarize(&bad, g.order() * g.order()))
            },
        ));
    }
    out
}

/// `word(u)` with `s_i s_i` spliced in after the first letter.
fn non_reduced(word: &[usize]) -> Vec<usize> {
    let i = word.first().copied().unwrap_or(1);
    let mut v = vec![i];
    let j = if i == 1 { 2 } else { i - 1 };
    v.extend([j, j]);
    v.extend(word.iter().skip(1));
    if word.is_empty() {
        vec![1, 1]
    } else {
        v
    }
}

/// Subword sum, left-recursion table and R-matrix product agree at `(u, w)`, for
/// the canonical word of `u` and a non-reduced one.
fn billey_pair(g: &Arc<WeylGroup>, tables: &ClassTables, ver: &Verifier, u: Elem, w: Elem) -> Result<Vec<String>> {
    let b = tables.b()?.get(u, w);
    let mut bad = Vec::new();
    let reduced = g.word(u).clone();
    for word in [reduced.clone(), non_reduced(&reduced)] {
        debug_assert_eq!(g.from_word(&word)?, u);
        let s = billey(g, &word, w)?.total;
        let r = rmatrix_product(g, &word)?;
        if !ver.equal(&s, b)? || !ver.equal(r.coeff(w), b)? {
            bad.push(format!("u={} w={} word={word:?}", g.label(u), g.label(w)));
        }
    }
    Ok(bad)
}

fn billey_checks(config: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let c = config.clone();
    let k = config.datum.unwrap_or(DatumKind::GL(3));
    out.push(Check::new(
        format!("billey/all_pairs/{k}"),
        "subword sum = recursion table = R-matrix coefficient, reduced and non-reduced words",
        "Billey-type formula and its generating function",
        eval_params(config, 5),
        move || {
            let g = group(k)?;
            let ver = c.verifier(g.datum().symbols(), 5, "billey/all_pairs");
            let tables = ClassTables::new(&g);
            let mut bad = Vec::new();
            for u in g.elements() {
                for w in g.elements() {
                    bad.extend(billey_pair(&g, &tables, &ver, u, w)?);
                }
            }
            Ok(summarize(&bad, 2 * g.order() * g.order()))
        },
    ));
    if config.datum.is_none() {
        let c = config.clone();
        let mut rng = config.rng("billey/random_s4");
        let picks: Vec<(usize, usize)> = (0..5).map(|_| (rng.gen_range(0..24), rng.gen_range(0..24))).collect();
        out.push(Check::new(
            "billey/random_pairs/GL4",
            "subword sum = recursion table = R-matrix coefficient on random pairs",
            "Billey-type formula and its generating function",
            json!({ "trunc": config.trunc_or(5), "mode": config.mode, "points": config.points, "pairs": 5 }),
            move || {
                let g = group(DatumKind::GL(4))?;
                let ver = c.verifier(g.datum().symbols(), 5, "billey/random_pairs");
                let tables = ClassTables::new(&g);
                let els = g.elements_by_length();
                let mut bad = Vec::new();
                let mut labels = Vec::new();
                for &(a, b) in &picks {
                    let (u, w) = (els[a], els[b]);
                    labels.push(format!("({}, {})", g.label(u), g.label(w)));
                    bad.extend(billey_pair(&g, &tables, &ver, u, w)?);
                }
                let (ok, d) = summarize(&bad, 10);
                Ok((ok, format!("{d}; pairs {}", labels.join(" "))))
            },
        ));
    }
    out
}

fn ybe_checks(config: &RunConfig) -> Vec<Check> {
    let kinds = match config.datum {
        Some(k) => vec![k],
        None => vec![DatumKind::A(1), DatumKind::A(2), DatumKind::B2, DatumKind::G2],
    };
    kinds
        .into_iter()
        .map(|k| {
            let c = config.clone();
            Check::new(
                format!("ybe/{k}"),
                "unitarity and Yang-Baxter identities of the dynamical R-matrix",
                "unitarity and the Yang-Baxter equation",
                eval_params(config, 4),
                move || {
                    let g = group(k)?;
                    let ver = c.verifier(g.datum().symbols(), 4, &format!("ybe/{k}"));
                    let checks = verify_yang_baxter(&g, &ver)?;
                    let bad: Vec<String> = checks.iter().filter(|x| !x.passed).map(|x| x.identity.clone()).collect();
                    let (ok, _) = summarize(&bad, checks.len());
                    let names: Vec<&str> = checks.iter().map(|x| x.identity.as_str()).collect();
                    Ok((ok, names.join("; ")))
                },
            )
        })
        .collect()
}

fn mirror_checks(config: &RunConfig) -> Vec<Check> {
    let k = config.datum.unwrap_or(DatumKind::GL(3));
    let c1 = config.clone();
    let c2 = config.clone();
    vec![
        Check::new(
            format!("mirror/delta_matrix/{k}"),
            "sum_w b_{u,w} b^d_{w^-1, v^-1} = delta_{u,v}",
            "3D mirror symmetry of elliptic classes",
            eval_params(config, 5),
            move || {
                let g = group(k)?;
                let ver = c1.verifier(g.datum().symbols(), 5, "mirror/delta_matrix");
                let t = ClassTables::new(&g);
                let ok = is_identity_table(&mirror_matrix(t.b()?, t.b_dual()?), &ver)?;
                Ok((ok, format!("{} x {} matrix", g.order(), g.order())))
            },
        ),
        Check::new(
            format!("mirror/involution/{k}"),
            "sub-sub-wiring diagrams cancel in pairs, leaving the single fixed diagram",
            "sign-reversing involution for 3D mirror symmetry",
            eval_params(config, 5),
            move || {
                let g = group(k)?;
                let ver = c2.verifier(g.datum().symbols(), 5, "mirror/involution");
                let mut ok = true;
                let mut parts = Vec::new();
                for u in g.elements_by_length() {
                    let r = sub_sub_wiring(&g, u, &ver)?;
                    ok &= r.pairs_cancel && r.fixed_weight_one && r.sums_match;
                    parts.push(format!("{}: {} diagrams, {} pairs", r.u, r.diagrams, r.cancelling_pairs));
                }
                Ok((ok, parts.join("; ")))
            },
        ),
    ]
}

fn parabolic_setups(config: &RunConfig) -> Result<Vec<(DatumKind, Vec<usize>)>> {
    Ok(match (config.datum, &config.parabolic) {
        (Some(DatumKind::GL(n)), Some(comp)) => {
            let p = Parabolic::from_composition(group(DatumKind::GL(n))?, comp)?;
            vec![(DatumKind::GL(n), p.sigma)]
        }
        (None, None) => vec![(DatumKind::GL(3), vec![1]), (DatumKind::GL(4), vec![1, 3])],
        _ => return Err(Error::InvalidArgument("parabolic checks need --type A --rank n --parabolic blocks".into())),
    })
}

fn parabolic_checks(config: &RunConfig) -> Result<Vec<Check>> {
    Ok(parabolic_setups(config)?
        .into_iter()
        .map(|(k, sigma)| {
            let c = config.clone();
            let mut params = eval_params(config, 5);
            params["sigma"] = json!(sigma);
            Check::new(
                format!("parabolic/{k}/{sigma:?}"),
                "[b_{u,w}]_P vanishes off W^P, is constant on cosets, and equals the restricted subword sum",
                "parabolic Billey formula",
                params,
                move || {
                    let g = group(k)?;
                    let ver = c.verifier(g.datum().symbols(), 5, &format!("parabolic/{k}"));
                    let p = Parabolic::new(g.clone(), sigma)?;
                    let r = verify_parabolic(&p, &ClassTables::new(&g), &ver)?;
                    let ok = r.vanishing_off_wp && r.coset_constant && r.routes_agree && r.filter_matches_unfiltered;
                    Ok((ok, format!("{r:?}")))
                },
            )
        })
        .collect())
}

fn longest(n: usize) -> Perm {
    (1..=n).rev().collect()
}

fn all_perms(n: usize) -> Vec<Perm> {
    let g = group(DatumKind::GL(n)).expect("small group");
    g.elements_by_length().into_iter().map(|w| g.one_line(w).expect("type A")).collect()
}

fn atom(t: &SymbolTable, f: PQ, x: &str, y: &str) -> Atom {
    Atom { f, x: t.parse_vector(x).expect("symbol"), y: t.parse_vector(y).expect("symbol") }
}

fn gpd_checks(_config: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for n in [3usize, 4] {
        out.push(Check::new(
            format!("gpd/longest/{n}"),
            "GPD(w0) is a single pipe dream with weight prod Q(l_i - l_{n+1-j}, y_j - x_i) prod P(l_i, y_{n+1-i} - x_i)",
            "initial class for the longest element",
            json!({ "n": n }),
            move || {
                let pds = enumerate_grid(n, &longest(n))?;
                if pds.len() != 1 {
                    return Ok((false, format!("{} pipe dreams", pds.len())));
                }
                let t = poly_symbols(n);
                let h = t.hbar_vector();
                let sym = |s: String| t.parse_vector(&s).expect("symbol");
                let mut want = ThetaExpr::one();
                for i in 1..=n {
                    for j in 1..=n - i {
                        want = want.mul(&ThetaExpr::q(&sym(format!("l{i}-l{}", n + 1 - j)), &sym(format!("y{j}-x{i}")), &h)?);
                    }
                    want = want.mul(&ThetaExpr::p(&sym(format!("l{i}")), &sym(format!("y{}-x{i}", n + 1 - i)), &h)?);
                }
                let ok = pds[0].weight().to_theta()? == want;
                Ok((ok, "1 pipe dream".into()))
            },
        ));
    }
    out.push(Check::new(
        "gpd/grid_vs_subwords/3",
        "tile search and filtered subwords give the same pipe dreams and weight multisets",
        "pipe dreams are the sub-wiring diagrams of the initial word",
        json!({ "n": 3 }),
        || {
            let n = 3;
            let u = u0_data(n)?;
            let mut bad = Vec::new();
            let mut counts = Vec::new();
            for w in all_perms(n) {
                let mut grid = enumerate_grid(n, &w)?;
                grid.sort();
                let subs = filtered_subwords(n, &w)?;
                let mut mapped = Vec::new();
                let mut wa = Vec::new();
                for sw in &subs {
                    mapped.push(GenericPipeDream::from_subwiring(&u, sw)?);
                    wa.push(subwiring_poly_weight(n, sw)?.display(&poly_symbols(n)).to_string());
                }
                mapped.sort();
                let mut wb: Vec<String> =
                    grid.iter().map(|p| Ok(p.weight().to_theta()?.display(&poly_symbols(n)).to_string())).collect::<Result<_>>()?;
                wa.sort();
                wb.sort();
                if grid != mapped || wa != wb {
                    bad.push(format!("{w:?}"));
                }
                counts.push(format!("{}:{}", w.iter().map(|x| x.to_string()).collect::<String>(), grid.len()));
            }
            let (ok, d) = summarize(&bad, 6);
            Ok((ok, format!("{d}; counts {}", counts.join(" "))))
        },
    ));
    out.push(Check::new(
        "gpd/example_3x3",
        "tiling BXJ/JIO/HJO, its levels and its nine cell weights",
        "worked 3x3 pipe dream example",
        json!({ "n": 3, "tiles": ["BXJ", "JIO", "HJO"] }),
        || {
            let pd = GenericPipeDream::parse_rows(&["BXJ", "JIO", "HJO"])?;
            let t = poly_symbols(3);
            let mut notes = Vec::new();
            if pd.permutation() != vec![1, 3, 2] {
                notes.push(format!("exits {:?}", pd.permutation()));
            }
            if !enumerate_grid(3, &vec![1, 3, 2])?.contains(&pd) {
                notes.push("not found by the tile search".into());
            }
            let levels = vec![vec![None, None, Some(0)], vec![Some(0), Some(0), None], vec![Some(0), Some(1), None]];
            if pd.levels != levels {
                notes.push(format!("levels {:?}", pd.levels));
            }
            use PQ::*;
            let want = vec![
                vec![Some(atom(&t, P, "l1-l2", "y1-x1")), Some(atom(&t, Q, "l2-l3", "y2-x1")), Some(atom(&t, P, "l2", "y3-x1"))],
                vec![Some(atom(&t, P, "l2", "y1-x2")), Some(atom(&t, Q, "-l3", "y2-x2")), None],
                vec![Some(atom(&t, Q, "l3", "y1-x3")), Some(atom(&t, P, "l3-hbar", "y2-x3")), None],
            ];
            if pd.cell_weights() != want {
                notes.push("cell weights differ".into());
            }
            Ok((notes.is_empty(), if notes.is_empty() { "9 cells match".into() } else { notes.join("; ") }))
        },
    ));
    out
}

fn poly_checks(config: &RunConfig) -> Vec<Check> {
    let c1 = config.clone();
    let c2 = config.clone();
    vec![
        Check::new(
            "poly/localization/3",
            "Loc(E_w)(u) = E_w(u) for all u, w in S_3",
            "pipe-dream sums represent the elliptic classes",
            eval_params(config, 5),
            move || {
                let g = group(DatumKind::GL(3))?;
                let ver = c1.verifier(g.datum().symbols(), 5, "poly/localization");
                let tables = ClassTables::new(&g);
                let mut bad = Vec::new();
                for w in g.elements() {
                    let e = polynomial_rep(3, &g.one_line(w).expect("type A"))?;
                    let class = elliptic_class(&tables, w)?;
                    for u in g.elements() {
                        if !ver.equal(&loc(&e, &g.one_line(u).expect("type A"))?, class.at(u))? {
                            bad.push(format!("w={} u={}", g.label(w), g.label(u)));
                        }
                    }
                }
                Ok(summarize(&bad, 36))
            },
        ),
        Check::new(
            "poly/recursion/3",
            "left recursion for the polynomial representatives on every simple step",
            "recursion for polynomial representatives",
            eval_params(config, 5),
            move || {
                let ver = c2.verifier(&poly_symbols(3), 5, "poly/recursion");
                let mut bad = Vec::new();
                let mut total = 0;
                for w in all_perms(3) {
                    for a in 1..3 {
                        total += 1;
                        if !poly_recursion_check(3, &w, a, &ver)?.passed {
                            bad.push(format!("w={w:?} alpha={a}"));
                        }
                    }
                }
                Ok(summarize(&bad, total))
            },
        ),
    ]
}

fn klimit_checks(config: &RunConfig) -> Result<Vec<Check>> {
    let slope = config.slope()?;
    let mut out = Vec::new();
    out.push(Check::new(
        "klimit/theta_ratio",
        "lim theta(u + l)/theta(l) = e((floor(-s) + 1/2) u) under l = s tau",
        "limit of theta ratios",
        json!({ "slopes": ["1/2", "3/2"] }),
        || {
            let t = SymbolTable::numbered(1, 1);
            let (z, l) = (t.basis(t.index_of("z1")?), t.basis(t.index_of("l1")?));
            let ratio = ThetaExpr::theta(&z.add(&l)).div(&ThetaExpr::theta(&l))?;
            let mut bad = Vec::new();
            for (s, k) in [(rat(1, 2), -1), (rat(3, 2), -3)] {
                let tau = TauSubstitution::new(&t, s.clone(), vec![(t.index_of("l1")?, t.zero(), 1)])?;
                if limit(&ratio, &tau)? != KScalar::exp(&z, k) {
                    bad.push(format!("s={s}"));
                }
            }
            Ok(summarize(&bad, 2))
        },
    ));
    out.push(Check::new(
        "klimit/pq_limits",
        "limits of P(+-s tau, v) and Q(+-s tau, v) match their closed forms",
        "limits of P and Q",
        json!({ "slopes": ["1/2", "1/5", "4/5"] }),
        || {
            let t = SymbolTable::numbered(1, 1);
            let (z, l, h) = (t.basis(t.index_of("z1")?), t.basis(t.index_of("l1")?), t.hbar_vector());
            let mut bad = Vec::new();
            for s in [rat(1, 2), rat(1, 5), rat(4, 5)] {
                let tau = TauSubstitution::new(&t, s.clone(), vec![(t.index_of("l1")?, t.zero(), 1)])?;
                for positive in [true, false] {
                    let x = if positive { l.clone() } else { l.neg() };
                    for (f, e) in [(PQLimit::P, ThetaExpr::p(&x, &z, &h)?), (PQLimit::Q, ThetaExpr::q(&x, &z, &h)?)] {
                        if limit(&e, &tau)? != limit_pq(f, positive, &z, &h) {
                            bad.push(format!("{f:?} positive={positive} s={s}"));
                        }
                    }
                }
            }
            Ok(summarize(&bad, 12))
        },
    ));
    let k = config.datum.unwrap_or(DatumKind::GL(3));
    let s2 = slope.clone();
    out.push(Check::new(
        format!("klimit/classes/{k}"),
        "K-theory recursions, triangularity, agreement with the closed-form route, slope independence",
        "K-theory limit of elliptic classes",
        json!({ "slope": slope.as_ref().map(|s| s.to_string()) }),
        move || {
            let g = group(k)?;
            let tables = ClassTables::new(&g);
            let kt = k_table(&tables, None)?;
            let mut notes = Vec::new();
            let rec = k_recursion_check(&kt)?;
            let failed = rec.iter().filter(|r| !r.passed).count();
            if failed > 0 || !rec.iter().any(|r| r.ascending) || !rec.iter().any(|r| !r.ascending) {
                notes.push(format!("{failed} of {} recursion instances failed", rec.len()));
            }
            if !kt.triangularity_violations().is_empty() {
                notes.push("not triangular".into());
            }
            if !kt.same_as(&k_table_billey(&g, None)?) {
                notes.push("closed-form route differs".into());
            }
            let default = TauSubstitution::default_slope(g.datum());
            let other = match s2 {
                Some(s) => s,
                None => rat(1, g.datum().max_coroot_height().max(1) as i64 + 1),
            };
            if !kt.same_as(&k_table(&tables, Some(other.clone()))?) {
                notes.push(format!("slopes {default} and {other} differ"));
            }
            let ok = notes.is_empty();
            Ok((ok, if ok { format!("{} recursion instances; slopes {default}, {other}", rec.len()) } else { notes.join("; ") }))
        },
    ));
    for same_block in [false, true] {
        let name = if same_block { "klimit/weight_table/same_block" } else { "klimit/weight_table/other_blocks" };
        out.push(Check::new(
            name,
            if same_block {
                "tabulated limiting weights for two strings of one block (crossing 1, bump 0)"
            } else {
                "tabulated limiting weights for strings of different blocks and their y = 0 values"
            },
            "type A limiting weight table",
            json!({ "n": [2, 3] }),
            move || {
                let mut bad = Vec::new();
                let mut total = 0;
                for n in [2, 3] {
                    for r in limit_weight_table_check(n)?.into_iter().filter(|r| (r.c == r.d) == same_block) {
                        total += 1;
                        if !(r.matches_table && r.table_degenerates && r.limit_degenerates) {
                            let kind = if r.kind == TileKind::Crossing { "crossing" } else { "bump" };
                            bad.push(format!("n={n} {kind} c={} d={}: limit {} vs table {}", r.c, r.d, r.limit, r.table));
                        }
                    }
                }
                Ok(summarize(&bad, total))
            },
        ));
    }
    Ok(out)
}

fn duality_checks(config: &RunConfig) -> Result<Vec<Check>> {
    let k = config.datum.unwrap_or(DatumKind::GL(3));
    let c1 = config.clone();
    let mut out = vec![Check::new(
        format!("duality/full/{k}"),
        "<E'(X_u), E_w> = delta_{u,w} and the rescaled diagonal product formula",
        "dual basis theorem",
        eval_params(config, 5),
        move || {
            let g = group(k)?;
            let ver = c1.verifier(g.datum().symbols(), 5, "duality/full");
            let r = dual_basis_check(&ClassTables::new(&g), &ver)?;
            Ok((r.dual_basis && r.rescaled_diagonal, format!("{} x {} pairs; failures {:?}", r.size, r.size, r.failures)))
        },
    )];
    let setups = match (config.datum, &config.parabolic) {
        (_, Some(_)) => parabolic_setups(config)?,
        (None, None) => vec![(DatumKind::GL(3), vec![1])],
        _ => vec![],
    };
    for (k, sigma) in setups {
        let c = config.clone();
        let mut params = eval_params(config, 5);
        params["sigma"] = json!(sigma);
        out.push(Check::new(
            format!("duality/parabolic/{k}/{sigma:?}"),
            "<E'(X^P_u), E^P_w> = delta_{u,w} on W^P",
            "parabolic dual basis",
            params,
            move || {
                let g = group(k)?;
                let ver = c.verifier(g.datum().symbols(), 5, "duality/parabolic");
                let p = Parabolic::new(g.clone(), sigma)?;
                let r = parabolic_dual_basis_check(&p, &ver)?;
                Ok((r.dual_basis, format!("{} x {} pairs; failures {:?}", r.size, r.size, r.failures)))
            },
        ));
    }
    Ok(out)
}
