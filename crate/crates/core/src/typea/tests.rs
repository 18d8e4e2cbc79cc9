use super::pipes::wiring_to_poly;
use super::*;
use crate::roots::{DatumKind, Parabolic, RootDatum, WeylGroup};
use crate::schubert::{billey_parabolic, elliptic_class, parabolic_class, ClassTables};
use crate::theta::{LatticeVector, Mode, SeriesContext, SymbolTable, ThetaExpr, Verifier};

fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Perm>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !cur.contains(&v) {
                cur.push(v);
                rec(n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

fn v(t: &SymbolTable, s: &str) -> LatticeVector {
    t.parse_vector(s).unwrap()
}

fn p(t: &SymbolTable, x: &str, y: &str) -> ThetaExpr {
    ThetaExpr::p(&v(t, x), &v(t, y), &t.hbar_vector()).unwrap()
}

fn q(t: &SymbolTable, x: &str, y: &str) -> ThetaExpr {
    ThetaExpr::q(&v(t, x), &v(t, y), &t.hbar_vector()).unwrap()
}

fn poly_verifier(n: usize) -> Verifier {
    Verifier::new(SeriesContext::new(5, poly_symbols(n)), Mode::Eval, 2, 11)
}

#[test]
fn u0_word_and_cells() {
    let u = u0_data(3).unwrap();
    assert_eq!(u.word.len(), 9);
    assert_eq!(u.word, vec![3, 4, 5, 2, 3, 4, 1, 2, 3]);
    let sw = SubWiring::new(6, u.word.clone(), vec![true; 9]).unwrap();
    assert_eq!(sw.permutation(), vec![4, 5, 6, 1, 2, 3]);
    let first = u.positions[0][0];
    let cr = sw.crossings()[first];
    assert_eq!((cr.a, cr.b), (1, 4));
    // every position is a distinct cell
    let mut cells = u.cells.clone();
    cells.sort();
    cells.dedup();
    assert_eq!(cells.len(), 9);
}

#[test]
fn second_argument_is_y_j_minus_x_i() {
    let n = 3;
    let u = u0_data(n).unwrap();
    let t = SymbolTable::numbered(2 * n, 2 * n);
    let m = wiring_to_poly(n);
    let pt = poly_symbols(n);
    let sw = SubWiring::new(2 * n, u.word.clone(), vec![false; 9]).unwrap();
    for (pos, cr) in sw.crossings().into_iter().enumerate() {
        let (i, j) = u.cells[pos];
        let z = t.parse_vector(&format!("z{}-z{}", cr.a, cr.b)).unwrap();
        assert_eq!(m.apply(&z), v(&pt, &format!("y{j}-x{i}")));
    }
}

fn sorted(mut v: Vec<GenericPipeDream>) -> Vec<GenericPipeDream> {
    v.sort();
    v
}

fn check_equivalence(n: usize, w: &Perm) -> usize {
    let grid = sorted(enumerate_grid(n, w).unwrap());
    let subs = filtered_subwords(n, w).unwrap();
    let u = u0_data(n).unwrap();
    let mut mapped = Vec::new();
    for sw in &subs {
        let pd = GenericPipeDream::from_subwiring(&u, sw).unwrap();
        assert_eq!(pd.weight().to_theta().unwrap(), subwiring_poly_weight(n, sw).unwrap(), "{pd}");
        assert_eq!(pd.subset(&u), sw.subset);
        mapped.push(pd);
    }
    assert_eq!(grid, sorted(mapped), "w = {w:?}");
    grid.len()
}

#[test]
fn enumerations_agree_small() {
    for n in 1..=3 {
        for w in all_perms(n) {
            check_equivalence(n, &w);
        }
    }
}

#[test]
fn enumerations_agree_s4_samples() {
    for w in [vec![2, 4, 1, 3], vec![3, 1, 4, 2], vec![4, 2, 1, 3]] {
        assert!(check_equivalence(4, &w) > 0);
    }
}

#[test]
fn levels_consistent_up_to_four() {
    for w in all_perms(4) {
        let a = enumerate_subwords(4, &w).unwrap();
        let b = enumerate_grid(4, &w).unwrap();
        assert_eq!(a.len(), b.len());
    }
}

#[test]
fn identity_counts_from_both_oracles() {
    assert_eq!(check_equivalence(1, &vec![1]), 1);
    let e = polynomial_rep(1, &vec![1]).unwrap();
    let t = poly_symbols(1);
    assert_eq!(e.to_theta().unwrap(), p(&t, "l1", "y1-x1"));
    let n2 = check_equivalence(2, &vec![1, 2]);
    assert_eq!(n2, filtered_subwords(2, &vec![1, 2]).unwrap().len());
}

fn longest(n: usize) -> Perm {
    (1..=n).rev().collect()
}

#[test]
fn longest_element_has_one_pipe_dream() {
    for n in [3, 4] {
        let gpd = enumerate_grid(n, &longest(n)).unwrap();
        assert_eq!(gpd.len(), 1);
        let pd = &gpd[0];
        for i in 1..=n {
            for j in 1..=n {
                let want = if i + j < n + 1 {
                    Tile::X
                } else if i + j == n + 1 {
                    Tile::J
                } else {
                    Tile::O
                };
                assert_eq!(pd.tiles[i - 1][j - 1], want);
                if want == Tile::J {
                    assert_eq!(pd.levels[i - 1][j - 1], Some(0));
                }
            }
        }
        let t = poly_symbols(n);
        let mut want = ThetaExpr::one();
        for i in 1..=n {
            for j in 1..=n - i {
                want = want.mul(&q(&t, &format!("l{i}-l{}", n + 1 - j), &format!("y{j}-x{i}")));
            }
            want = want.mul(&p(&t, &format!("l{i}"), &format!("y{}-x{i}", n + 1 - i)));
        }
        assert_eq!(polynomial_rep(n, &longest(n)).unwrap().to_theta().unwrap(), want);
    }
    let four = enumerate_grid(4, &longest(4)).unwrap();
    assert_eq!(four[0].to_ascii(), "X  X  X  J0\nX  X  J0 O\nX  J0 O  O\nJ0 O  O  O\n");
}

#[test]
fn three_by_three_example() {
    let pd = GenericPipeDream::parse_rows(&["BXJ", "JIO", "HJO"]).unwrap();
    assert_eq!(pd.permutation(), vec![1, 3, 2]);
    assert_eq!(pd.levels[2][1], Some(1));
    assert_eq!(pd.levels[1][1], Some(0));
    assert!(enumerate_grid(3, &vec![1, 3, 2]).unwrap().contains(&pd));
    let t = poly_symbols(3);
    let want = [
        p(&t, "l1-l2", "y1-x1"),
        q(&t, "l2-l3", "y2-x1"),
        p(&t, "l2", "y3-x1"),
        p(&t, "l2", "y1-x2"),
        q(&t, "-l3", "y2-x2"),
        q(&t, "l3", "y1-x3"),
        p(&t, "l3-hbar", "y2-x3"),
    ]
    .iter()
    .fold(ThetaExpr::one(), |a, f| a.mul(f));
    assert_eq!(pd.weight().to_theta().unwrap(), want);
    assert_eq!(pd.to_latex(), r"\BPD{\M{1}\B\X\J[0]\\\M{2}\J[0]\I[0]\O\\\M{3}\H[0]\J[1]\O}");
}

#[test]
fn json_round_trips() {
    for pd in enumerate_grid(3, &vec![2, 3, 1]).unwrap() {
        let j = pd.to_json();
        assert_eq!(GenericPipeDream::from_json(&j).unwrap(), pd);
    }
    let e = polynomial_rep(3, &vec![2, 1, 3]).unwrap();
    let back = WeightExpr::from_json(&e.to_json()).unwrap();
    assert_eq!(back, e);
    assert!(e.to_latex().contains("\\lambda_{"));
}

fn gl(n: usize) -> (std::sync::Arc<WeylGroup>, Verifier) {
    let g = WeylGroup::new(RootDatum::new(DatumKind::GL(n)).unwrap()).unwrap();
    let ver = Verifier::new(SeriesContext::new(5, g.datum().symbols().clone()), Mode::Eval, 2, 5);
    (g, ver)
}

#[test]
fn localization_matches_elliptic_classes_s3() {
    let (g, ver) = gl(3);
    let tables = ClassTables::new(&g);
    for w in g.elements() {
        let wp = g.one_line(w).unwrap();
        let e = polynomial_rep(3, &wp).unwrap();
        let class = elliptic_class(&tables, w).unwrap();
        for u in g.elements() {
            let got = loc(&e, &g.one_line(u).unwrap()).unwrap();
            assert!(ver.equal(&got, class.at(u)).unwrap(), "w={} u={}", g.label(w), g.label(u));
        }
    }
    let e0 = polynomial_rep(3, &longest(3)).unwrap();
    for u in all_perms(3) {
        if u != longest(3) {
            assert!(loc(&e0, &u).unwrap().is_zero(), "{u:?}");
        }
    }
}

#[test]
fn polynomial_recursion() {
    for n in [2, 3] {
        let ver = poly_verifier(n);
        for w in all_perms(n) {
            for a in 1..n {
                let r = poly_recursion_check(n, &w, a, &ver).unwrap();
                assert!(r.passed, "w={w:?} alpha={a}");
            }
        }
    }
}

#[test]
fn any_reduced_word_of_u0() {
    // s2 s1 s3 s2 is another reduced word of u0 in S_4
    let g = WeylGroup::new(RootDatum::new(DatumKind::GL(4)).unwrap()).unwrap();
    let p4 = Parabolic::new(g.clone(), vec![3]).unwrap();
    let word = vec![2, 1, 3, 2];
    assert_eq!(g.from_word(&word).unwrap(), g.from_word(&u0_data(2).unwrap().word).unwrap());
    let ver = poly_verifier(2);
    for w in all_perms(2) {
        let mut full = w.clone();
        full.extend([3, 4]);
        let we = g.from_permutation(&full, 4).unwrap();
        let alt = billey_parabolic(&p4, &word, we).unwrap().total.map(&wiring_to_poly(2)).unwrap();
        let e = polynomial_rep(2, &w).unwrap().to_theta().unwrap();
        assert!(ver.equal(&alt, &e).unwrap(), "{w:?}");
    }
}

#[test]
fn parabolic_representatives_s3() {
    let (g, ver) = gl(3);
    for comp in [vec![2, 1], vec![1, 2]] {
        let par = Parabolic::from_composition(g.clone(), &comp).unwrap();
        for w in par.min_reps() {
            let class = parabolic_class(&par, w).unwrap();
            let (_, e) = polynomial_rep_parabolic(3, &comp, &g.one_line(w).unwrap()).unwrap();
            for u in g.elements() {
                let got = e.map(&loc_map(3, &g.one_line(u).unwrap()).unwrap()).unwrap();
                assert!(ver.equal(&got, class.at(u)).unwrap(), "{comp:?} w={} u={}", g.label(w), g.label(u));
            }
        }
    }
}

#[test]
fn weights_are_pure_products() {
    for w in all_perms(3) {
        let e = polynomial_rep(3, &w).unwrap();
        assert_eq!(e.terms.len(), enumerate_grid(3, &w).unwrap().len());
        assert!(e.terms.iter().all(|t| t.len() <= 9));
    }
}

#[test]
fn grid_bound() {
    assert!(matches!(enumerate_grid(7, &(1..=7).collect()), Err(crate::error::Error::BoundExceeded(_))));
}

#[test]
fn sub_sub_wiring_rank_one_and_s3() {
    let (g, ver) = gl(2);
    let r = crate::schubert::sub_sub_wiring(&g, g.simple(1), &ver).unwrap();
    assert_eq!((r.diagrams, r.cancelling_pairs), (3, 1));
    assert!(r.pairs_cancel && r.fixed_weight_one && r.sums_match);
    let (g, ver) = gl(3);
    for u in g.elements() {
        let r = crate::schubert::sub_sub_wiring(&g, u, &ver).unwrap();
        assert!(r.pairs_cancel && r.fixed_weight_one && r.sums_match, "{}", r.u);
    }
}
