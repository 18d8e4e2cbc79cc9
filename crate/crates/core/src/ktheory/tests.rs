use std::sync::Arc;

use super::*;
use crate::roots::{DatumKind, Parabolic, RootDatum, WeylGroup};
use crate::schubert::ClassTables;
use crate::theta::{int, rat, LatticeVector, SymbolTable, ThetaExpr};
use crate::Error;

fn rank_one() -> (Arc<SymbolTable>, LatticeVector, LatticeVector, LatticeVector) {
    let t = SymbolTable::numbered(1, 1);
    let (z, l) = (t.basis(t.index_of("z1").unwrap()), t.basis(t.index_of("l1").unwrap()));
    let h = t.hbar_vector();
    (t, z, l, h)
}

fn tau(t: &Arc<SymbolTable>, s: crate::theta::Rational) -> TauSubstitution {
    TauSubstitution::new(t, s, vec![(t.index_of("l1").unwrap(), t.zero(), 1)]).unwrap()
}

fn group(k: DatumKind) -> Arc<WeylGroup> {
    WeylGroup::new(RootDatum::new(k).unwrap()).unwrap()
}

#[test]
fn theta_ratio_limits() {
    let (t, z, l, _) = rank_one();
    let ratio = ThetaExpr::theta(&z.add(&l)).div(&ThetaExpr::theta(&l)).unwrap();
    // e((⌊-s⌋ + 1/2) u) in the doubled encoding has exponent 2⌊-s⌋ + 1.
    for (s, k) in [(rat(1, 2), -1), (rat(3, 2), -3), (rat(1, 3), -1), (rat(7, 3), -5)] {
        let got = limit(&ratio, &tau(&t, s.clone())).unwrap();
        assert_eq!(got, KScalar::exp(&z, k), "s = {s}");
    }
    let th = limit(&ThetaExpr::theta(&z), &tau(&t, rat(1, 2))).unwrap();
    assert_eq!(th, KScalar::exp(&z, 1).sub(&KScalar::exp(&z, -1)));
}

#[test]
fn single_theta_has_negative_order() {
    let (t, _, l, _) = rank_one();
    let p = tau_substitute(&ThetaExpr::theta(&l), &tau(&t, rat(1, 2))).unwrap();
    assert_eq!(p.order_bound(), Some(rat(-1, 4)));
    assert!(matches!(limit_q0(&p), Err(Error::LimitDoesNotExist(_))));
}

#[test]
fn slope_bounds() {
    let (t, ..) = rank_one();
    let l1 = t.index_of("l1").unwrap();
    assert!(matches!(TauSubstitution::new(&t, int(0), vec![(l1, t.zero(), 1)]), Err(Error::SlopeOutOfRange(_))));
    let d = RootDatum::new(DatumKind::GL(3)).unwrap();
    assert_eq!(TauSubstitution::default_slope(&d), rat(1, 4));
    assert!(matches!(TauSubstitution::for_datum(&d, Some(rat(1, 2))), Err(Error::SlopeOutOfRange(_))));
    assert!(TauSubstitution::for_datum(&d, Some(rat(1, 3))).is_ok());
}

#[test]
fn closed_form_pq_limits() {
    let (t, z, l, h) = rank_one();
    for s in [rat(1, 2), rat(1, 5), rat(4, 5)] {
        let ts = tau(&t, s);
        for positive in [true, false] {
            let x = if positive { l.clone() } else { l.neg() };
            let p = limit(&ThetaExpr::p(&x, &z, &h).unwrap(), &ts).unwrap();
            let q = limit(&ThetaExpr::q(&x, &z, &h).unwrap(), &ts).unwrap();
            assert_eq!(p, limit_pq(PQLimit::P, positive, &z, &h));
            assert_eq!(q, limit_pq(PQLimit::Q, positive, &z, &h));
        }
    }
    // P(sτ, y) → (1 - e(-ħ))/(1 - e(-y)e(-ħ)), written out.
    let one = KScalar::one();
    let (a, b) = (KScalar::exp(&z, -2), KScalar::exp(&h, -2));
    let want = one.sub(&b).div(&one.sub(&a.mul(&b))).unwrap();
    assert_eq!(limit_pq(PQLimit::P, true, &z, &h), want);
    let want = one.sub(&a).div(&one.sub(&a.mul(&b))).unwrap();
    assert_eq!(limit_pq(PQLimit::Q, false, &z, &h), want);
}

#[test]
fn kscalar_arithmetic() {
    let (_, z, _, h) = rank_one();
    let one = KScalar::one();
    let a = one.sub(&KScalar::exp(&z, -2)).inv().unwrap();
    let b = one.add(&KScalar::exp(&h, 2)).inv().unwrap();
    let s = a.add(&b);
    assert_eq!(s.sub(&b), a);
    assert_eq!(s.mul(&s.inv().unwrap()), one);
    // 1/(1 - x^{-1}) = -x/(1 - x)
    let x = KScalar::exp(&z, 2);
    assert_eq!(a, x.neg().div(&one.sub(&x)).unwrap());
    let y = KScalar::y(&h);
    let f = one.add(&y).div(&one.add(&y.mul(&KScalar::exp(&z, -2)))).unwrap();
    assert_eq!(f.at_y_zero(2).unwrap(), one);
    assert!(y.inv().unwrap().at_y_zero(2).is_err());
}

#[test]
fn rank_one_classes() {
    let g = group(DatumKind::GL(2));
    let tables = ClassTables::new(&g);
    let s1 = g.simple(1);
    let col = k_class(&tables, s1, None).unwrap();
    assert!(col[&g.identity()].is_zero());
    let d = g.datum();
    let h = d.hbar();
    let ea = KScalar::exp(&d.z(&d.simple_roots[0]), -2);
    let eh = KScalar::exp(&h, -2);
    let one = KScalar::one();
    let want = KScalar::y(&h).neg().inv().unwrap().mul(&one.sub(&ea).mul(&eh)).div(&one.sub(&ea.mul(&eh))).unwrap();
    assert_eq!(col[&s1], want);
}

#[test]
fn s3_routes_recursions_and_slopes() {
    let g = group(DatumKind::GL(3));
    let tables = ClassTables::new(&g);
    let kt = k_table(&tables, None).unwrap();
    assert!(kt.same_as(&k_table_billey(&g, None).unwrap()));
    assert!(kt.triangularity_violations().is_empty());
    for u in g.elements() {
        assert!(!kt.get(u, u).is_zero());
    }
    let rec = k_recursion_check(&kt).unwrap();
    assert_eq!(rec.len(), 2 * 6 * 6);
    assert!(rec.iter().any(|r| r.ascending) && rec.iter().any(|r| !r.ascending));
    let bad: Vec<_> = rec.iter().filter(|r| !r.passed).collect();
    assert!(bad.is_empty(), "{bad:?}");
    let other = k_table(&tables, Some(rat(1, 3))).unwrap();
    assert!(kt.same_as(&other));
}

#[test]
fn simply_connected_a2_matches_closed_forms() {
    let g = group(DatumKind::A(2));
    let tables = ClassTables::new(&g);
    let kt = k_table(&tables, None).unwrap();
    assert!(kt.same_as(&k_table_billey(&g, None).unwrap()));
    assert!(k_recursion_check(&kt).unwrap().iter().all(|r| r.passed));
}

#[test]
fn s4_samples_have_limits() {
    let g = group(DatumKind::GL(4));
    let tables = ClassTables::new(&g);
    for w in ["1243", "2143", "1432", "3412", "4321"] {
        let w = g.from_one_line(w).unwrap();
        let col = k_class(&tables, w, None).unwrap();
        for (u, v) in &col {
            assert_eq!(v.is_zero(), !g.bruhat_leq(w, *u), "{}", g.label(*u));
        }
    }
}

#[test]
fn parabolic_gl3() {
    let g = group(DatumKind::GL(3));
    let tables = ClassTables::new(&g);
    for sigma in [vec![1], vec![2]] {
        let p = Parabolic::new(g.clone(), sigma).unwrap();
        let r = k_parabolic_check(&p, &tables, None).unwrap();
        assert!(r.routes_agree && r.coset_constant && r.vanishing_off_wp, "{r:?}");
    }
}

#[test]
fn weight_table_off_diagonal_entries() {
    for n in 2..=3 {
        let rows = limit_weight_table_check(n).unwrap();
        assert_eq!(rows.len(), 2 * (n * n - 1));
        for r in rows.iter().filter(|r| r.c != r.d) {
            assert!(r.matches_table && r.table_degenerates && r.limit_degenerates, "{r:?}");
        }
    }
}

#[test]
fn same_block_weights_are_constant() {
    // Q(-ħ, v) has the factor θ(0) upstairs; P(-ħ, v) = 1 by oddness of θ.
    let rows = limit_weight_table_check(2).unwrap();
    let cross = rows.iter().find(|r| r.c == r.d && r.kind == TileKind::Crossing).unwrap();
    let bump = rows.iter().find(|r| r.c == r.d && r.kind == TileKind::Bump).unwrap();
    assert_eq!(cross.limit, "0");
    assert_eq!(bump.limit, "1");
    assert!(cross.table_degenerates && bump.table_degenerates);
}
