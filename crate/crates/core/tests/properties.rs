use std::sync::{Arc, OnceLock};

use elliptic_schubert::duality::{pair, PairingContext};
use elliptic_schubert::harness::docs::{BilleyDoc, ClassTableDoc, PipeDreamsDoc, PolyDoc};
use elliptic_schubert::harness::{billey_terms, localize, pipe_dreams, poly, verify, RunConfig, Suite};
use elliptic_schubert::roots::{DatumKind, Elem, RootDatum, WeylGroup};
use elliptic_schubert::schubert::{elliptic_class, ClassTables};
use elliptic_schubert::theta::{
    int, theta, LatticeVector, Mode, QSeries, SeriesContext, SymScalar, SymbolTable, ThetaExpr, Verifier,
};
use elliptic_schubert::twisted::TwistedElement;
use proptest::prelude::*;

fn gl3() -> &'static Arc<WeylGroup> {
    static G: OnceLock<Arc<WeylGroup>> = OnceLock::new();
    G.get_or_init(|| WeylGroup::new(RootDatum::new(DatumKind::GL(3)).unwrap()).unwrap())
}

fn elem(i: usize) -> Elem {
    gl3().elements_by_length()[i % 6]
}

fn vector(len: usize) -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-2i32..=2, len)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
        .prop_map(LatticeVector)
}

/// `c θ(a)/θ(b) δ_w δ^d_v` on `GL_3`.
fn twisted_term() -> impl Strategy<Value = (i32, LatticeVector, LatticeVector, usize, usize)> {
    let n = gl3().datum().symbols().len();
    (1i32..=3, vector(n), vector(n), 0usize..6, 0usize..6)
}

fn build((c, a, b, w, v): (i32, LatticeVector, LatticeVector, usize, usize)) -> TwistedElement {
    let coeff = ThetaExpr::constant(int(c as i64)).mul(&ThetaExpr::theta(&a)).div(&ThetaExpr::theta(&b)).unwrap();
    TwistedElement::basis(gl3(), coeff, elem(w), elem(v))
}

fn cross_difference(a: &SymScalar, b: &SymScalar) -> QSeries<elliptic_schubert::theta::LaurentPoly> {
    a.num.mul(&b.den).sub(&b.num.mul(&a.den))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn twisted_product_is_associative(x in twisted_term(), y in twisted_term(), z in twisted_term(), seed in any::<u64>()) {
        let (x, y, z) = (build(x), build(y), build(z));
        let lhs = x.mul(&y).unwrap().mul(&z).unwrap();
        let rhs = x.mul(&y.mul(&z).unwrap()).unwrap();
        let ctx = SeriesContext::new(3, gl3().datum().symbols().clone());
        let ver = Verifier::new(ctx, Mode::Eval, 2, seed);
        prop_assert!(lhs.equals(&rhs, &ver).unwrap());
    }

    #[test]
    fn theta_is_odd(u in vector(5)) {
        let ctx = SeriesContext::new(6, SymbolTable::numbered(2, 2));
        prop_assert!(theta(&u.neg(), &ctx).equals(&theta(&u, &ctx).neg()).unwrap());
    }

    /// A quotient of thetas computed at a low order agrees with the same quotient
    /// at a higher order up to the precision the low one claims.
    #[test]
    fn truncation_is_sound(num in prop::collection::vec(vector(3), 1..3), den in prop::collection::vec(vector(3), 1..3), lo in 1u32..3) {
        let table = SymbolTable::numbered(2, 1);
        let at = |n: u32| {
            let ctx = SeriesContext::new(n, table.clone());
            let mut s = SymScalar::one(ctx.clone());
            for v in &num {
                s = s.mul(&theta(v, &ctx)).unwrap();
            }
            for v in &den {
                s = s.div(&theta(v, &ctx)).unwrap();
            }
            s
        };
        let (small, large) = (at(lo), at(lo + 3));
        let diff = cross_difference(&small, &large);
        prop_assert!(diff.precision() >= 0);
        prop_assert!(diff.is_zero(), "disagreement below q^{}", diff.precision());
    }

    #[test]
    fn pairing_is_symmetric(u in 0usize..6, w in 0usize..6, seed in any::<u64>()) {
        let g = gl3();
        let tables = ClassTables::new(g);
        let ctx = PairingContext::full(g).unwrap();
        let (a, b) = (elliptic_class(&tables, elem(u)).unwrap(), elliptic_class(&tables, elem(w)).unwrap());
        let ver = Verifier::new(SeriesContext::new(3, g.datum().symbols().clone()), Mode::Eval, 2, seed);
        prop_assert!(ver.equal(&pair(&a, &b, &ctx).unwrap(), &pair(&b, &a, &ctx).unwrap()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn documents_round_trip(w in 0usize..6, symbolic in any::<bool>(), seed in any::<u64>(), parabolic in any::<bool>()) {
        let label = gl3().label(elem(w));
        let config = RunConfig {
            mode: if symbolic { Mode::Symbolic } else { Mode::Eval },
            trunc: Some(2),
            seed,
            datum: parabolic.then_some(DatumKind::GL(3)),
            parabolic: parabolic.then(|| vec![2, 1]),
            ..RunConfig::default()
        };
        fn round<T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(t: T) -> bool {
            let s = serde_json::to_string(&t).unwrap();
            let back: T = serde_json::from_str(&s).unwrap();
            back == t && serde_json::to_string(&back).unwrap() == s
        }
        prop_assert!(round::<ClassTableDoc>(localize(&config, &label).unwrap()));
        prop_assert!(round::<BilleyDoc>(billey_terms(&config, "1,2,1", &label, None).unwrap()));
        prop_assert!(round::<PipeDreamsDoc>(pipe_dreams(&config, &label).unwrap()));
        prop_assert!(round::<PolyDoc>(poly(&config, &label).unwrap()));
    }

    #[test]
    fn outputs_are_deterministic(w in 0usize..6, seed in any::<u64>()) {
        let label = gl3().label(elem(w));
        let config = RunConfig { seed, ..RunConfig::default() };
        prop_assert_eq!(localize(&config, &label).unwrap(), localize(&config, &label).unwrap());
        let a = serde_json::to_string(&verify(&config, Suite::Gpd).unwrap()).unwrap();
        prop_assert_eq!(a, serde_json::to_string(&verify(&config, Suite::Gpd).unwrap()).unwrap());
    }
}
