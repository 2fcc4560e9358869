use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::error::Error;

fn reg() -> Arc<VarRegistry> {
    VarRegistry::new(["x", "y", "z", "w"]).unwrap()
}

fn p(text: &str, r: &Arc<VarRegistry>) -> Polynomial {
    Polynomial::parse(text, r).unwrap()
}

#[test]
fn cancellation_and_difference_of_squares() {
    let r = reg();
    assert_eq!(p("x + y", &r) + p("x - y", &r), p("2*x", &r));
    let b = VarRegistry::biquadratic(3);
    let lhs = p("x1*y3 - x3*y1", &b) * p("x1*y3 + x3*y1", &b);
    assert_eq!(lhs, p("x1^2*y3^2 - x3^2*y1^2", &b));
    assert!(p("x^2 - 3*y", &r).scale(&int(0)).is_zero());
}

#[test]
fn registry_mismatch_is_an_error() {
    let a = p("x", &reg());
    let other = VarRegistry::new(["x", "t"]).unwrap();
    let b = p("x", &other);
    assert!(matches!(a.checked_add(&b), Err(Error::RegistryMismatch)));
    assert!(matches!(a.checked_mul(&b), Err(Error::RegistryMismatch)));
    // equal name lists are the same registry
    let twin = VarRegistry::new(["x", "y", "z", "w"]).unwrap();
    assert_eq!(a.checked_add(&p("y", &twin)).unwrap(), p("x + y", &reg()));
}

#[test]
fn display_format() {
    let b = VarRegistry::biquadratic(2);
    let q = p("2*x1^2*y1^2 - 2*x1*y1*x2*y2", &b);
    assert_eq!(q.to_string(), "2*x1^2*y1^2 - 2*x1*x2*y1*y2");
    assert_eq!(p("-1/2*x1 + 3 - x2^3", &b).to_string(), "-x2^3 - 1/2*x1 + 3");
    assert_eq!(Polynomial::zero(&b).to_string(), "0");
    assert_eq!(p("0", &b), Polynomial::zero(&b));
}

#[test]
fn parse_errors() {
    let r = reg();
    assert!(matches!(Polynomial::parse("x + q", &r), Err(Error::UnknownVariable(_))));
    assert!(matches!(Polynomial::parse("", &r), Err(Error::Parse { .. })));
    assert!(matches!(Polynomial::parse("x y", &r), Err(Error::Parse { .. })));
    assert!(matches!(Polynomial::parse("1/0*x", &r), Err(Error::Parse { .. })));
    assert!(matches!(Polynomial::parse("x^", &r), Err(Error::Parse { .. })));
}

#[test]
fn identity_substitution() {
    let r = reg();
    let q = p("x^3*y - 2/3*z*w + 7", &r);
    assert_eq!(q.substitute(&Substitution::identity(&r)).unwrap(), q);
}

#[test]
fn substitution_missing_image() {
    let r = reg();
    let mut sub = Substitution::new(&r, &r);
    sub.set(VarId(0), p("y", &r)).unwrap();
    assert_eq!(p("x^2", &r).substitute(&sub).unwrap(), p("y^2", &r));
    assert!(matches!(p("x*z", &r).substitute(&sub), Err(Error::MissingImage(name)) if name == "z"));
}

#[test]
fn evaluation() {
    let r = reg();
    let q = p("x^2 - 1/2*y + 5", &r);
    let zeros = vec![int(0); 4];
    assert_eq!(q.evaluate_dense(&zeros).unwrap(), int(5));
    let mut pt = BTreeMap::new();
    pt.insert(VarId(0), int(2));
    assert!(matches!(q.evaluate(&pt), Err(Error::Unassigned(name)) if name == "y"));
    pt.insert(VarId(1), ratio(1, 3));
    assert_eq!(q.evaluate(&pt).unwrap(), ratio(53, 6));
}

#[test]
fn coefficient_slices() {
    let r = reg();
    let q = p("x^2*y + y", &r);
    assert_eq!(q.coefficient_of(r.var("y").unwrap(), 1), p("x^2 + 1", &r));
    assert!(q.coefficient_of(r.var("y").unwrap(), 2).is_zero());
}

#[test]
fn sign_symmetrize_kills_odd_terms() {
    let r = reg();
    let y = r.var("y").unwrap();
    assert_eq!(p("x^2 + x*y", &r).sign_symmetrize(&[y]), p("x^2", &r));
}

#[test]
fn discriminants() {
    let r = VarRegistry::new(["p", "q"]).unwrap();
    let pv = r.var("p").unwrap();
    assert!(p("p^2 + 2*p*q + q^2", &r).quadratic_discriminant(pv).unwrap().is_zero());
    assert_eq!(p("p^2 - q", &r).quadratic_discriminant(pv).unwrap(), p("4*q", &r));
    assert!(matches!(
        p("p^3 + q", &r).quadratic_discriminant(pv),
        Err(Error::NotQuadratic { degree: 3, .. })
    ));
    assert!(matches!(p("q", &r).quadratic_discriminant(pv), Err(Error::NotQuadratic { degree: 0, .. })));
}

#[test]
fn exact_division() {
    let b = VarRegistry::biquadratic(3);
    let q = p("x1^2*y3^2 - x3^2*y1^2", &b).exact_divide(&p("x1*y3 - x3*y1", &b)).unwrap();
    assert_eq!(q, Some(p("x1*y3 + x3*y1", &b)));
    let r = reg();
    assert_eq!(p("x^2 + y^2", &r).exact_divide(&p("x + y", &r)).unwrap(), None);
    assert!(matches!(p("x", &r).exact_divide(&Polynomial::zero(&r)), Err(Error::DivisionByZero)));
    assert_eq!(Polynomial::zero(&r).exact_divide(&p("x", &r)).unwrap(), Some(Polynomial::zero(&r)));
}

#[test]
fn ratio_to_detects_scalar_multiples() {
    let r = reg();
    assert_eq!(p("3*x - 6*y", &r).ratio_to(&p("x - 2*y", &r)), Some(int(3)));
    assert_eq!(p("3*x - 5*y", &r).ratio_to(&p("x - 2*y", &r)), None);
}

// ---- property tests ----

fn arb_poly(max_terms: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=max_exp, 4), -9i64..=9, 1i64..=4);
    prop::collection::vec(term, 0..=max_terms).prop_map(|terms| {
        let r = reg();
        Polynomial::from_terms(
            &r,
            terms.into_iter().map(|(exps, n, d)| {
                (Monomial::from_powers(exps.into_iter().enumerate().map(|(i, e)| (VarId(i as u32), e))), ratio(n, d))
            }),
        )
    })
}

fn arb_point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-5i64..=5, 1i64..=3), 4).prop_map(|v| v.into_iter().map(|(n, d)| ratio(n, d)).collect())
}

/// Reference symmetrization: the literal average over all sign flips.
fn symmetrize_by_averaging(q: &Polynomial, vars: &[VarId]) -> Polynomial {
    let r = q.registry().clone();
    let mut acc = Polynomial::zero(&r);
    for mask in 0..(1u32 << vars.len()) {
        let images = r
            .ids()
            .map(|v| {
                let flip = vars.iter().position(|&w| w == v).is_some_and(|k| mask >> k & 1 == 1);
                let x = Polynomial::var(&r, v);
                if flip {
                    -x
                } else {
                    x
                }
            })
            .collect();
        let sub = Substitution::from_images(&r, &r, images).unwrap();
        acc = acc + q.substitute(&sub).unwrap();
    }
    acc.scale(&ratio(1, 1 << vars.len()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_laws(a in arb_poly(4, 2), b in arb_poly(4, 2), c in arb_poly(4, 2)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn substitution_is_a_homomorphism(a in arb_poly(4, 2), b in arb_poly(4, 2), imgs in prop::collection::vec(arb_poly(3, 1), 4)) {
        let r = reg();
        let sub = Substitution::from_images(&r, &r, imgs).unwrap();
        let s = |q: &Polynomial| q.substitute(&sub).unwrap();
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in arb_poly(5, 3), imgs in prop::collection::vec(arb_poly(3, 2), 4), pt in arb_point()) {
        let r = reg();
        let sub = Substitution::from_images(&r, &r, imgs.clone()).unwrap();
        let composed = a.substitute(&sub).unwrap().evaluate_dense(&pt).unwrap();
        let inner: Vec<Rational> = imgs.iter().map(|q| q.evaluate_dense(&pt).unwrap()).collect();
        prop_assert_eq!(composed, a.evaluate_dense(&inner).unwrap());
        if let (Some(d), Some(e)) = (a.degree(), imgs.iter().filter_map(Polynomial::degree).max()) {
            prop_assert!(a.substitute(&sub).unwrap().degree().unwrap_or(0) <= d * e);
        }
    }

    #[test]
    fn coefficient_slices_reconstruct(a in arb_poly(6, 4), v in 0u32..4) {
        let v = VarId(v);
        let r = a.registry().clone();
        let x = Polynomial::var(&r, v);
        let top = a.degree_in(v).unwrap_or(0);
        let mut acc = Polynomial::zero(&r);
        for d in 0..=top {
            let slice = a.coefficient_of(v, d);
            prop_assert_eq!(slice.degree_in(v).unwrap_or(0), 0);
            acc = acc + slice * x.pow(d);
        }
        prop_assert_eq!(acc, a);
    }

    #[test]
    fn sign_symmetrize_matches_averaging(a in arb_poly(6, 3), mask in 0u32..16) {
        let vars: Vec<VarId> = (0..4).filter(|i| mask >> i & 1 == 1).map(VarId).collect();
        let s = a.sign_symmetrize(&vars);
        prop_assert_eq!(&s, &symmetrize_by_averaging(&a, &vars));
        prop_assert_eq!(&s.sign_symmetrize(&vars), &s);
        for (m, _) in s.terms() {
            for &v in &vars {
                prop_assert_eq!(m.degree_in(v) % 2, 0);
            }
        }
    }

    #[test]
    fn division_inverts_multiplication(a in arb_poly(5, 2), b in arb_poly(4, 2)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), Some(a));
    }

    #[test]
    fn text_roundtrip(a in arb_poly(6, 3)) {
        let r = a.registry().clone();
        prop_assert_eq!(Polynomial::parse(&a.to_string(), &r).unwrap(), a);
    }
}
