use proptest::prelude::*;
use rand::Rng;

use primcw::coefficients::int;
use primcw::endforms::covariant_bracket;
use primcw::primitive::{boundary_partial, pair_product};
use primcw::random::{self, Bounds};
use primcw::{Chart, EndForm, Form, Parity, ScalarPair, SuperBundle, SuperConn, SymplecticForm};

const CASES: u32 = 256;

fn chart(mi: usize) -> Chart {
    Chart::new([2, 4, 6][mi]).unwrap()
}

fn bundle(ri: usize) -> SuperBundle {
    let (p, m) = [(1, 0), (1, 1), (2, 1)][ri];
    SuperBundle::new(p, m).unwrap()
}

fn sign(p: usize) -> primcw::Rational {
    int(if p % 2 == 0 { 1 } else { -1 })
}

fn parity<R: Rng>(r: &mut R) -> Parity {
    if r.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn pbit(p: Parity) -> usize {
    match p {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(CASES)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), mi in 0..3usize) {
        let c = chart(mi);
        let mut r = random::rng(seed);
        let a = random::form(&mut r, c, &Bounds::new(3, 3, 3).unwrap());
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn boundary_squared_vanishes(seed in any::<u64>(), mi in 0..3usize) {
        let c = chart(mi);
        let omega = SymplecticForm::standard(c).unwrap();
        let mut r = random::rng(seed);
        let b = Bounds::new(3, 3, 3).unwrap();
        let p = ScalarPair::new(random::form(&mut r, c, &b), random::form(&mut r, c, &b)).unwrap();
        let dd = boundary_partial(&boundary_partial(&p, &omega).unwrap(), &omega).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), mi in 0..3usize, p in 0..4usize, q in 0..4usize) {
        let c = chart(mi);
        let mut r = random::rng(seed);
        let b = Bounds::default();
        let a = random::form_of_degree(&mut r, c, p, &b);
        let e = random::form_of_degree(&mut r, c, q, &b);
        prop_assert_eq!(a.wedge(&e), e.wedge(&a).scale(&sign(p * q)));
    }

    #[test]
    fn d_is_a_graded_derivation(seed in any::<u64>(), mi in 0..3usize, p in 0..4usize) {
        let c = chart(mi);
        let mut r = random::rng(seed);
        let b = Bounds::default();
        let a = random::form_of_degree(&mut r, c, p, &b);
        let e = random::form(&mut r, c, &b);
        let rhs = &a.d().wedge(&e) + &a.wedge(&e.d()).scale(&sign(p));
        prop_assert_eq!(a.wedge(&e).d(), rhs);
    }

    #[test]
    fn covariant_bracket_is_a_graded_derivation(seed in any::<u64>(), mi in 0..3usize, ri in 0..3usize) {
        let (c, e) = (chart(mi), bundle(ri));
        let mut r = random::rng(seed);
        let b = Bounds::default();
        let a = SuperConn::new(random::endform(&mut r, e, c, Parity::Odd, &b, true)).unwrap();
        let ps = parity(&mut r);
        let s = random::endform(&mut r, e, c, ps, &b, true);
        let pt = parity(&mut r);
        let t = random::endform(&mut r, e, c, pt, &b, true);
        let lhs = covariant_bracket(&a, &s.mul(&t)).unwrap();
        let rhs = &covariant_bracket(&a, &s).unwrap().mul(&t)
            + &s.mul(&covariant_bracket(&a, &t).unwrap()).scale(&sign(pbit(ps)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn supertrace_kills_supercommutators(seed in any::<u64>(), mi in 0..3usize, ri in 0..3usize) {
        let (c, e) = (chart(mi), bundle(ri));
        let mut r = random::rng(seed);
        let b = Bounds::default();
        let (ps, pt) = (parity(&mut r), parity(&mut r));
        let s = random::endform(&mut r, e, c, ps, &b, true);
        let t = random::endform(&mut r, e, c, pt, &b, true);
        let comm = &s.mul(&t) - &t.mul(&s).scale(&sign(pbit(ps) * pbit(pt)));
        prop_assert!(comm.supertrace().is_zero());
    }

    #[test]
    fn supertrace_of_bracket_is_d_of_supertrace(seed in any::<u64>(), mi in 0..3usize, ri in 0..3usize) {
        let (c, e) = (chart(mi), bundle(ri));
        let mut r = random::rng(seed);
        let b = Bounds::default();
        let a = SuperConn::new(random::endform(&mut r, e, c, Parity::Odd, &b, true)).unwrap();
        let pg = parity(&mut r);
        let g = random::endform(&mut r, e, c, pg, &b, true);
        prop_assert_eq!(covariant_bracket(&a, &g).unwrap().supertrace(), g.supertrace().d());
    }

    #[test]
    fn end_mul_is_associative(seed in any::<u64>(), mi in 0..3usize, ri in 0..3usize) {
        let (c, e) = (chart(mi), bundle(ri));
        let mut r = random::rng(seed);
        let b = Bounds::default();
        let next = |r: &mut random::Rng64| {
            let p = parity(r);
            random::endform(r, e, c, p, &b, true)
        };
        let (s, t, u) = (next(&mut r), next(&mut r), next(&mut r));
        prop_assert_eq!(s.mul(&t).mul(&u), s.mul(&t.mul(&u)));
    }

    #[test]
    fn classical_bianchi(seed in any::<u64>(), mi in 0..3usize, ri in 0..3usize) {
        let (c, e) = (chart(mi), bundle(ri));
        let mut r = random::rng(seed);
        let a = SuperConn::new(random::endform(&mut r, e, c, Parity::Odd, &Bounds::default(), true)).unwrap();
        prop_assert!(covariant_bracket(&a, &a.curvature()).unwrap().is_zero());
    }

    #[test]
    fn pair_product_is_associative_with_unit(seed in any::<u64>(), mi in 0..3usize) {
        let c = chart(mi);
        let mut r = random::rng(seed);
        let b = Bounds::default();
        let next = |r: &mut random::Rng64| {
            ScalarPair::new(random::form(r, c, &b), random::form(r, c, &b)).unwrap()
        };
        let (x, y, z) = (next(&mut r), next(&mut r), next(&mut r));
        let l = pair_product(&pair_product(&x, &y).unwrap(), &z).unwrap();
        let rr = pair_product(&x, &pair_product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, rr);
        prop_assert_eq!(pair_product(&ScalarPair::unit(c), &x).unwrap(), x.clone());
        prop_assert_eq!(pair_product(&x, &ScalarPair::unit(c)).unwrap(), x);
    }
}

#[test]
fn identity_is_a_unit_for_end_mul() {
    let (c, e) = (chart(1), bundle(2));
    let mut r = random::rng(1);
    let s = random::endform(&mut r, e, c, Parity::Odd, &Bounds::default(), true);
    let id = EndForm::identity(e, c);
    assert_eq!(id.mul(&s), s);
    assert_eq!(s.mul(&id), s);
    assert!(Form::one(c).d().is_zero());
}
