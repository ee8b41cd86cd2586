use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use ellmot::bar::{bar_differential, build_motive_chain, BarChain};
use ellmot::curve::{fixtures, CurvePoint, EllipticCurve};
use ellmot::cycle::{boundary, build_family, decorate, Context, CycleSum, DecorationKind, FamilyKind, FamilySpec, Term};
use ellmot::divisor::{alt_project_square, make_fbar_divisor, restrict_to_fiber, SymPoint};
use ellmot::gl2::{clebsch_gordan, Character};
use ellmot::report::fixture_config;
use ellmot::symgroup::{partitions, standard_tableaux, GroupAlgebraElement, Permutation};
use ellmot::{NamedClass, ProductDivisorClass, PureMotive, Q};

fn q(i: i64) -> Q {
    Q::from_integer(i.into())
}

fn split_curve(p: u64) -> (EllipticCurve, Vec<CurvePoint>) {
    let e = fixtures::split_two_torsion(p);
    let pts = e.enumerate_points().unwrap();
    (e, pts)
}

fn element(b: usize, picks: &[(usize, i64)]) -> GroupAlgebraElement {
    let perms = Permutation::all(b);
    GroupAlgebraElement::from_terms(b, picks.iter().map(|&(i, c)| (perms[i % perms.len()].clone(), q(c)))).unwrap()
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..120, -3i64..=3), 1..5)
}

proptest! {
    #[test]
    fn group_law_over_prime_fields(p in prop::sample::select(vec![7u64, 11, 13, 101, 103]), i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let (e, pts) = split_curve(p);
        let (a, b, c) = (&pts[i % pts.len()], &pts[j % pts.len()], &pts[k % pts.len()]);
        prop_assert_eq!(e.add(a, b).unwrap(), e.add(b, a).unwrap());
        prop_assert_eq!(e.add(&e.add(a, b).unwrap(), c).unwrap(), e.add(a, &e.add(b, c).unwrap()).unwrap());
        prop_assert!(e.add(a, &e.neg(a)).unwrap().is_infinity());
        prop_assert!(e.contains(&e.add(a, b).unwrap()));
    }

    #[test]
    fn scalar_multiplication_is_linear(m in -20i64..20, n in -20i64..20) {
        let e = fixtures::curve_37a1();
        let p = fixtures::generator_37a1();
        let lhs = e.scalar_mul(m + n, &p).unwrap();
        let rhs = e.add(&e.scalar_mul(m, &p).unwrap(), &e.scalar_mul(n, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_algebra_is_associative(b in 1usize..=4, x in picks(), y in picks(), z in picks()) {
        let (x, y, z) = (element(b, &x), element(b, &y), element(b, &z));
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn transpose_is_an_anti_involution(b in 1usize..=4, x in picks(), y in picks()) {
        let (x, y) = (element(b, &x), element(b, &y));
        prop_assert_eq!(x.transpose().transpose(), x.clone());
        prop_assert_eq!(x.multiply(&y).unwrap().transpose(), y.transpose().multiply(&x.transpose()).unwrap());
    }

    #[test]
    fn young_symmetrizers_are_quasi_idempotent(b in 1usize..=5, s in 0usize..100, t in 0usize..100) {
        let shapes = partitions(b);
        let shape = &shapes[s % shapes.len()];
        let tabs = standard_tableaux(shape);
        let tab = &tabs[t % tabs.len()];
        let e = tab.young_symmetrizer().unwrap();
        let lambda = e.quasi_idempotent_constant().unwrap().expect("quasi-idempotent");
        let fact: i64 = (1..=b as i64).product();
        prop_assert_eq!(lambda * q(tabs.len() as i64), q(fact));
    }

    #[test]
    fn clebsch_gordan_conserves(a in 0u32..12, b in 0u32..12, m in -2i64..3, k in -2i64..3) {
        let (v, w) = (PureMotive::new(a, m), PureMotive::new(b, k));
        let cg = clebsch_gordan(v, w);
        prop_assert_eq!(cg.dimension(), v.dimension() * w.dimension());
        prop_assert!(cg.parts().keys().all(|x| x.weight() == v.weight() + w.weight()));
        prop_assert_eq!(&cg, &clebsch_gordan(w, v));
        prop_assert_eq!(Some(cg), Character::of(v).product(&Character::of(w)).decompose());
    }

    #[test]
    fn alt_is_four_times_idempotent(cd in -3i64..=3, cp in -3i64..=3, c1 in -3i64..=3, c2 in -3i64..=3, k in 1i64..6) {
        let e = fixtures::curve_37a1();
        let p = e.scalar_mul(k, &fixtures::generator_37a1()).unwrap();
        let mut c = ProductDivisorClass::new(2);
        c.add_int(NamedClass::diag(1, 2), cd).unwrap();
        c.add_int(NamedClass::anti(1, 2), cp).unwrap();
        c.add_int(NamedClass::D { i: 1, q: p.clone() }, c1).unwrap();
        c.add_int(NamedClass::D { i: 2, q: CurvePoint::Infinity }, c2).unwrap();
        let a = alt_project_square(&e, &c).unwrap();
        prop_assert_eq!(alt_project_square(&e, &a).unwrap(), a.scaled(&q(4)));
        prop_assert_eq!(alt_project_square(&e, &c.swap_factors().unwrap()).unwrap(), a.swap_factors().unwrap());
        // the image only involves Δ and Ψ, with opposite coefficients
        let delta = a.coefficient(&NamedClass::diag(1, 2));
        prop_assert_eq!(a.coefficient(&NamedClass::anti(1, 2)), -delta.clone());
        prop_assert_eq!(delta, q(2 * (cd - cp)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fbar_fibers_are_principal(p in prop::sample::select(vec![101u64, 103, 107, 109]), n in 2usize..=4, i in 1usize..=4, seeds in prop::collection::vec(0usize..10_000, 3)) {
        let i = 1 + (i - 1) % n;
        let (e, pts) = split_curve(p);
        let fixed: Vec<SymPoint> = seeds[..n - 1].iter().map(|s| SymPoint::constant(pts[s % pts.len()].clone())).collect();
        let class = make_fbar_divisor(n).unwrap();
        if let Ok(d) = restrict_to_fiber(&e, &class, i, &fixed) {
            let d = d.evaluate(&e, &BTreeMap::new()).unwrap();
            let degree: Q = d.terms().values().cloned().sum();
            prop_assert!(degree.is_zero());
            let mut sum = CurvePoint::Infinity;
            for (pt, c) in d.terms() {
                sum = e.add(&sum, &e.scalar_mul(c.to_integer().try_into().unwrap(), pt).unwrap()).unwrap();
            }
            prop_assert!(sum.is_infinity());
        }
    }

    #[test]
    fn boundary_squares_to_zero(k1 in 11i64..40, k2 in 11i64..40, n in 0usize..=1, r in 1usize..=2) {
        prop_assume!(k1 != k2 && k1 != -k2);
        let cfg = fixture_config().validate().unwrap();
        let e = cfg.curve.clone();
        let g = fixtures::generator_37a1();
        let points = [e.scalar_mul(k1, &g).unwrap(), e.scalar_mul(-k2, &g).unwrap()];
        let mut ctx = Context::new(e);
        let ids: Vec<_> = cfg.functions.iter().map(|f| ctx.register(f.clone()).unwrap()).collect();
        let kind = FamilyKind::X { points: points[..r].to_vec() };
        let x = build_family(&mut ctx, &FamilySpec { kind, gs: ids[..n].to_vec() }, &cfg.mode).unwrap();
        let bare = CycleSum::single(Term::bare(x.clone()), Q::one());
        let eta = decorate(&ctx, DecorationKind::Eta, &x).unwrap();
        for s in [bare, eta] {
            let d = boundary(&ctx, &s).unwrap();
            prop_assert!(boundary(&ctx, &d).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bar_differential_squares_to_zero(coeffs in prop::collection::vec(-4i64..=4, 27)) {
        let cfg = fixture_config().validate().unwrap();
        let mut ctx = Context::new(cfg.curve.clone());
        let ids: Vec<_> = cfg.functions.iter().map(|f| ctx.register(f.clone()).unwrap()).collect();
        let mc = build_motive_chain(&mut ctx, &ids[..1], &[], &cfg.mode).unwrap();
        let mut c = BarChain::new();
        for (w, k) in mc.chain.keys().zip(&coeffs) {
            c.add(w.clone(), q(*k));
        }
        let d = bar_differential(&ctx, &c).unwrap();
        prop_assert!(bar_differential(&ctx, &d).unwrap().is_zero());
    }
}
