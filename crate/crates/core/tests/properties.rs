use proptest::prelude::*;

use qtchar_core::cartan::{Family, LieType, Node};
use qtchar_core::kl::chi_qt;
use qtchar_core::order::{a_monomial, nakajima_factorization};
use qtchar_core::text::parse_monomial;
use qtchar_core::tfm::f_t;
use qtchar_core::torus::{star_product, TorusElement};
use qtchar_core::twisted::{fold_phi, FoldingDatum};
use qtchar_core::{Engine, GammaTable, HalfLaurent, Monomial, Var};

fn lie(f: Family, n: usize) -> LieType {
    LieType::new(f, n).unwrap()
}

fn any_type() -> impl Strategy<Value = LieType> {
    prop_oneof![
        (1usize..=4).prop_map(|n| lie(Family::A, n)),
        (2usize..=4).prop_map(|n| lie(Family::B, n)),
        (2usize..=4).prop_map(|n| lie(Family::C, n)),
        (4usize..=5).prop_map(|n| lie(Family::D, n)),
    ]
}

fn monomial(rank: usize, len: usize, exp: std::ops::RangeInclusive<i32>) -> impl Strategy<Value = Monomial> {
    prop::collection::vec((1..=rank as Node, -6i32..=6, exp), 0..=len)
        .prop_map(|f| Monomial::from_factors(f.into_iter().map(|(i, p, e)| (Var::new(i, p), e))))
}

fn typed_monomials(n: usize) -> impl Strategy<Value = (LieType, Vec<Monomial>)> {
    any_type().prop_flat_map(move |t| (Just(t), prop::collection::vec(monomial(t.rank, 4, -2..=2), n)))
}

fn element(t: LieType, ms: &[Monomial]) -> TorusElement {
    TorusElement::from_terms(
        t,
        ms.iter().enumerate().map(|(k, m)| (m.clone(), HalfLaurent::from_pairs([(k as i32 - 1, k as i64 + 1)]))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_is_skew((t, ms) in typed_monomials(2)) {
        let g = GammaTable::for_type(t).unwrap();
        prop_assert_eq!(g.gamma_pair(&ms[0], &ms[1]).unwrap(), -g.gamma_pair(&ms[1], &ms[0]).unwrap());
        prop_assert_eq!(g.gamma_pair(&ms[0], &ms[0]).unwrap(), 0);
    }

    #[test]
    fn star_is_associative_and_bar_reverses((t, ms) in typed_monomials(6)) {
        let g = GammaTable::for_type(t).unwrap();
        let (x, y, z) = (element(t, &ms[0..2]), element(t, &ms[2..4]), element(t, &ms[4..6]));
        let xy = star_product(&g, &x, &y).unwrap();
        prop_assert_eq!(
            star_product(&g, &xy, &z).unwrap(),
            star_product(&g, &x, &star_product(&g, &y, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(xy.bar(), star_product(&g, &y.bar(), &x.bar()).unwrap());
        prop_assert_eq!(xy.ev_t1(), x.ev_t1().commutative_product(&y.ev_t1()).unwrap());
    }

    #[test]
    fn nakajima_factorization_reproduces(t in any_type(), exps in prop::collection::vec((1u16..=5, -4i32..=4, 0u32..=2), 0..5)) {
        let c = qtchar_core::cartan_data(t).unwrap();
        let mut v = Monomial::one();
        for (i, p, k) in exps {
            let i = 1 + (i - 1) % t.rank as Node;
            v = v.mul(&a_monomial(&c, i, p).pow(k as i32));
        }
        let top = Monomial::y(1, 20);
        let below = top.div(&v);
        let f = nakajima_factorization(&c, &below, &top, None).expect("product of A is below");
        prop_assert_eq!(f.product(&c), v);
    }

    #[test]
    fn text_roundtrip((t, ms) in typed_monomials(1)) {
        let s = ms[0].to_string();
        prop_assert_eq!(parse_monomial(&s, t).unwrap(), ms[0].clone());
    }

    #[test]
    fn folding_is_multiplicative(rank in 2usize..=4, a in monomial(2, 3, -2..=2), b in monomial(2, 3, -2..=2)) {
        let t = lie(Family::A, rank);
        let fd = FoldingDatum::new(t).unwrap();
        let x = element(t, &[a.clone(), b.clone()]).ev_t1();
        let y = element(t, &[b, a]).ev_t1();
        let lhs = fold_phi(&fd, &x.commutative_product(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, fold_phi(&fd, &x).unwrap().mul(&fold_phi(&fd, &y).unwrap()));
    }
}

fn small_dominant(rank: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec((1..=rank as Node, 0i32..=3), 1..=2)
        .prop_map(|f| Monomial::from_factors(f.into_iter().map(|(i, p)| (Var::new(i, p), 1))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn spectral_shift_commutes(m in small_dominant(3), dp in -5i32..=5, fam in 0usize..4) {
        let t = [lie(Family::A, 3), lie(Family::B, 3), lie(Family::C, 3), lie(Family::D, 4)][fam];
        let e = Engine::new(t).unwrap();
        prop_assert_eq!(chi_qt(&e, &m.shifted(dp)).unwrap(), chi_qt(&e, &m).unwrap().shifted(dp));
    }

    #[test]
    fn diagram_symmetry_commutes(m in small_dominant(4), fam in 0usize..2) {
        let (t, flip): (LieType, fn(Node) -> Node) = if fam == 0 {
            (lie(Family::A, 4), |i| 5 - i)
        } else {
            (lie(Family::D, 4), |i| match i { 1 => 2, 2 => 1, k => k })
        };
        let e = Engine::new(t).unwrap();
        let f = f_t(&e, &m).unwrap();
        let g = f_t(&e, &m.map_nodes(|i| Some(flip(i)))).unwrap();
        let mapped = TorusElement::from_terms(
            t,
            f.body().iter().map(|(x, c)| (x.map_nodes(|i| Some(flip(i))), c.clone())),
        );
        prop_assert_eq!(g.body(), &mapped);
    }
}
