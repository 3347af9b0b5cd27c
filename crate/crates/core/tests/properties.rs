use hardcore_expansion::cluster::{
    acyclic_orientations_unique_sink, explicit_neighborhood_size, neighborhood_affine_of, ursell, SmallGraph,
};
use hardcore_expansion::oracle::{
    capture_report, closure, large_set_bound_holds, xi_by_defect_sets, xi_exact, ExplicitGraph, Side,
};
use hardcore_expansion::polyring::{binom_affine, int, parse, rat, Assignment, Monomial, Polynomial, Rational, Var};
use hardcore_expansion::window::{ProductSpec, Vertex, VertexSet};
use num_traits::Signed;
use proptest::prelude::*;

const VARS: [Var; 4] = [Var::S, Var::T, Var::Lambda, Var::U];

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..3, 0u32..3], -6i64..7, 1i64..5), 0..6).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (e, n, d) in terms {
            p.add_term(Monomial::new(e), rat(n, d));
        }
        p
    })
}

fn assignment() -> impl Strategy<Value = Assignment> {
    prop::collection::vec((-7i64..8, 1i64..6), 4).prop_map(|v| {
        let mut a = Assignment::new();
        for (var, (n, d)) in VARS.iter().zip(v) {
            a.set(*var, rat(n, d));
        }
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(p in polynomial(), q in polynomial(), r in polynomial()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Polynomial::one(), p.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in polynomial(), q in polynomial(), a in assignment()) {
        let (ep, eq) = (p.eval(&a).unwrap(), q.eval(&a).unwrap());
        prop_assert_eq!((&p * &q).eval(&a).unwrap(), &ep * &eq);
        prop_assert_eq!((&p + &q).eval(&a).unwrap(), ep + eq);
    }

    #[test]
    fn substitution_commutes_with_evaluation(p in polynomial(), a in assignment()) {
        let x = a.get(Var::S).unwrap().clone();
        prop_assert_eq!(p.substitute_value(Var::S, &x).eval(&a).unwrap(), p.eval(&a).unwrap());
    }

    #[test]
    fn serialisations_round_trip(p in polynomial()) {
        prop_assert_eq!(Polynomial::from_json(&p.to_json()).unwrap(), p.clone());
        let json = serde_json::to_string(&p.to_json()).unwrap();
        prop_assert_eq!(Polynomial::from_json(&serde_json::from_str(&json).unwrap()).unwrap(), p.clone());
        prop_assert_eq!(parse(&p.canonical_text()).unwrap(), p);
    }

    #[test]
    fn text_is_injective(p in polynomial(), q in polynomial()) {
        prop_assert_eq!(p.canonical_text() == q.canonical_text(), p == q);
        prop_assert_eq!(p.to_json() == q.to_json(), p == q);
    }

    #[test]
    fn ursell_sign_alternates(mask in 0u32..1 << 15, n in 1usize..7) {
        let mut g = SmallGraph::empty(n);
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if mask >> k & 1 == 1 {
                    g.add_edge(a, b);
                }
                k += 1;
            }
        }
        prop_assume!(g.is_connected());
        let phi = ursell(&g).unwrap();
        let expected_negative = n % 2 == 0;
        prop_assert_eq!(phi.is_negative(), expected_negative);
        let fact: i64 = (1..=n as i64).product();
        let via_orientations = Rational::from_integer(acyclic_orientations_unique_sink(&g, 0).into()) / int(fact);
        prop_assert_eq!(phi.abs(), via_orientations);
    }

    #[test]
    fn affine_size_matches_explicit_neighbourhood(
        moves in prop::collection::vec((0usize..4, 0usize..4, 1u32..3, 1u32..3), 0..4),
    ) {
        // walk from the root by distance-2 steps so the set stays 2-linked
        let mut members = vec![vec![0u32; 6]];
        for (from, coord, a, b) in moves {
            let mut v = members[from % members.len()].clone();
            let other = (coord + 1 + (a as usize)) % 6;
            v[coord] = (v[coord] + a) % 6;
            if a % 2 == 1 {
                v[other] = (v[other] + b * 2 - 1) % 6;
            }
            members.push(v);
        }
        let set: VertexSet = members.into_iter().map(Vertex::new).collect();
        prop_assume!(set.iter().all(|v| v.class() == 0));
        let spec = ProductSpec::kss_power(3, 6).unwrap();
        prop_assume!(spec.is_two_linked(&set));
        let size = set.len() as u32;
        let aff = neighborhood_affine_of(&set).unwrap();
        for (s, t) in [(3u32, 6usize), (size.max(3), (2 * size as usize + 1).max(7))] {
            prop_assert_eq!(aff.eval(s as i64, t as i64) as usize, explicit_neighborhood_size(&set, s, t));
        }
    }

    #[test]
    fn squared_isoperimetric_test_matches_floating_point(x in 1usize..17, extra in 0usize..17, m in 2usize..7, t in 1usize..6) {
        let n = 32;
        let nx = (x + extra).min(n / 2);
        let beta = 2.0 * x as f64 / n as f64;
        let rhs = (1.0 + 2.0 * 2f64.sqrt() * (1.0 - beta) / (m as f64 * (t as f64).sqrt())) * x as f64;
        prop_assume!((nx as f64 - rhs).abs() > 1e-9);
        prop_assert_eq!(large_set_bound_holds(nx, x, n, m, t), nx as f64 > rhs);
    }
}

#[test]
fn binomials_match_integers() {
    for n in 0..=12i64 {
        for k in 0..=12u32 {
            let value = binom_affine(Var::T, 0, k).eval(&Assignment::new().with(Var::T, int(n))).unwrap();
            let expected: i64 = if k as i64 > n { 0 } else { (0..k as i64).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
            assert_eq!(value, int(expected), "C({n},{k})");
        }
    }
}

#[test]
fn products_are_bipartite_regular_and_symmetric() {
    for token in ["C4", "C6", "Q3", "Q4", "K22", "K22^2", "K22xK11", "Kss:3^2", "C:8,Kss:1"] {
        let spec = ProductSpec::from_token(token).unwrap();
        let d: usize = spec.bases().iter().map(|b| b.degree()).sum();
        for v in spec.vertices() {
            let nb = spec.neighbors(&v).unwrap();
            assert_eq!(nb.len(), d, "{token}");
            for w in nb.iter() {
                assert_ne!(w.class(), v.class());
                assert!(spec.neighbors(w).unwrap().contains(&v));
            }
        }
    }
}

#[test]
fn oracle_invariants_on_the_roster() {
    for token in ["C4", "C6", "Q3", "K22", "K22xK11"] {
        let g = ExplicitGraph::from_token(token).unwrap();
        for l in [rat(1, 2), int(1), int(2)] {
            let r = capture_report(&g, &l).unwrap();
            assert!(r.zhat >= r.z);
            for side in Side::BOTH {
                let xi = xi_exact(&g, side, &l).unwrap();
                assert!(xi >= int(1));
                assert_eq!(xi, xi_by_defect_sets(&g, side, &l).unwrap());
            }
        }
        // all weights zero leaves only the empty configuration
        for side in Side::BOTH {
            assert_eq!(xi_exact(&g, side, &int(0)).unwrap(), int(1));
        }
        let d = g.side(Side::E);
        let mut sub = d;
        loop {
            let c = closure(&g, sub, Side::E).unwrap();
            assert_eq!(sub & !c, 0);
            assert_eq!(g.neighborhood(sub), g.neighborhood(c));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & d;
        }
    }
}
