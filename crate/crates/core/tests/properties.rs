//! Invariants checked over generated inputs.

mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use tropical_chabauty::chipfiring::{bn_rank, check_riemann_roch, q_reduce, FiniteGraph, IntDivisor};
use tropical_chabauty::metric_graph::{canonical_divisor, divisor_of, GraphPoint};
use tropical_chabauty::padic::{mod_inverse, rational_valuation, split_valuation, FiniteFieldElement, PadicNumber};
use tropical_chabauty::padic::{legendre, Valuation};
use tropical_chabauty::series::{
    antiderivative, compute_np, compute_np_by_scan, count_zeros, newton_polygon, PadicSeries, ValuationWindow,
};
use tropical_chabauty::trop_jacobian::{abel_jacobi, is_principal, period_lattice};
use tropical_chabauty::rat;

use common::GraphShape;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-500i64..=500, 1i64..=500)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| rat(n, d))
}

fn finite(v: Valuation) -> i64 {
    v.finite().expect("nonzero")
}

const SHAPE: GraphShape = GraphShape { max_vertices: 5, max_extra_edges: 4, max_weight: 2, loops: true };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_additive(p in prime(), a in nonzero_rational(), b in nonzero_rational()) {
        let va = finite(rational_valuation(&a, p));
        let vb = finite(rational_valuation(&b, p));
        prop_assert_eq!(finite(rational_valuation(&(&a * &b), p)), va + vb);
        let s = &a + &b;
        if !s.is_zero() {
            prop_assert!(finite(rational_valuation(&s, p)) >= va.min(vb));
        }
    }

    #[test]
    fn split_valuation_reconstructs(p in prime(), n in (-100_000i64..=100_000).prop_filter("nonzero", |n| *n != 0)) {
        let (v, u) = split_valuation(&BigInt::from(n), p);
        prop_assert!(&u % BigInt::from(p) != BigInt::zero());
        prop_assert_eq!(u * num_traits::pow(BigInt::from(p), v as usize), BigInt::from(n));
    }

    #[test]
    fn exact_padic_field_operations(p in prime(), a in nonzero_rational(), b in nonzero_rational()) {
        let x = PadicNumber::exact(p, a.clone()).unwrap();
        let y = PadicNumber::exact(p, b.clone()).unwrap();
        prop_assert_eq!(x.add(&y).unwrap().to_rational(), &a + &b);
        prop_assert_eq!(x.mul(&y).unwrap().to_rational(), &a * &b);
        prop_assert_eq!(x.div(&y).unwrap().to_rational(), &a / &b);
        prop_assert_eq!(x.sub(&x).unwrap().to_rational(), BigRational::zero());
        prop_assert_eq!(x.mul(&x.inv().unwrap()).unwrap().to_rational(), BigRational::one());
    }

    #[test]
    fn mod_inverse_inverts(p in prime(), a in 1i64..10_000) {
        let m = BigInt::from(p);
        let a = BigInt::from(a);
        match mod_inverse(&a, &m) {
            Some(inv) => prop_assert_eq!((a * inv) % &m, BigInt::one()),
            None => prop_assert_eq!(a % &m, BigInt::zero()),
        }
    }

    #[test]
    fn legendre_is_multiplicative(p in prime().prop_filter("odd", |p| *p > 2), a in 0i64..200, b in 0i64..200) {
        let l = |x: i64| legendre(FiniteFieldElement::new(p, x)).unwrap();
        prop_assert_eq!(l(a * b), l(a) * l(b));
    }

    #[test]
    fn np_matches_scan_and_is_monotone(p in prime(), a in 1i64..=4, b in 1i64..=4, n0 in 0i64..=30) {
        let r = rat(a, b);
        let np = compute_np(p, &r, n0).unwrap();
        prop_assert_eq!(np.clone(), BigInt::from(compute_np_by_scan(p, &r, n0, 5000)));
        prop_assert_eq!(np.clone(), BigInt::from(common::np_scan(p as i64, a, b, n0, 5000)));
        prop_assert!(np > BigInt::from(n0));
        prop_assert!(compute_np(p, &r, n0 + 1).unwrap() >= np);
    }

    #[test]
    fn newton_slopes_increase(p in prime(), coeffs in prop::collection::vec(-200i64..=200, 2..10), low in -3i64..=3) {
        prop_assume!(coeffs.iter().filter(|c| **c != 0).count() >= 2);
        let f = PadicSeries::from_integers(p, low, &coeffs).unwrap();
        let slopes = newton_polygon(&f).unwrap().slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zeros_match_known_roots(seed in any::<u64>(), p in prime().prop_filter("odd", |p| *p > 2)) {
        let mut rng = common::seeded(seed);
        let kz = common::random_known_zeros(&mut rng, p);
        let f = PadicSeries::from_rationals(p, kz.low, &kz.f_coeffs).unwrap();
        for (lo, hi) in [(0i64, 1i64), (1, 3), (3, 6)] {
            let w = ValuationWindow::new(rat(lo, 1), Some(rat(hi, 1)), false, true).unwrap();
            let want = kz.root_valuations.iter().filter(|v| **v >= lo && **v < hi).count() as u64;
            prop_assert_eq!(count_zeros(&f, &w).unwrap(), want);
        }
        let g = antiderivative(&kz.omega).unwrap();
        for (n, c) in g.terms() {
            let i = (n - kz.low) as usize;
            let want = kz.f_coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            prop_assert_eq!(c.to_rational(), want);
        }
    }

    #[test]
    fn principal_divisors_have_degree_zero(seed in any::<u64>()) {
        let mut rng = common::seeded(seed);
        let g = common::random_metric_graph(&mut rng, &SHAPE);
        let f = common::random_pl_function(&mut rng, &g);
        let h = common::random_pl_function(&mut rng, &g);
        let df = divisor_of(&f, &g);
        prop_assert_eq!(df.degree(), 0);
        prop_assert!(is_principal(&g, &df).unwrap());
        prop_assert_eq!(divisor_of(&f.plus(&g, &h), &g), df.plus(&divisor_of(&h, &g)));
        prop_assert_eq!(canonical_divisor(&g).degree(), 2 * g.genus() - 2);
    }

    #[test]
    fn abel_jacobi_is_path_independent(seed in any::<u64>()) {
        let mut rng = common::seeded(seed);
        let g = common::random_metric_graph(&mut rng, &SHAPE);
        let lattice = period_lattice(&g);
        let x0 = GraphPoint::Vertex(0);
        let x = common::random_point(&mut rng, &g);
        let tree_image = abel_jacobi(&g, &lattice, &x0, &x);
        let walk = common::random_walk_chain(&mut rng, &g, &x0, &x);
        let diff: Vec<BigRational> = lattice.pair(&walk).iter().zip(&tree_image).map(|(a, b)| a - b).collect();
        prop_assert!(lattice.contains(&diff));
    }
}

fn finite_graph() -> impl Strategy<Value = FiniteGraph> {
    (2usize..=5)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..6)))
        .prop_map(|(n, extra)| {
            let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a != b));
            FiniteGraph::from_edges(n, &edges).unwrap()
        })
}

fn graph_and_divisor() -> impl Strategy<Value = (FiniteGraph, IntDivisor)> {
    finite_graph().prop_flat_map(|g| {
        let n = g.len();
        (Just(g), prop::collection::vec(-2i64..=3, n).prop_map(IntDivisor))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn riemann_roch_holds((g, d) in graph_and_divisor()) {
        prop_assert!(check_riemann_roch(&g, &d).holds);
    }

    #[test]
    fn rank_is_class_invariant((g, d) in graph_and_divisor(), v in 0usize..5, times in -2i64..=2) {
        let v = v % g.len();
        let mut e = d.clone();
        g.fire_vertex(&mut e, v, times);
        prop_assert!(common::laplacian_equivalent(&g, &d, &e));
        prop_assert_eq!(bn_rank(&g, &d), bn_rank(&g, &e));
        let q = q_reduce(&g, &d, 0);
        prop_assert!(common::laplacian_equivalent(&g, &d, &q));
        prop_assert!(q.0.iter().skip(1).all(|c| *c >= 0));
    }

    #[test]
    fn rank_bounds((g, d) in graph_and_divisor()) {
        let r = bn_rank(&g, &d);
        prop_assert!(r >= -1);
        prop_assert!(r <= d.degree().max(-1));
        if d.degree() > 2 * g.genus() - 2 {
            prop_assert_eq!(r, d.degree() - g.genus());
        }
    }
}
