mod common;

use lefschetz::exact::q;
use lefschetz::oracle::{localized_invariant, localized_seeded, TorusWeights};
use lefschetz::series::{inverse_shift, qs_substitute};
use lefschetz::twist::{h_factor, hbar_product, i_function};
use lefschetz::{AmbientSpace, CohClass, CurveClass, GeometrySpec, HbarLaurent, LineBundle, Q, QSeries};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn swap_class(c: &CohClass, target: &AmbientSpace) -> CohClass {
    let mut out = CohClass::zero(target);
    for (exp, x) in c.terms() {
        out += &CohClass::monomial(target, &[exp[1], exp[0]], x.clone()).unwrap();
    }
    out
}

fn swap_series(s: &QSeries, target: &AmbientSpace) -> QSeries {
    let mut out = QSeries::zero(target, s.max_degree());
    for (beta, v) in s.terms() {
        let terms = v.terms().map(|(k, c)| (k, swap_class(c, target)));
        let swapped = CurveClass(vec![beta.0[1], beta.0[0]]);
        out.set(swapped, HbarLaurent::from_terms(target, terms)).unwrap();
    }
    out
}

/// A convex line bundle on a product; concave lines need a single factor.
fn arb_line(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(0i64..=3, n).prop_filter("zero line", |v| v.iter().any(|&x| x != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convex_factor_contains_first_chern_class(r in 1u32..=4, l in 1i64..=6, d in 0u32..=4) {
        let space = AmbientSpace::projective(r).unwrap();
        let line = LineBundle::new(vec![l]);
        let h = h_factor(&space, &line, &CurveClass(vec![d])).unwrap();
        let c1 = CohClass::linear(&space, &[l]);
        let rest = hbar_product(&c1, 1, l * d as i64);
        prop_assert_eq!(h, &HbarLaurent::from_class(c1) * &rest);
    }

    #[test]
    fn concave_factor_degree(r in 1u32..=4, l in -6i64..=-1, d in 0u32..=4) {
        let space = AmbientSpace::projective(r).unwrap();
        let h = h_factor(&space, &LineBundle::new(vec![l]), &CurveClass(vec![d])).unwrap();
        let n = l * d as i64;
        let count = (-n - 1).max(0) as i32;
        prop_assert_eq!(h.max_pow(), Some(count));
        let lead: Q = (n + 1..=-1).map(q).product();
        prop_assert_eq!(h.coeff(count), CohClass::scalar(&space, lead));
    }

    #[test]
    fn i_function_truncation_is_stable(a in 1u32..=3, b in 1u32..=3, line in arb_line(2), k in 0u32..=3) {
        let g = GeometrySpec::from_degrees(vec![a, b], &[&line]).unwrap();
        prop_assert_eq!(i_function(&g, 4).unwrap().truncate(k), i_function(&g, k).unwrap());
    }

    #[test]
    fn swapping_factors_permutes_i_function(a in 1u32..=3, b in 1u32..=3, line in arb_line(2)) {
        let g = GeometrySpec::from_degrees(vec![a, b], &[&line]).unwrap();
        let swapped_line = [line[1], line[0]];
        let h = GeometrySpec::from_degrees(vec![b, a], &[&swapped_line]).unwrap();
        let i = i_function(&g, 3).unwrap();
        prop_assert_eq!(swap_series(&i, h.ambient()), i_function(&h, 3).unwrap());
    }

    #[test]
    fn substitution_inverts(seed in any::<u64>(), r in 1u32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GeometrySpec::from_degrees(vec![r, 1], &[&[1, 1]]).unwrap();
        let i = i_function(&g, 3).unwrap();
        let f: Vec<_> = (0..2).map(|_| common::series(&mut rng, 2, 3)).collect();
        let back = qs_substitute(&qs_substitute(&i, &f).unwrap(), &inverse_shift(&f).unwrap()).unwrap();
        prop_assert_eq!(back, i);
    }

    #[test]
    fn exp_log_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::series(&mut rng, 2, 4);
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a.clone());
        let b = common::series(&mut rng, 2, 4);
        let sum = a.try_add(&b).unwrap().exp().unwrap();
        prop_assert_eq!(sum, a.exp().unwrap().try_mul(&b.exp().unwrap()).unwrap());
    }

    #[test]
    fn oracle_ignores_weights(seed in any::<u64>(), r in 1u32..=4, l in 1i64..=5, d in 1u32..=2) {
        let bundle = lefschetz::BundleSpec::from_degrees(&[&[l]]);
        let rank = l * d as i64 + 1;
        let need = r as i64 + (r as i64 + 1) * d as i64 - 2 - rank;
        prop_assume!(need >= 0);
        let b = need.min(r as i64) as u32;
        let a = need as u32 - b;
        let first = localized_seeded(r, d, &bundle, a, b, seed).unwrap();
        for k in 1..5u64 {
            let other = localized_seeded(r, d, &bundle, a, b, seed.wrapping_add(k)).unwrap();
            prop_assert_eq!(&other.value, &first.value);
        }
    }
}

#[test]
fn oracle_fixed_weight_vectors() {
    let bundle = lefschetz::BundleSpec::from_degrees(&[&[5]]);
    let arithmetic = TorusWeights::new(vec![1, 2, 3, 4, 5]).unwrap();
    assert!(localized_invariant(4, 2, &bundle, 0, 1, &arithmetic).is_err());
    let vectors = [
        vec![1, 2, 4, 8, 16],
        vec![3, 1, 4, 15, 9],
        vec![-2, 5, 11, 13, 17],
        vec![97, 1, 50, 23, 8],
        vec![6, -7, 2, 31, 19],
        vec![10, 21, 33, 47, 62],
        vec![2, 13, 37, 71, 89],
        vec![5, 29, 43, 61, 83],
        vec![7, 19, 53, 67, 97],
    ];
    for d in 1..=2 {
        let values: Vec<Q> = vectors
            .iter()
            .filter_map(|v| localized_invariant(4, d, &bundle, 0, 1, &TorusWeights::new(v.clone()).unwrap()).ok())
            .collect();
        assert!(values.len() >= 5, "only {} usable weight vectors", values.len());
        assert!(values.iter().all(|v| v == &values[0]), "{values:?}");
    }
}
