mod common;

use lefschetz::exact::{frac, q};
use lefschetz::invariants::{extract_descendants, n_numbers, run_pipeline};
use lefschetz::mirror::solve_mirror_map;
use lefschetz::oracle::oracle_n_d;
use lefschetz::serial::parse_geometry;
use lefschetz::twist::{check_conditions, i_function};
use lefschetz::{CurveClass, Error, GeometrySpec, Q};

fn shipped(name: &str) -> GeometrySpec {
    let path = common::geometries_dir().join(format!("{name}.json"));
    parse_geometry(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn number(numbers: &[(CurveClass, Q)], beta: &[u32]) -> Q {
    numbers
        .iter()
        .find(|(b, _)| b.0 == beta)
        .map(|(_, n)| n.clone())
        .unwrap()
}

#[test]
fn raising_truncation_keeps_low_degrees() {
    for name in ["quintic", "bicubic", "p5_o2o4", "local_p1"] {
        let g = shipped(name);
        let low = n_numbers(&g, 3).unwrap();
        let high = n_numbers(&g, 5).unwrap();
        for (beta, n) in &low {
            assert_eq!(&number(&high, &beta.0), n, "{name} {beta:?}");
        }
    }
}

#[test]
fn single_factor_geometries_match_oracle() {
    for name in ["quintic", "p4_o1", "p3_o1o1", "local_p1", "p5_o2o4", "p5_o3o3", "p5_om1_om5", "elliptic_cubic", "quartic_k3", "p4_o1_om1om1"] {
        let g = shipped(name);
        let r = g.ambient().factors()[0];
        let numbers = n_numbers(&g, 2).unwrap();
        for d in 1..=2u32 {
            let oracle = oracle_n_d(r, d, g.bundle(), 3).unwrap().value;
            assert_eq!(number(&numbers, &[d]), oracle, "{name} degree {d}");
        }
    }
}

#[test]
fn complete_intersection_values() {
    let cases: [(&str, &[u32], Q); 8] = [
        ("bicubic", &[1, 0], q(189)),
        ("bicubic", &[1, 1], q(8262)),
        ("p1p3_o24", &[1, 0], q(64)),
        ("p1p3_o24", &[0, 1], q(640)),
        ("p5_o2o4", &[1], q(1280)),
        ("p5_o2o4", &[2], q(92448)),
        ("p5_o3o3", &[1], q(1053)),
        ("p5_o3o3", &[2], frac(423549, 8)),
    ];
    for (name, beta, want) in cases {
        let numbers = n_numbers(&shipped(name), 2).unwrap();
        assert_eq!(number(&numbers, beta), want, "{name} {beta:?}");
    }
}

#[test]
fn symmetric_products_are_symmetric() {
    let numbers = n_numbers(&shipped("bicubic"), 4).unwrap();
    for (beta, n) in &numbers {
        let swapped = vec![beta.0[1], beta.0[0]];
        assert_eq!(&number(&numbers, &swapped), n, "{beta:?}");
    }
}

#[test]
fn zero_invariants_for_non_threefold_calabi_yau() {
    for name in ["elliptic_cubic", "quartic_k3"] {
        let numbers = n_numbers(&shipped(name), 4).unwrap();
        assert!(numbers.iter().all(|(_, n)| *n == q(0)), "{name}");
    }
}

#[test]
fn index_one_needs_a_scalar_shift() {
    for (r, l) in [(4u32, 4i64), (1, 1), (2, 2)] {
        let g = GeometrySpec::from_degrees(vec![r], &[&[l]]).unwrap();
        assert!(check_conditions(&g).theorem1_holds());
        let i = i_function(&g, 2).unwrap();
        match solve_mirror_map(&i, &g.constant_class()) {
            Err(Error::StructureViolation { beta, .. }) => assert_eq!(beta, vec![1]),
            other => panic!("P^{r} O({l}): {other:?}"),
        }
    }
}

#[test]
fn negative_combination_is_rejected() {
    let g = GeometrySpec::from_degrees(vec![4], &[&[6]]).unwrap();
    assert!(matches!(run_pipeline(&g, 2), Err(Error::HypothesisViolated(_))));
}

#[test]
fn quintic_descendants_come_from_normalized_series() {
    let g = shipped("quintic");
    let result = run_pipeline(&g, 2).unwrap();
    let table = extract_descendants(&result.normalized).unwrap();
    assert!(table.degrees().count() >= 2);
    assert!(extract_descendants(&result.i_series).is_err());
}
