#![allow(dead_code)]

use lefschetz::{CurveClass, Q, ScalarQSeries};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rational(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=6).into())
}

/// Random series with zero constant term and rational coefficients.
pub fn series(rng: &mut ChaCha8Rng, nvars: usize, d: u32) -> ScalarQSeries {
    let coeffs = CurveClass::up_to(nvars, d)
        .into_iter()
        .filter(|b| !b.is_zero())
        .map(|b| (b, rational(rng)))
        .collect::<Vec<_>>();
    ScalarQSeries::from_coeffs(nvars, d, coeffs)
}

pub fn geometries_dir() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../geometries")
}
