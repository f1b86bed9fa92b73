//! Benchmark fixtures.

use lefschetz::GeometrySpec;

pub fn quintic() -> GeometrySpec {
    GeometrySpec::from_degrees(vec![4], &[&[5]]).expect("valid geometry")
}

pub fn bicubic() -> GeometrySpec {
    GeometrySpec::from_degrees(vec![2, 2], &[&[3, 3]]).expect("valid geometry")
}

pub fn local_p1() -> GeometrySpec {
    GeometrySpec::from_degrees(vec![1], &[&[-1], &[-1]]).expect("valid geometry")
}
