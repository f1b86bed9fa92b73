//! Single-variable combinatorics of the composed transform.
//!
//! With partial sums `B_{m-1} = beta_1 + ... + beta_{m-1}` over ordered
//! compositions `beta = beta_1 + ... + beta_s`,
//!
//! `Q(q) = 1 + sum_beta q^beta sum (1/s!) prod_{m=1}^{s} (y_{beta_m} + x_{beta_m} B_{m-1})`
//!
//! and `log Q = sum_beta z_beta q^beta` with
//!
//! `z_beta = sum (1/s!) y_{beta_1} prod_{m=2}^{s} x_{beta_m} B_{m-1}`.

use num_traits::Zero;

use crate::cohom::CurveClass;
use crate::error::{Error, Result};
use crate::exact::{factorial, q, Q};
use crate::series::ScalarQSeries;

/// Ordered compositions of `n` into positive parts.
fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn check_inputs(x: &ScalarQSeries, y: &ScalarQSeries) -> Result<()> {
    if x.nvars() != 1 || y.nvars() != 1 {
        return Err(Error::Unsupported(
            "composition coefficients are single-variable".into(),
        ));
    }
    if x.max_degree() != y.max_degree() {
        return Err(Error::TruncationMismatch {
            left: x.max_degree(),
            right: y.max_degree(),
        });
    }
    Ok(())
}

fn at(s: &ScalarQSeries, k: u32) -> Q {
    s.get(&CurveClass(vec![k]))
}

/// Builds `Q` by enumerating every ordered composition and returns `log Q`.
/// Constant terms of `x` and `y` are ignored.
pub fn z_from_log(x: &ScalarQSeries, y: &ScalarQSeries) -> Result<ScalarQSeries> {
    check_inputs(x, y)?;
    let d = x.max_degree();
    let mut big_q = ScalarQSeries::one(1, d);
    for n in 1..=d {
        let mut total = Q::zero();
        for parts in compositions(n) {
            let mut prod = factorial(parts.len() as u32).recip();
            let mut partial = 0u32;
            for &b in &parts {
                prod *= at(y, b) + at(x, b) * q(partial as i64);
                partial += b;
                if prod.is_zero() {
                    break;
                }
            }
            total += prod;
        }
        big_q.set(CurveClass(vec![n]), total);
    }
    big_q.log()
}

/// Direct evaluation of the closed form for `z`.
pub fn z_closed_form(x: &ScalarQSeries, y: &ScalarQSeries) -> Result<ScalarQSeries> {
    check_inputs(x, y)?;
    let d = x.max_degree();
    let mut z = ScalarQSeries::zero(1, d);
    for n in 1..=d {
        let mut total = Q::zero();
        for parts in compositions(n) {
            let mut prod = factorial(parts.len() as u32).recip() * at(y, parts[0]);
            let mut partial = parts[0];
            for &b in &parts[1..] {
                prod *= at(x, b) * q(partial as i64);
                partial += b;
            }
            total += prod;
        }
        z.set(CurveClass(vec![n]), total);
    }
    Ok(z)
}
