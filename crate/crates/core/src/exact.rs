//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `"num/den"`; the denominator is always written.
pub fn to_fraction_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"num/den"` or a bare integer `"num"`.
pub fn parse_fraction(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact fraction: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn factorial(n: u32) -> Q {
    (1..=n).fold(Q::one(), |acc, k| acc * q(k as i64))
}

/// `base^exp` for a possibly negative integer exponent.
pub fn powi(base: &Q, exp: i32) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn is_positive_integer(x: &Q) -> bool {
    x.is_integer() && x.is_positive()
}

/// Solves `A x = b` exactly, where `columns[j]` is the j-th column of `A`.
///
/// Free variables are set to zero. Returns `None` when the system is
/// inconsistent.
pub fn solve_linear(columns: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let rows = rhs.len();
    let cols = columns.len();
    // augmented row-major matrix
    let mut m: Vec<Vec<Q>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Q> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                #[allow(clippy::needless_range_loop)]
                for j in c..=cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}
