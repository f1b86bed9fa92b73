//! The mirror transformation
//!
//! `T(S) = exp(f0) * exp(sum_i p_i f1_i / hbar) * S(q exp(f1))`
//!
//! and the order-by-order solver that picks `(f0, f1)` so that every
//! `beta != 0` term of `T(S)` is `O(hbar^-2)`.

mod composition;

pub use composition::{z_closed_form, z_from_log};

use num_traits::Zero;

use crate::cohom::{CohClass, CurveClass};
use crate::error::{Error, Result};
use crate::exact::{factorial, solve_linear, Q};
use crate::series::{qs_mul, qs_substitute, HbarLaurent, QSeries, ScalarQSeries};

/// The pair `(f0, f1)`; all constant terms vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorMap {
    pub f0: ScalarQSeries,
    pub f1: Vec<ScalarQSeries>,
}

impl MirrorMap {
    pub fn zero(nvars: usize, max_degree: u32) -> Self {
        Self {
            f0: ScalarQSeries::zero(nvars, max_degree),
            f1: vec![ScalarQSeries::zero(nvars, max_degree); nvars],
        }
    }

    pub fn new(f0: ScalarQSeries, f1: Vec<ScalarQSeries>) -> Result<Self> {
        let (n, d) = (f0.nvars(), f0.max_degree());
        if f1.len() != n {
            return Err(Error::InvalidGeometry(format!(
                "mirror map has {} shift series for {n} variables",
                f1.len()
            )));
        }
        for s in std::iter::once(&f0).chain(&f1) {
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
            if s.max_degree() != d || s.nvars() != n {
                return Err(Error::TruncationMismatch {
                    left: d,
                    right: s.max_degree(),
                });
            }
        }
        Ok(Self { f0, f1 })
    }

    pub fn nvars(&self) -> usize {
        self.f1.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.f0.max_degree()
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f1.iter().all(ScalarQSeries::is_zero)
    }
}

/// `[hbar^0] S = g(q) * ctop` and the `p_i` components of `[hbar^-1] S / ctop`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub g: ScalarQSeries,
    pub divisor_part: Vec<ScalarQSeries>,
}

impl NormalForm {
    /// `g == 1` and every divisor component vanishes.
    pub fn is_normalized(&self) -> bool {
        self.g == ScalarQSeries::one(self.g.nvars(), self.g.max_degree())
            && self.divisor_part.iter().all(ScalarQSeries::is_zero)
    }
}

fn violation(beta: &CurveClass, hbar_power: i32, residual: &CohClass) -> Error {
    Error::StructureViolation {
        beta: beta.0.clone(),
        hbar_power,
        residual: residual.to_string(),
    }
}

/// Scalar `g` with `x = g * ctop`.
fn proportionality(x: &CohClass, ctop: &CohClass) -> Option<Q> {
    let (idx, c) = ctop.coeffs().iter().enumerate().find(|(_, c)| !c.is_zero())?;
    let g = &x.coeffs()[idx] / c;
    (ctop.scale(&g) == *x).then_some(g)
}

/// Reads off `(g_beta, a_beta)` from one coefficient: `[hbar^0] = g ctop`,
/// `[hbar^-1] = ctop * sum_i a_i p_i`, nothing above `hbar^0`.
fn split_term(beta: &CurveClass, term: &HbarLaurent, ctop: &CohClass) -> Result<(Q, Vec<Q>)> {
    if let Some((pow, c)) = term.terms().next_back().filter(|(pow, _)| *pow > 0) {
        return Err(violation(beta, pow, c));
    }
    let space = ctop.space();
    let zeroth = term.coeff(0);
    let g = proportionality(&zeroth, ctop).ok_or_else(|| violation(beta, 0, &zeroth))?;
    let first = term.coeff(-1);
    let columns: Vec<Vec<Q>> = (0..space.n_factors())
        .map(|i| (ctop * &CohClass::hyperplane(space, i)).coeffs().to_vec())
        .collect();
    let a = solve_linear(&columns, first.coeffs()).ok_or_else(|| violation(beta, -1, &first))?;
    Ok((g, a))
}

/// Decomposes the `hbar^0` and `hbar^-1` parts of `s` against `ctop`.
pub fn normal_form(s: &QSeries, ctop: &CohClass) -> Result<NormalForm> {
    let space = s.space();
    if ctop.space() != space {
        return Err(Error::AmbientMismatch);
    }
    let n = space.n_factors();
    let d = s.max_degree();
    let zero = CurveClass::zero(n);
    if ctop.is_zero() {
        return Err(violation(&zero, 0, ctop));
    }
    let expected = HbarLaurent::from_class(ctop.clone());
    if s.constant() != &expected {
        let diff = s.constant() - &expected;
        let (pow, c) = diff.terms().next_back().expect("nonzero difference");
        return Err(violation(&zero, pow, c));
    }
    let mut g = ScalarQSeries::one(n, d);
    let mut divisor_part = vec![ScalarQSeries::zero(n, d); n];
    for (beta, term) in s.terms() {
        if beta.is_zero() {
            continue;
        }
        let (gb, ab) = split_term(beta, term, ctop)?;
        g.set(beta.clone(), gb);
        for (di, ai) in divisor_part.iter_mut().zip(ab) {
            di.set(beta.clone(), ai);
        }
    }
    Ok(NormalForm { g, divisor_part })
}

/// Lowest hbar power a transform of `s` can produce; `exp(p f1 / hbar)`
/// lowers powers by at most `dim P`.
fn transform_floor(s: &QSeries) -> i32 {
    let lowest = s
        .terms()
        .filter_map(|(_, v)| v.min_pow())
        .min()
        .unwrap_or(0);
    s.hbar_floor().min(lowest - s.space().dim() as i32)
}

/// `exp(sum_i p_i f1_i / hbar)` as a q-series; finite because every `p_i`
/// is nilpotent.
fn divisor_exponential(s: &QSeries, f1: &[ScalarQSeries], floor: i32) -> Result<QSeries> {
    let space = s.space();
    let d = s.max_degree();
    let mut arg = QSeries::zero(space, d).with_hbar_floor(floor);
    for (i, fi) in f1.iter().enumerate() {
        let p = CohClass::hyperplane(space, i);
        let mut term = QSeries::zero(space, d).with_hbar_floor(floor);
        for (beta, c) in fi.terms() {
            term.set(beta.clone(), HbarLaurent::monomial(p.scale(c), -1))?;
        }
        arg = arg.try_add(&term)?;
    }
    let mut sum = QSeries::one(space, d).with_hbar_floor(floor);
    let mut power = sum.clone();
    for k in 1..=space.dim() {
        power = qs_mul(&power, &arg)?;
        if power.terms().all(|(_, v)| v.is_zero()) {
            break;
        }
        sum = sum.try_add(&power.scale(&factorial(k).recip()))?;
    }
    Ok(sum)
}

/// `exp(f0) * exp(sum_i p_i f1_i / hbar) * S(q exp(f1))`, truncated at D.
pub fn apply_transform(s: &QSeries, m: &MirrorMap) -> Result<QSeries> {
    if m.nvars() != s.space().n_factors() {
        return Err(Error::AmbientMismatch);
    }
    if m.max_degree() != s.max_degree() {
        return Err(Error::TruncationMismatch {
            left: s.max_degree(),
            right: m.max_degree(),
        });
    }
    let floor = transform_floor(s);
    let s = s.clone().with_hbar_floor(floor);
    let substituted = qs_substitute(&s, &m.f1)?;
    let shifted = if m.f1.iter().all(ScalarQSeries::is_zero) {
        substituted
    } else {
        qs_mul(&divisor_exponential(&s, &m.f1, floor)?, &substituted)?
    };
    if m.f0.is_zero() {
        Ok(shifted)
    } else {
        shifted.mul_scalar_series(&m.f0.exp()?)
    }
}

/// Solves for `(f0, f1)` degree by degree.
///
/// At degree `n` the new coefficients `b_beta`, `a_beta` only reach the
/// `q^beta` term through `S(0) = ctop`, adding `b_beta ctop` at `hbar^0` and
/// `ctop * sum_i a_i p_i` at `hbar^-1`; both are fixed by one linear solve.
pub fn solve_mirror_map(s: &QSeries, ctop: &CohClass) -> Result<MirrorMap> {
    // validates beta = 0 and the shape of every term up front
    normal_form(s, ctop)?;
    let n = s.space().n_factors();
    let d = s.max_degree();
    let mut map = MirrorMap::zero(n, d);
    for level in 1..=d {
        let current = apply_transform(s, &map)?;
        for beta in CurveClass::with_total(n, level) {
            let (g, a) = split_term(&beta, &current.coeff(&beta), ctop)?;
            map.f0.set(beta.clone(), -g);
            for (fi, ai) in map.f1.iter_mut().zip(a) {
                fi.set(beta.clone(), -ai);
            }
        }
    }
    let out = apply_transform(s, &map)?;
    let nf = normal_form(&out, ctop)?;
    if !nf.is_normalized() {
        let bad = std::iter::once(&nf.g)
            .chain(&nf.divisor_part)
            .flat_map(|s| s.terms())
            .map(|(b, _)| b)
            .find(|b| !b.is_zero())
            .cloned()
            .unwrap_or_else(|| CurveClass::zero(n));
        return Err(Error::NotNormalized { beta: bad.0 });
    }
    Ok(map)
}
