//! One-point invariants read off the normalized J-function, multiple-cover
//! inversion, and the quantum Serre duality pair.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cohom::{integrate, CohClass, CurveClass};
use crate::error::{Error, Result};
use crate::exact::{powi, q, solve_linear, Q};
use crate::mirror::{apply_transform, normal_form, solve_mirror_map, MirrorMap};
use crate::series::{HbarLaurent, QSeries, ScalarQSeries};
use crate::twist::{check_conditions, hbar_product, i_function, j_ambient, GeometrySpec};

/// Coefficients of `[hbar^{-2-a}] J(beta)` in the monomial basis, keyed by
/// `(beta, a, monomial index)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DescendantTable {
    pub entries: BTreeMap<(CurveClass, u32, usize), Q>,
}

impl DescendantTable {
    pub fn get(&self, beta: &CurveClass, a: u32, k: usize) -> Q {
        self.entries
            .get(&(beta.clone(), a, k))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn degrees(&self) -> impl Iterator<Item = &CurveClass> {
        let mut seen: Vec<&CurveClass> = self.entries.keys().map(|(b, _, _)| b).collect();
        seen.dedup();
        seen.into_iter()
    }
}

/// Reads every `hbar^{-2-a}` coefficient of a normalized series.
pub fn extract_descendants(jn: &QSeries) -> Result<DescendantTable> {
    let ctop = jn.constant().coeff(0);
    let nf = normal_form(jn, &ctop)?;
    if !nf.is_normalized() {
        let beta = std::iter::once(&nf.g)
            .chain(&nf.divisor_part)
            .flat_map(|s| s.terms())
            .map(|(b, _)| b)
            .find(|b| !b.is_zero())
            .cloned()
            .unwrap_or_else(|| CurveClass::zero(jn.space().n_factors()));
        return Err(Error::NotNormalized { beta: beta.0 });
    }
    let mut table = DescendantTable::default();
    for (beta, term) in jn.terms() {
        if beta.is_zero() {
            continue;
        }
        for (pow, class) in term.terms() {
            if pow > -2 {
                continue;
            }
            let a = (-2 - pow) as u32;
            for (k, c) in class.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    table.entries.insert((beta.clone(), a, k), c.clone());
                }
            }
        }
    }
    Ok(table)
}

/// `N_beta = (1/d_i) * integral p_i [hbar^-2] Jn(beta)` with `i` the first
/// factor of positive degree.
pub fn degree_invariant(jn: &QSeries, beta: &CurveClass) -> Q {
    let space = jn.space();
    let Some(i) = beta.degrees().iter().position(|&d| d > 0) else {
        return Q::zero();
    };
    let class = jn.coeff(beta).coeff(-2);
    let p = CohClass::hyperplane(space, i);
    integrate(space, &(&p * &class)) / q(beta.degrees()[i] as i64)
}

/// Every intermediate of one run.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub i_series: QSeries,
    pub map: MirrorMap,
    pub normalized: QSeries,
    pub numbers: Vec<(CurveClass, Q)>,
}

/// I-function, mirror map, transform and `N_beta` for `1 <= |beta| <= D`.
pub fn run_pipeline(g: &GeometrySpec, max_degree: u32) -> Result<PipelineResult> {
    let report = check_conditions(g);
    if !report.theorem1_holds() {
        return Err(Error::HypothesisViolated(format!(
            "first Chern combination {:?} has a negative component",
            report.theorem1_combination
        )));
    }
    let i_series = i_function(g, max_degree)?;
    let ctop = g.constant_class();
    let map = solve_mirror_map(&i_series, &ctop)?;
    let normalized = apply_transform(&i_series, &map)?;
    let numbers = CurveClass::up_to(g.ambient().n_factors(), max_degree)
        .into_iter()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let n = degree_invariant(&normalized, &b);
            (b, n)
        })
        .collect();
    Ok(PipelineResult {
        i_series,
        map,
        normalized,
        numbers,
    })
}

pub fn n_numbers(g: &GeometrySpec, max_degree: u32) -> Result<Vec<(CurveClass, Q)>> {
    Ok(run_pipeline(g, max_degree)?.numbers)
}

/// Checks that multiple-cover inversion makes sense: one projective factor,
/// vanishing first Chern combination, and a threefold.
pub fn multiple_cover_applicable(g: &GeometrySpec) -> Result<()> {
    if g.ambient().n_factors() != 1 {
        return Err(Error::DimensionPrecondition(
            "multiple-cover inversion needs a single projective factor".into(),
        ));
    }
    let c = g.theorem1_combination()[0];
    if c != 0 {
        return Err(Error::DimensionPrecondition(format!(
            "first Chern combination is {c}, not 0"
        )));
    }
    let dim = g.target_dimension();
    if dim != 3 {
        return Err(Error::DimensionPrecondition(format!(
            "target has dimension {dim}, not 3"
        )));
    }
    Ok(())
}

/// Solves `N_d = sum_{k | d} n_{d/k} k^-3` for `n_1..n_D`, given `N_1..N_D`.
pub fn multiple_cover_inverse(big_n: &[Q]) -> Vec<Q> {
    let mut n: Vec<Q> = Vec::with_capacity(big_n.len());
    for d in 1..=big_n.len() {
        let mut v = big_n[d - 1].clone();
        for k in 2..=d {
            if d % k == 0 {
                v -= &n[d / k - 1] * powi(&q(k as i64), -3);
            }
        }
        n.push(v);
    }
    n
}

/// Aspinwall-Morrison inversion, gated on [`multiple_cover_applicable`].
pub fn aspinwall_morrison(g: &GeometrySpec, big_n: &[Q]) -> Result<Vec<Q>> {
    multiple_cover_applicable(g)?;
    Ok(multiple_cover_inverse(big_n))
}

/// `I'` for `E` and `I'_dual` for its dual, built from the same ambient J.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerrePair {
    pub i_prime: QSeries,
    pub i_prime_dual: QSeries,
    pub sign: i32,
}

/// `I'(beta) = J(beta) prod_j prod_{k=1}^{n_j} (c_1(L_j) + k hbar)` and
/// `I'_dual(beta) = (-1)^rk J(beta) prod_j prod_{k=1-n_j}^{0} (-c_1(L_j) + k hbar)`.
pub fn serre_dual_pair(g: &GeometrySpec, max_degree: u32) -> Result<SerrePair> {
    if !g.is_convex() {
        return Err(Error::HypothesisViolated(
            "Serre pair needs a convex bundle".into(),
        ));
    }
    let space = g.ambient();
    let j = match g.external_j() {
        Some(ext) => ext.truncate(max_degree),
        None => j_ambient(space, max_degree),
    };
    let sign = if g.bundle().rank().is_multiple_of(2) { 1 } else { -1 };
    let mut i_prime = QSeries::zero(space, max_degree);
    let mut i_prime_dual = QSeries::zero(space, max_degree);
    for beta in CurveClass::up_to(space.n_factors(), max_degree) {
        let jb = j.coeff(&beta);
        let mut plain = jb.clone();
        let mut dual = jb.scale(&q(sign as i64));
        for line in &g.bundle().lines {
            let c1 = CohClass::linear(space, &line.l);
            let n = line.pairing(&beta);
            plain = &plain * &hbar_product(&c1, 1, n);
            dual = &dual * &hbar_product(&(-&c1), 1 - n, 0);
        }
        i_prime.set(beta.clone(), plain)?;
        i_prime_dual.set(beta, dual)?;
    }
    Ok(SerrePair {
        i_prime,
        i_prime_dual,
        sign,
    })
}

/// Outcome of the joint solve for `phi` and a mirror map with
/// `phi * T(I') = I'_dual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreReport {
    pub phi: ScalarQSeries,
    pub map: MirrorMap,
    /// `phi * T(I') - I'_dual`.
    pub residual: QSeries,
    /// First degree where no choice of the unknowns cancels the residual.
    pub obstructed: Option<CurveClass>,
    /// Degrees where `phi` absorbed a term that `f0` could have taken instead.
    pub ambiguous: Vec<CurveClass>,
}

impl SerreReport {
    pub fn is_solved(&self) -> bool {
        self.obstructed.is_none()
    }

    pub fn needs_map(&self) -> bool {
        !self.map.f1.iter().all(ScalarQSeries::is_zero)
    }

    pub fn needs_phi(&self) -> bool {
        self.phi.terms().any(|(b, _)| !b.is_zero())
    }
}

fn serre_residual(pair: &SerrePair, phi: &ScalarQSeries, map: &MirrorMap) -> Result<QSeries> {
    apply_transform(&pair.i_prime, map)?
        .mul_scalar_series(phi)?
        .try_sub(&pair.i_prime_dual)
}

/// Best-effort solve: keeps going past an obstruction so the report shows
/// every residual term.
///
/// With `phi(0) = sign` and `T(I')(0) = I'(0) = 1`, the degree-`beta`
/// unknowns add `phi_beta + sign * b_beta` at `hbar^0` and
/// `sign * sum_i a_i p_i` at `hbar^-1`. `phi_beta` and `b_beta` are
/// interchangeable; `b_beta` is fixed to zero.
pub fn serre_report(pair: &SerrePair) -> Result<SerreReport> {
    let space = pair.i_prime.space().clone();
    let n = space.n_factors();
    let d = pair.i_prime.max_degree();
    let one = HbarLaurent::one(&space);
    if pair.i_prime.constant() != &one
        || pair.i_prime_dual.constant() != &one.scale(&q(pair.sign as i64))
    {
        return Err(Error::InvalidGeometry(
            "Serre pair must start with 1 and its sign".into(),
        ));
    }
    let sign = q(pair.sign as i64);
    let mut phi = ScalarQSeries::constant(n, d, sign.clone());
    let mut map = MirrorMap::zero(n, d);
    let mut obstructed = None;
    let mut ambiguous = Vec::new();
    let columns: Vec<Vec<Q>> = (0..n)
        .map(|i| CohClass::hyperplane(&space, i).scale(&sign).coeffs().to_vec())
        .collect();
    for level in 1..=d {
        let residual = serre_residual(pair, &phi, &map)?;
        for beta in CurveClass::with_total(n, level) {
            let term = residual.coeff(&beta);
            let zeroth = term.coeff(0);
            let first = term.coeff(-1);
            let phi_b = -zeroth.scalar_part().clone();
            let a = solve_linear(&columns, first.coeffs());
            let others = term.terms().any(|(pow, _)| pow != 0 && pow != -1);
            let zeroth_ok = (&zeroth + &CohClass::scalar(&space, phi_b.clone())).is_zero();
            if (a.is_none() || others || !zeroth_ok) && obstructed.is_none() {
                obstructed = Some(beta.clone());
            }
            if !phi_b.is_zero() {
                ambiguous.push(beta.clone());
            }
            phi.set(beta.clone(), phi_b);
            for (fi, ai) in map.f1.iter_mut().zip(a.unwrap_or_else(|| vec![Q::zero(); n])) {
                fi.set(beta.clone(), -ai);
            }
        }
    }
    let residual = serre_residual(pair, &phi, &map)?;
    if obstructed.is_none() {
        obstructed = residual
            .terms()
            .find(|(_, v)| !v.is_zero())
            .map(|(b, _)| b.clone());
    }
    Ok(SerreReport {
        phi,
        map,
        residual,
        obstructed,
        ambiguous,
    })
}

/// Exact solve; `Infeasible` names the first obstructed degree.
pub fn solve_serre_factor(pair: &SerrePair) -> Result<SerreReport> {
    let report = serre_report(pair)?;
    match &report.obstructed {
        None => Ok(report),
        Some(beta) => Err(Error::Infeasible {
            beta: beta.0.clone(),
            residual: report.residual.coeff(beta).to_string(),
        }),
    }
}

/// Rational sequence `N_1..N_D` from single-factor pipeline output.
pub fn single_factor_sequence(numbers: &[(CurveClass, Q)]) -> Vec<Q> {
    numbers.iter().map(|(_, n)| n.clone()).collect()
}
