use std::collections::BTreeMap;
use std::fmt;

use crate::cohom::{AmbientSpace, CohClass, CurveClass};
use crate::error::{Error, Result};
use crate::series::laurent::HbarLaurent;
use crate::series::scalar::{check_shift_vector, ScalarQSeries};

/// Default truncation degree.
pub const DEFAULT_MAX_DEGREE: u32 = 6;

/// Lowest hbar power any operation is allowed to keep:
/// `-((max r_i + 1) * D + sum r_i + 3)`.
pub fn default_hbar_floor(space: &AmbientSpace, max_degree: u32) -> i32 {
    let rmax = *space.factors().iter().max().expect("non-empty ambient") as i32;
    -((rmax + 1) * max_degree as i32 + space.dim() as i32 + 3)
}

/// Truncated series `sum_beta q^beta S(beta)` with hbar-Laurent coefficients.
///
/// The exponential prefactor `exp((t_0 + p.t)/hbar)` is never stored.
/// Equality ignores the hbar floor.
#[derive(Clone)]
pub struct QSeries {
    space: AmbientSpace,
    max_degree: u32,
    hbar_floor: i32,
    terms: BTreeMap<CurveClass, HbarLaurent>,
}

impl QSeries {
    /// The zero series; the beta = 0 slot is present and zero.
    pub fn zero(space: &AmbientSpace, max_degree: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(CurveClass::zero(space.n_factors()), HbarLaurent::zero(space));
        Self {
            space: space.clone(),
            max_degree,
            hbar_floor: default_hbar_floor(space, max_degree),
            terms,
        }
    }

    pub fn one(space: &AmbientSpace, max_degree: u32) -> Self {
        let mut out = Self::zero(space, max_degree);
        out.set(CurveClass::zero(space.n_factors()), HbarLaurent::one(space))
            .expect("degree zero always fits");
        out
    }

    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn hbar_floor(&self) -> i32 {
        self.hbar_floor
    }

    /// Overrides the lowest hbar power kept by products.
    pub fn with_hbar_floor(mut self, floor: i32) -> Self {
        self.hbar_floor = floor;
        self
    }

    pub fn set(&mut self, beta: CurveClass, value: HbarLaurent) -> Result<()> {
        if beta.0.len() != self.space.n_factors() {
            return Err(Error::InvalidGeometry(format!(
                "curve class {:?} does not match ambient {:?}",
                beta.0,
                self.space.factors()
            )));
        }
        if beta.total() > self.max_degree {
            return Err(Error::TruncationMismatch {
                left: self.max_degree,
                right: beta.total(),
            });
        }
        if value.space() != &self.space {
            return Err(Error::AmbientMismatch);
        }
        if value.is_zero() && !beta.is_zero() {
            self.terms.remove(&beta);
        } else {
            self.terms.insert(beta, value);
        }
        Ok(())
    }

    pub fn get(&self, beta: &CurveClass) -> Option<&HbarLaurent> {
        self.terms.get(beta)
    }

    /// Coefficient of q^beta, zero if absent.
    pub fn coeff(&self, beta: &CurveClass) -> HbarLaurent {
        self.terms
            .get(beta)
            .cloned()
            .unwrap_or_else(|| HbarLaurent::zero(&self.space))
    }

    /// Stored terms in solving order, beta = 0 first.
    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &HbarLaurent)> {
        self.terms.iter()
    }

    pub fn constant(&self) -> &HbarLaurent {
        &self.terms[&CurveClass::zero(self.space.n_factors())]
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        Self {
            space: self.space.clone(),
            max_degree,
            hbar_floor: default_hbar_floor(&self.space, max_degree).max(self.hbar_floor),
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.total() <= max_degree)
                .map(|(b, v)| (b.clone(), v.clone()))
                .collect(),
        }
    }

    fn add_at(&mut self, beta: &CurveClass, value: &HbarLaurent) {
        if value.is_zero() || beta.total() > self.max_degree {
            return;
        }
        let floor = self.hbar_floor;
        let entry = self
            .terms
            .entry(beta.clone())
            .or_insert_with(|| HbarLaurent::zero(&self.space));
        *entry += &value.floor_at(floor);
        if entry.is_zero() && !beta.is_zero() {
            self.terms.remove(beta);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::AmbientMismatch);
        }
        if self.max_degree != other.max_degree {
            return Err(Error::TruncationMismatch {
                left: self.max_degree,
                right: other.max_degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.hbar_floor = self.hbar_floor.min(other.hbar_floor);
        for (b, v) in &other.terms {
            out.add_at(b, v);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&crate::exact::q(-1)))
    }

    pub fn scale(&self, c: &crate::exact::Q) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.scale(c);
        }
        out.terms.retain(|b, v| b.is_zero() || !v.is_zero());
        out
    }

    /// Termwise product with a fixed cohomology class.
    pub fn mul_class(&self, c: &CohClass) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul_class(c);
        }
        out.terms.retain(|b, v| b.is_zero() || !v.is_zero());
        out
    }

    /// Cauchy product with a scalar series.
    pub fn mul_scalar_series(&self, s: &ScalarQSeries) -> Result<Self> {
        if s.max_degree() != self.max_degree {
            return Err(Error::TruncationMismatch {
                left: self.max_degree,
                right: s.max_degree(),
            });
        }
        let mut out = Self::zero(&self.space, self.max_degree).with_hbar_floor(self.hbar_floor);
        for (b1, v) in &self.terms {
            for (b2, c) in s.terms() {
                if b1.total() + b2.total() <= self.max_degree {
                    out.add_at(&(b1 + b2), &v.scale(c));
                }
            }
        }
        Ok(out)
    }

    /// Re-embeds every coefficient on another ambient with the same factor count.
    pub fn lift_to(&self, target: &AmbientSpace) -> Result<Self> {
        let mut out = Self::zero(target, self.max_degree);
        for (b, v) in &self.terms {
            out.set(b.clone(), v.lift_to(target)?)?;
        }
        Ok(out)
    }

    /// Largest hbar power present in any term, if any.
    pub fn max_hbar_pow(&self) -> Option<i32> {
        self.terms.values().filter_map(HbarLaurent::max_pow).max()
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.max_degree == other.max_degree && self.terms == other.terms
    }
}

impl Eq for QSeries {}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QSeries(D={}) {{", self.max_degree)?;
        for (b, v) in &self.terms {
            writeln!(f, "  q^{:?}: {v}", b.0)?;
        }
        write!(f, "}}")
    }
}

/// Cauchy product truncated at the common degree D.
pub fn qs_mul(a: &QSeries, b: &QSeries) -> Result<QSeries> {
    a.check_compatible(b)?;
    let mut out = QSeries::zero(&a.space, a.max_degree).with_hbar_floor(a.hbar_floor.min(b.hbar_floor));
    for (b1, v1) in &a.terms {
        for (b2, v2) in &b.terms {
            if b1.total() + b2.total() <= a.max_degree {
                out.add_at(&(b1 + b2), &(v1 * v2));
            }
        }
    }
    Ok(out)
}

/// Replaces q_i by q_i * exp(f1_i(q)); the q^beta term picks up
/// exp(sum_i beta_i f1_i).
pub fn qs_substitute(s: &QSeries, f1: &[ScalarQSeries]) -> Result<QSeries> {
    check_shift_vector(f1, s.space.n_factors(), s.max_degree)?;
    let mut out = QSeries::zero(&s.space, s.max_degree).with_hbar_floor(s.hbar_floor);
    for (beta, v) in &s.terms {
        let room = s.max_degree - beta.total();
        let factor = ScalarQSeries::exp_pairing(beta, f1, room)?;
        for (gamma, c) in factor.terms() {
            out.add_at(&(beta + gamma), &v.scale(c));
        }
    }
    Ok(out)
}
