use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::Zero;

use crate::cohom::{AmbientSpace, CohClass};
use crate::error::{Error, Result};
use crate::exact::Q;

/// Finite Laurent polynomial in hbar with cohomology-class coefficients.
///
/// `window` is the exponent range the value is known to be exact on; every
/// stored exponent lies inside it and zero coefficients are never stored.
/// Equality compares values only, not windows.
#[derive(Clone)]
pub struct HbarLaurent {
    space: AmbientSpace,
    lo: i32,
    hi: i32,
    terms: BTreeMap<i32, CohClass>,
}

impl HbarLaurent {
    pub fn zero(space: &AmbientSpace) -> Self {
        Self {
            space: space.clone(),
            lo: 0,
            hi: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &AmbientSpace) -> Self {
        Self::from_class(CohClass::one(space))
    }

    /// `c * hbar^0`.
    pub fn from_class(c: CohClass) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * hbar^pow`.
    pub fn monomial(c: CohClass, pow: i32) -> Self {
        let mut out = Self::zero(c.space());
        out.lo = pow;
        out.hi = pow;
        if !c.is_zero() {
            out.terms.insert(pow, c);
        }
        out
    }

    /// `c + k * hbar`, the building block of every hypergeometric product.
    pub fn shifted(c: &CohClass, k: i64) -> Self {
        let space = c.space();
        let mut out = Self::from_class(c.clone());
        out.hi = 1;
        out.insert(1, CohClass::scalar(space, crate::exact::q(k)));
        out
    }

    pub fn from_terms(space: &AmbientSpace, terms: impl IntoIterator<Item = (i32, CohClass)>) -> Self {
        let mut out = Self::zero(space);
        let mut first = true;
        for (pow, c) in terms {
            if first {
                out.lo = pow;
                out.hi = pow;
                first = false;
            }
            out.lo = out.lo.min(pow);
            out.hi = out.hi.max(pow);
            out.add_at(pow, &c);
        }
        out
    }

    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    pub fn window(&self) -> (i32, i32) {
        (self.lo, self.hi)
    }

    /// Nonzero terms, lowest power first.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &CohClass)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, pow: i32) -> CohClass {
        self.terms
            .get(&pow)
            .cloned()
            .unwrap_or_else(|| CohClass::zero(&self.space))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest and highest powers actually present.
    pub fn min_pow(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_pow(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    fn insert(&mut self, pow: i32, c: CohClass) {
        if c.is_zero() {
            self.terms.remove(&pow);
        } else {
            self.terms.insert(pow, c);
        }
    }

    fn add_at(&mut self, pow: i32, c: &CohClass) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&pow) {
            Some(old) => old + c,
            None => c.clone(),
        };
        self.insert(pow, sum);
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(*k, v.scale(c));
        }
        out
    }

    pub fn mul_class(&self, c: &CohClass) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (k, v) in &self.terms {
            out.insert(*k, v * c);
        }
        out
    }

    /// Multiplies by hbar^shift.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            space: self.space.clone(),
            lo: self.lo + shift,
            hi: self.hi + shift,
            terms: self.terms.iter().map(|(k, c)| (k + shift, c.clone())).collect(),
        }
    }

    /// Keeps only the powers in `[lo, hi]`.
    pub fn restrict(&self, lo: i32, hi: i32) -> Self {
        Self {
            space: self.space.clone(),
            lo,
            hi,
            terms: self
                .terms
                .range(lo..=hi)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Drops every power below `floor`.
    pub fn floor_at(&self, floor: i32) -> Self {
        if self.lo >= floor {
            return self.clone();
        }
        self.restrict(floor, self.hi.max(floor))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(&self.space), |acc, _| &acc * self)
    }

    /// Re-embeds every coefficient on another ambient with the same factor count.
    pub fn lift_to(&self, target: &AmbientSpace) -> Result<Self> {
        let mut out = Self::zero(target);
        out.lo = self.lo;
        out.hi = self.hi;
        for (k, c) in &self.terms {
            out.insert(*k, c.lift_to(target)?);
        }
        Ok(out)
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.space == other.space,
            "hbar series on different ambient spaces"
        );
    }
}

impl PartialEq for HbarLaurent {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.terms == other.terms
    }
}

impl Eq for HbarLaurent {}

impl fmt::Debug for HbarLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HbarLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| format!("[{c}]*hbar^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AddAssign<&HbarLaurent> for HbarLaurent {
    fn add_assign(&mut self, rhs: &HbarLaurent) {
        self.check_same(rhs);
        if self.terms.is_empty() && self.lo == 0 && self.hi == 0 {
            self.lo = rhs.lo;
            self.hi = rhs.hi;
        } else {
            self.lo = self.lo.min(rhs.lo);
            self.hi = self.hi.max(rhs.hi);
        }
        for (k, c) in &rhs.terms {
            self.add_at(*k, c);
        }
    }
}

impl Add for &HbarLaurent {
    type Output = HbarLaurent;
    fn add(self, rhs: &HbarLaurent) -> HbarLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &HbarLaurent {
    type Output = HbarLaurent;
    fn neg(self) -> HbarLaurent {
        HbarLaurent {
            space: self.space.clone(),
            lo: self.lo,
            hi: self.hi,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Sub for &HbarLaurent {
    type Output = HbarLaurent;
    fn sub(self, rhs: &HbarLaurent) -> HbarLaurent {
        self + &(-rhs)
    }
}

impl Mul for &HbarLaurent {
    type Output = HbarLaurent;
    fn mul(self, rhs: &HbarLaurent) -> HbarLaurent {
        self.check_same(rhs);
        let mut out = HbarLaurent::zero(&self.space);
        out.lo = self.lo + rhs.lo;
        out.hi = self.hi + rhs.hi;
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_at(i + j, &(a * b));
            }
        }
        out
    }
}

/// Product of two hbar-Laurent polynomials.
pub fn hl_mul(a: &HbarLaurent, b: &HbarLaurent) -> HbarLaurent {
    a * b
}

/// Inverse as an expansion in 1/hbar, kept on `[lo, hi]`.
///
/// The coefficient of the highest hbar power of `a` must have a nonzero
/// scalar part. If it is `c * hbar^n`, the expansion starts at `hbar^{-n}`
/// and is computed down to `hbar^lo`; when every lower coefficient of `a`
/// is nilpotent the expansion is finite and a deep enough `lo` makes the
/// result exact.
pub fn hl_invert(a: &HbarLaurent, lo: i32, hi: i32) -> Result<HbarLaurent> {
    let space = a.space().clone();
    let (n, lead) = match a.terms.iter().next_back() {
        Some((n, c)) => (*n, c),
        None => return Err(Error::NonInvertible),
    };
    if lead.scalar_part().is_zero() {
        return Err(Error::NonInvertible);
    }
    let lead_inv = lead.inverse()?;
    let start = -n;
    let mut out: BTreeMap<i32, CohClass> = BTreeMap::new();
    let mut m = start;
    while m >= lo {
        // coefficient of hbar^{m+n} in a*b must be 1 at m = -n, else 0
        let mut acc = if m == start {
            CohClass::one(&space)
        } else {
            CohClass::zero(&space)
        };
        for (j, aj) in a.terms.range(..n) {
            if let Some(b) = out.get(&(m + n - j)) {
                acc -= &(aj * b);
            }
        }
        let bm = &lead_inv * &acc;
        if !bm.is_zero() {
            out.insert(m, bm);
        }
        m -= 1;
    }
    let full = HbarLaurent {
        space,
        lo,
        hi: start.max(lo),
        terms: out,
    };
    Ok(full.restrict(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn p(r: u32) -> AmbientSpace {
        AmbientSpace::projective(r).unwrap()
    }

    fn h(s: &AmbientSpace) -> CohClass {
        CohClass::hyperplane(s, 0)
    }

    #[test]
    fn products() {
        let s = p(4);
        let plus = HbarLaurent::shifted(&h(&s), 1);
        let minus = HbarLaurent::shifted(&h(&s), -1);
        let expected = HbarLaurent::from_terms(
            &s,
            [(0, h(&s).pow(2)), (2, CohClass::scalar(&s, q(-1)))],
        );
        assert_eq!(hl_mul(&plus, &minus).terms().collect::<Vec<_>>(), expected.terms().collect::<Vec<_>>());

        let one = HbarLaurent::one(&s);
        assert_eq!(hl_mul(&plus, &one), plus);

        let five_h = HbarLaurent::from_class(h(&s).scale(&q(5)));
        let five_h_plus = HbarLaurent::shifted(&h(&s).scale(&q(5)), 1);
        let prod = hl_mul(&five_h, &five_h_plus);
        assert_eq!(prod.coeff(0), h(&s).pow(2).scale(&q(25)));
        assert_eq!(prod.coeff(1), h(&s).scale(&q(5)));
        assert_eq!(prod.window(), (0, 1));
    }

    #[test]
    fn inversion_examples() {
        let s = p(1);
        let sq = HbarLaurent::shifted(&h(&s), 1).pow(2);
        let inv = hl_invert(&sq, -3, -2).unwrap();
        assert_eq!(inv.coeff(-2), CohClass::one(&s));
        assert_eq!(inv.coeff(-3), h(&s).scale(&q(-2)));
        assert_eq!(inv.terms().count(), 2);

        let one = HbarLaurent::one(&s);
        assert_eq!(hl_invert(&one, -5, 0).unwrap().terms().collect::<Vec<_>>(), one.terms().collect::<Vec<_>>());

        let five_h = HbarLaurent::from_class(h(&p(4)).scale(&q(5)));
        assert_eq!(hl_invert(&five_h, -5, 0), Err(Error::NonInvertible));
        assert_eq!(hl_invert(&HbarLaurent::zero(&s), -5, 0), Err(Error::NonInvertible));
    }

    #[test]
    fn non_nilpotent_inverse_truncates() {
        // 1/(hbar + 1) = hbar^-1 - hbar^-2 + hbar^-3 - ...
        let s = p(2);
        let a = HbarLaurent::shifted(&CohClass::one(&s), 1);
        let inv = hl_invert(&a, -4, -1).unwrap();
        for k in 1..=4 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(inv.coeff(-k), CohClass::scalar(&s, q(sign)));
        }
        let prod = (&a * &inv).restrict(-3, 0);
        assert_eq!(prod, HbarLaurent::one(&s).restrict(-3, 0));
    }
}
