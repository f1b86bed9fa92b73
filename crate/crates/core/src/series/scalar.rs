use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::cohom::CurveClass;
use crate::error::{Error, Result};
use crate::exact::{q, Q};

/// Truncated power series in q_1..q_N with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarQSeries {
    nvars: usize,
    max_degree: u32,
    coeffs: BTreeMap<CurveClass, Q>,
}

impl ScalarQSeries {
    pub fn zero(nvars: usize, max_degree: u32) -> Self {
        Self {
            nvars,
            max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, max_degree: u32, c: Q) -> Self {
        let mut out = Self::zero(nvars, max_degree);
        out.set(CurveClass::zero(nvars), c);
        out
    }

    pub fn one(nvars: usize, max_degree: u32) -> Self {
        Self::constant(nvars, max_degree, Q::one())
    }

    /// `c * q^beta`, or zero if beta is beyond the truncation.
    pub fn monomial(max_degree: u32, beta: CurveClass, c: Q) -> Self {
        let mut out = Self::zero(beta.0.len(), max_degree);
        out.set(beta, c);
        out
    }

    pub fn from_coeffs(
        nvars: usize,
        max_degree: u32,
        coeffs: impl IntoIterator<Item = (CurveClass, Q)>,
    ) -> Self {
        let mut out = Self::zero(nvars, max_degree);
        for (b, c) in coeffs {
            let old = out.get(&b);
            out.set(b, old + c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn get(&self, beta: &CurveClass) -> Q {
        self.coeffs.get(beta).cloned().unwrap_or_else(Q::zero)
    }

    /// Sets a coefficient; terms beyond the truncation are ignored.
    pub fn set(&mut self, beta: CurveClass, c: Q) {
        assert_eq!(beta.0.len(), self.nvars, "curve class has wrong arity");
        if beta.total() > self.max_degree {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&beta);
        } else {
            self.coeffs.insert(beta, c);
        }
    }

    /// Nonzero coefficients in solving order.
    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &Q)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> Q {
        self.get(&CurveClass::zero(self.nvars))
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        Self {
            nvars: self.nvars,
            max_degree,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(b, _)| b.total() <= max_degree)
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_coeffs(
            self.nvars,
            self.max_degree,
            self.coeffs.iter().map(|(b, x)| (b.clone(), x * c)),
        )
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.max_degree != other.max_degree {
            return Err(Error::TruncationMismatch {
                left: self.max_degree,
                right: other.max_degree,
            });
        }
        assert_eq!(self.nvars, other.nvars, "series in different variables");
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            let s = out.get(b) + c;
            out.set(b.clone(), s);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.nvars, self.max_degree);
        for (b1, c1) in &self.coeffs {
            for (b2, c2) in &other.coeffs {
                if b1.total() + b2.total() > self.max_degree {
                    continue;
                }
                let b = b1 + b2;
                let s = out.get(&b) + c1 * c2;
                out.set(b, s);
            }
        }
        Ok(out)
    }

    /// exp of a series with zero constant term, as the finite sum of a^k/k!.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut sum = Self::one(self.nvars, self.max_degree);
        let mut term = sum.clone();
        for k in 1..=self.max_degree {
            term = term.try_mul(self)?.scale(&q(k as i64).recip());
            if term.is_zero() {
                break;
            }
            sum = sum.try_add(&term)?;
        }
        Ok(sum)
    }

    /// log of a series with constant term one.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != Q::one() {
            return Err(Error::ConstantTermNotOne);
        }
        let u = self.try_add(&Self::one(self.nvars, self.max_degree).scale(&q(-1)))?;
        let mut sum = Self::zero(self.nvars, self.max_degree);
        let mut power = Self::one(self.nvars, self.max_degree);
        for k in 1..=self.max_degree {
            power = power.try_mul(&u)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            sum = sum.try_add(&power.scale(&Q::new(sign.into(), (k as i64).into())))?;
        }
        Ok(sum)
    }

    /// `exp(<beta, g>)` for a vector of series g with zero constant terms.
    pub(crate) fn exp_pairing(beta: &CurveClass, g: &[Self], max_degree: u32) -> Result<Self> {
        let n = beta.0.len();
        let mut arg = Self::zero(n, max_degree);
        for (&d, gi) in beta.degrees().iter().zip(g) {
            if d != 0 {
                arg = arg.try_add(&gi.truncate(max_degree).scale(&q(d as i64)))?;
            }
        }
        arg.exp()
    }

    /// Substitutes q_i -> q_i * exp(g_i(q)).
    pub fn substitute(&self, g: &[Self]) -> Result<Self> {
        check_shift_vector(g, self.nvars, self.max_degree)?;
        let mut out = Self::zero(self.nvars, self.max_degree);
        for (beta, c) in &self.coeffs {
            let room = self.max_degree - beta.total();
            let factor = Self::exp_pairing(beta, g, room)?;
            for (gamma, x) in factor.terms() {
                let b = beta + gamma;
                let s = out.get(&b) + c * x;
                out.set(b, s);
            }
        }
        Ok(out)
    }
}

pub(crate) fn check_shift_vector(g: &[ScalarQSeries], nvars: usize, max_degree: u32) -> Result<()> {
    assert_eq!(g.len(), nvars, "need one shift series per variable");
    for gi in g {
        if !gi.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if gi.max_degree() != max_degree {
            return Err(Error::TruncationMismatch {
                left: max_degree,
                right: gi.max_degree(),
            });
        }
    }
    Ok(())
}

/// Exponential of a scalar series with zero constant term.
pub fn qs_exp(a: &ScalarQSeries) -> Result<ScalarQSeries> {
    a.exp()
}

/// Shift vector `g` undoing `q -> q exp(f(q))`: substituting `f` and then
/// `g` is the identity through the truncation degree.
pub fn inverse_shift(f: &[ScalarQSeries]) -> Result<Vec<ScalarQSeries>> {
    let Some(first) = f.first() else {
        return Ok(Vec::new());
    };
    let (n, d) = (first.nvars(), first.max_degree());
    check_shift_vector(f, n, d)?;
    // g = -f(Q exp(g)), iterated; each pass fixes one more degree
    let mut g: Vec<ScalarQSeries> = f.iter().map(|_| ScalarQSeries::zero(n, d)).collect();
    for _ in 0..d {
        g = f
            .iter()
            .map(|fi| Ok(fi.substitute(&g)?.scale(&q(-1))))
            .collect::<Result<_>>()?;
    }
    Ok(g)
}

impl fmt::Debug for ScalarQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(b, c)| format!("({c})q^{:?}", b.0))
            .collect();
        write!(f, "{} + O(q^{})", parts.join(" + "), self.max_degree + 1)
    }
}

impl Add for &ScalarQSeries {
    type Output = ScalarQSeries;
    fn add(self, rhs: &ScalarQSeries) -> ScalarQSeries {
        self.try_add(rhs).expect("mixed truncation")
    }
}

impl Sub for &ScalarQSeries {
    type Output = ScalarQSeries;
    fn sub(self, rhs: &ScalarQSeries) -> ScalarQSeries {
        self + &(-rhs)
    }
}

impl Neg for &ScalarQSeries {
    type Output = ScalarQSeries;
    fn neg(self) -> ScalarQSeries {
        self.scale(&q(-1))
    }
}

impl Mul for &ScalarQSeries {
    type Output = ScalarQSeries;
    fn mul(self, rhs: &ScalarQSeries) -> ScalarQSeries {
        self.try_mul(rhs).expect("mixed truncation")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn qvar(d: u32) -> ScalarQSeries {
        ScalarQSeries::monomial(d, CurveClass(vec![1]), q(1))
    }

    #[test]
    fn exp_examples() {
        let zero = ScalarQSeries::zero(1, 4);
        assert_eq!(qs_exp(&zero).unwrap(), ScalarQSeries::one(1, 4));

        let e = qs_exp(&qvar(3)).unwrap();
        let expected = ScalarQSeries::from_coeffs(
            1,
            3,
            [
                (CurveClass(vec![0]), q(1)),
                (CurveClass(vec![1]), q(1)),
                (CurveClass(vec![2]), frac(1, 2)),
                (CurveClass(vec![3]), frac(1, 6)),
            ],
        );
        assert_eq!(e, expected);

        assert_eq!(
            qs_exp(&ScalarQSeries::one(1, 3)),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn mixed_truncation_rejected() {
        assert_eq!(
            qvar(2).try_mul(&qvar(3)),
            Err(Error::TruncationMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn substitution_of_q() {
        // q -> q e^q at D = 2 gives q + q^2
        let s = qvar(2).substitute(&[qvar(2)]).unwrap();
        assert_eq!(
            s,
            ScalarQSeries::from_coeffs(1, 2, [(CurveClass(vec![1]), q(1)), (CurveClass(vec![2]), q(1))])
        );
    }

    #[test]
    fn inverse_shift_undoes_substitution() {
        let f = vec![ScalarQSeries::from_coeffs(
            1,
            5,
            [(CurveClass(vec![1]), q(3)), (CurveClass(vec![2]), frac(-1, 2))],
        )];
        let g = inverse_shift(&f).unwrap();
        let x = qvar(5);
        let back = x.substitute(&f).unwrap().substitute(&g).unwrap();
        assert_eq!(back, x);
    }
}
