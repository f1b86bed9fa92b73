//! Exact arithmetic in H*(P^{r_1} x ... x P^{r_N}) = Q[p_1..p_N]/(p_i^{r_i+1}).
//!
//! Classes are stored densely, one rational per monomial, in graded
//! lexicographic order: total degree first, then `p_1` before `p_2`. The same
//! order is used when classes are written out.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{q, Q};

#[derive(Debug)]
struct SpaceData {
    factors: Vec<u32>,
    /// Monomial exponents in graded lexicographic order.
    monomials: Vec<Vec<u32>>,
    /// Mixed-radix index of an exponent vector -> position in `monomials`.
    position: Vec<usize>,
    /// `products[i * n + j]` is the position of monomial i times monomial j.
    products: Vec<Option<usize>>,
    top: usize,
}

/// The ambient product of projective spaces; a cheap shared handle.
#[derive(Clone)]
pub struct AmbientSpace(Arc<SpaceData>);

impl AmbientSpace {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidAmbient("need at least one factor".into()));
        }
        if factors.contains(&0) {
            return Err(Error::InvalidAmbient(format!(
                "every factor dimension must be >= 1, got {factors:?}"
            )));
        }
        let total: usize = factors.iter().map(|&r| r as usize + 1).product();
        let mut monomials: Vec<Vec<u32>> = (0..total).map(|k| unrank(&factors, k)).collect();
        monomials.sort_by(|a, b| graded_cmp(a, b));
        let mut position = vec![0; total];
        for (pos, m) in monomials.iter().enumerate() {
            position[rank(&factors, m)] = pos;
        }
        let mut products = vec![None; total * total];
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if sum.iter().zip(&factors).all(|(e, r)| e <= r) {
                    products[i * total + j] = Some(position[rank(&factors, &sum)]);
                }
            }
        }
        let top = position[rank(&factors, &factors)];
        Ok(Self(Arc::new(SpaceData {
            factors,
            monomials,
            position,
            products,
            top,
        })))
    }

    /// Single projective space P^r.
    pub fn projective(r: u32) -> Result<Self> {
        Self::new(vec![r])
    }

    pub fn factors(&self) -> &[u32] {
        &self.0.factors
    }

    /// Number of projective factors N.
    pub fn n_factors(&self) -> usize {
        self.0.factors.len()
    }

    /// Complex dimension sum r_i.
    pub fn dim(&self) -> u32 {
        self.0.factors.iter().sum()
    }

    /// Number of basis monomials prod (r_i + 1).
    pub fn rank(&self) -> usize {
        self.0.monomials.len()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.0.monomials
    }

    /// Position of an exponent vector in the basis.
    pub fn index_of(&self, exp: &[u32]) -> Result<usize> {
        if exp.len() != self.n_factors() || exp.iter().zip(self.factors()).any(|(e, r)| e > r) {
            return Err(Error::ExponentOutOfRange {
                exp: exp.to_vec(),
                factors: self.factors().to_vec(),
            });
        }
        Ok(self.0.position[rank(self.factors(), exp)])
    }

    fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        self.0.products[i * self.rank() + j]
    }
}

impl PartialEq for AmbientSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.factors == other.0.factors
    }
}

impl Eq for AmbientSpace {}

impl fmt::Debug for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AmbientSpace{:?}", self.factors())
    }
}

fn rank(factors: &[u32], exp: &[u32]) -> usize {
    exp.iter()
        .zip(factors)
        .fold(0, |acc, (&e, &r)| acc * (r as usize + 1) + e as usize)
}

fn unrank(factors: &[u32], mut k: usize) -> Vec<u32> {
    let mut exp = vec![0; factors.len()];
    for (slot, &r) in exp.iter_mut().zip(factors).rev() {
        let base = r as usize + 1;
        *slot = (k % base) as u32;
        k /= base;
    }
    exp
}

/// Total degree first, then the larger leading exponent first.
fn graded_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

/// Effective curve class, a vector of non-negative degrees.
///
/// Ordered by total degree, then with larger leading degree first, so that
/// a `BTreeMap<CurveClass, _>` iterates in the order series are solved.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass(pub Vec<u32>);

impl CurveClass {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    /// All classes with `n` components and total degree exactly `total`.
    pub fn with_total(n: usize, total: u32) -> Vec<Self> {
        fn rec(n: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<CurveClass>) {
            if n == 1 {
                prefix.push(total);
                out.push(CurveClass(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=total).rev() {
                prefix.push(first);
                rec(n - 1, total - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, total, &mut Vec::new(), &mut out);
        out
    }

    /// All classes with total degree at most `max`, in solving order.
    pub fn up_to(n: usize, max: u32) -> Vec<Self> {
        (0..=max).flat_map(|t| Self::with_total(n, t)).collect()
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for CurveClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CurveClass {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_cmp(&self.0, &other.0)
    }
}

/// A line bundle O(l_1, ..., l_N) on the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundle {
    pub l: Vec<i64>,
}

impl LineBundle {
    pub fn new(l: Vec<i64>) -> Self {
        Self { l }
    }

    /// <c_1(L), beta>.
    pub fn pairing(&self, beta: &CurveClass) -> i64 {
        self.l
            .iter()
            .zip(beta.degrees())
            .map(|(l, &d)| l * d as i64)
            .sum()
    }

    pub fn dual(&self) -> Self {
        Self::new(self.l.iter().map(|x| -x).collect())
    }
}

/// Split bundle, a direct sum of line bundles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BundleSpec {
    pub lines: Vec<LineBundle>,
}

impl BundleSpec {
    pub fn new(lines: Vec<LineBundle>) -> Self {
        Self { lines }
    }

    pub fn from_degrees(degrees: &[&[i64]]) -> Self {
        Self::new(degrees.iter().map(|l| LineBundle::new(l.to_vec())).collect())
    }

    pub fn rank(&self) -> usize {
        self.lines.len()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().cloned());
        Self::new(lines)
    }
}

/// Element of H*(P) with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct CohClass {
    space: AmbientSpace,
    coeffs: Vec<Q>,
}

impl CohClass {
    pub fn zero(space: &AmbientSpace) -> Self {
        Self {
            space: space.clone(),
            coeffs: vec![Q::zero(); space.rank()],
        }
    }

    pub fn scalar(space: &AmbientSpace, c: Q) -> Self {
        let mut out = Self::zero(space);
        out.coeffs[0] = c;
        out
    }

    pub fn one(space: &AmbientSpace) -> Self {
        Self::scalar(space, Q::one())
    }

    pub fn monomial(space: &AmbientSpace, exp: &[u32], c: Q) -> Result<Self> {
        let mut out = Self::zero(space);
        out.coeffs[space.index_of(exp)?] = c;
        Ok(out)
    }

    /// The hyperplane class p_i (0-based factor index).
    pub fn hyperplane(space: &AmbientSpace, i: usize) -> Self {
        Self::linear(space, &unit(space.n_factors(), i))
    }

    /// sum_i l_i p_i, i.e. c_1(O(l)).
    pub fn linear(space: &AmbientSpace, l: &[i64]) -> Self {
        let mut out = Self::zero(space);
        for (i, &li) in l.iter().enumerate() {
            if li != 0 {
                let mut e = vec![0; space.n_factors()];
                e[i] = 1;
                out.coeffs[space.index_of(&e).expect("degree-one monomial")] = q(li);
            }
        }
        out
    }

    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    /// Coefficients in basis order, see [`AmbientSpace::monomials`].
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: &[u32]) -> Q {
        self.space
            .index_of(exp)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(|_| Q::zero())
    }

    /// Nonzero terms as (exponent, coefficient), in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Q)> {
        self.space
            .monomials()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scalar_part(&self) -> &Q {
        &self.coeffs[0]
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(&self.space), |acc, _| &acc * self)
    }

    /// Inverse of a class with nonzero scalar part; the rest is nilpotent.
    pub fn inverse(&self) -> Result<Self> {
        let s = self.scalar_part();
        if s.is_zero() {
            return Err(Error::NonInvertible);
        }
        let s_inv = s.recip();
        let mut nil = self.scale(&s_inv);
        nil.coeffs[0] = Q::zero();
        let neg_nil = -&nil;
        // s^{-1} * sum_k (-n)^k, which stops once the power vanishes
        let mut term = Self::one(&self.space);
        let mut sum = Self::one(&self.space);
        loop {
            term = &term * &neg_nil;
            if term.is_zero() {
                break;
            }
            sum += &term;
        }
        Ok(sum.scale(&s_inv))
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn top_degree(&self) -> Option<u32> {
        self.terms().map(|(e, _)| e.iter().sum::<u32>()).max()
    }

    /// Re-embeds the class on another ambient with the same number of factors.
    pub fn lift_to(&self, target: &AmbientSpace) -> Result<Self> {
        if target.n_factors() != self.space.n_factors() {
            return Err(Error::AmbientMismatch);
        }
        let mut out = Self::zero(target);
        for (e, c) in self.terms() {
            out.coeffs[target.index_of(e)?] = c.clone();
        }
        Ok(out)
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.space == other.space,
            "cohomology classes on different ambient spaces: {:?} vs {:?}",
            self.space,
            other.space
        );
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*p{}", i + 1)?,
                    _ => write!(f, "*p{}^{k}", i + 1)?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl AddAssign<&CohClass> for CohClass {
    fn add_assign(&mut self, rhs: &CohClass) {
        self.check_same(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CohClass> for CohClass {
    fn sub_assign(&mut self, rhs: &CohClass) {
        self.check_same(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Cup product. Panics when the operands live on different spaces; use
/// [`ring_mul`] for a checked version.
impl Mul for &CohClass {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        self.check_same(rhs);
        let space = &self.space;
        let mut out = CohClass::zero(space);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = space.product_index(i, j) {
                    out.coeffs[k] += a * b;
                }
            }
        }
        out
    }
}

/// Cup product with the nilpotent truncation of the ring.
pub fn ring_mul(a: &CohClass, b: &CohClass, space: &AmbientSpace) -> Result<CohClass> {
    if a.space() != space || b.space() != space {
        return Err(Error::AmbientMismatch);
    }
    Ok(a * b)
}

/// Coefficient of the point class prod p_i^{r_i}.
pub fn integrate(space: &AmbientSpace, c: &CohClass) -> Q {
    if c.space() != space {
        return Q::zero();
    }
    c.coeffs[space.0.top].clone()
}

/// c_top of a split bundle: the product of the first Chern classes.
pub fn euler_class(space: &AmbientSpace, bundle: &BundleSpec) -> CohClass {
    bundle
        .lines
        .iter()
        .fold(CohClass::one(space), |acc, line| {
            &acc * &CohClass::linear(space, &line.l)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    fn p4() -> AmbientSpace {
        AmbientSpace::projective(4).unwrap()
    }

    #[test]
    fn rejects_bad_ambients() {
        assert!(AmbientSpace::new(vec![]).is_err());
        assert!(AmbientSpace::new(vec![2, 0]).is_err());
    }

    #[test]
    fn graded_lex_basis() {
        let s = AmbientSpace::new(vec![1, 2]).unwrap();
        let order: Vec<Vec<u32>> = s.monomials().to_vec();
        assert_eq!(
            order,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![1, 1],
                vec![0, 2],
                vec![1, 2]
            ]
        );
    }

    #[test]
    fn nilpotent_products() {
        let p1 = AmbientSpace::projective(1).unwrap();
        let h = CohClass::hyperplane(&p1, 0);
        assert!((&h * &h).is_zero());

        let s = p4();
        let h2 = CohClass::hyperplane(&s, 0).pow(2);
        assert_eq!(&h2 * &h2, CohClass::monomial(&s, &[4], q(1)).unwrap());

        let pp = AmbientSpace::new(vec![1, 1]).unwrap();
        let sum = CohClass::linear(&pp, &[1, 1]);
        assert_eq!(&sum * &sum, CohClass::monomial(&pp, &[1, 1], q(2)).unwrap());
    }

    #[test]
    fn mismatched_spaces() {
        let a = CohClass::one(&p4());
        let b = CohClass::one(&AmbientSpace::projective(3).unwrap());
        assert_eq!(ring_mul(&a, &b, &p4()), Err(Error::AmbientMismatch));
    }

    #[test]
    fn integration() {
        let s = p4();
        let h = CohClass::hyperplane(&s, 0);
        assert_eq!(integrate(&s, &h.pow(4)), q(1));
        assert_eq!(integrate(&s, &h.pow(3)), q(0));
        let pp = AmbientSpace::new(vec![1, 1]).unwrap();
        let pt = &CohClass::hyperplane(&pp, 0) * &CohClass::hyperplane(&pp, 1);
        assert_eq!(integrate(&pp, &pt), q(1));
    }

    #[test]
    fn euler_classes() {
        let s = p4();
        let e = euler_class(&s, &BundleSpec::from_degrees(&[&[5]]));
        assert_eq!(e, CohClass::linear(&s, &[5]));

        let p1 = AmbientSpace::projective(1).unwrap();
        let e = euler_class(&p1, &BundleSpec::from_degrees(&[&[-1], &[-1]]));
        assert!(e.is_zero());

        let p3 = AmbientSpace::projective(3).unwrap();
        let e = euler_class(&p3, &BundleSpec::from_degrees(&[&[2], &[3]]));
        assert_eq!(e, CohClass::monomial(&p3, &[2], q(6)).unwrap());
    }

    #[test]
    fn inverse_of_unit() {
        let s = AmbientSpace::new(vec![2, 1]).unwrap();
        let x = &CohClass::scalar(&s, q(3)) + &CohClass::linear(&s, &[2, -1]);
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, CohClass::one(&s));
        assert_eq!(
            CohClass::linear(&s, &[5, 0]).inverse(),
            Err(Error::NonInvertible)
        );
    }

    #[test]
    fn monomial_gram_matrix_is_a_permutation() {
        for factors in [vec![4], vec![1, 1], vec![2, 3], vec![1, 1, 2]] {
            let s = AmbientSpace::new(factors).unwrap();
            let basis: Vec<CohClass> = s
                .monomials()
                .iter()
                .map(|e| CohClass::monomial(&s, e, q(1)).unwrap())
                .collect();
            for a in &basis {
                let row: Vec<Q> = basis.iter().map(|b| integrate(&s, &(a * b))).collect();
                assert_eq!(row.iter().filter(|x| **x == q(1)).count(), 1);
                assert_eq!(row.iter().filter(|x| x.is_zero()).count(), basis.len() - 1);
            }
        }
    }

    #[test]
    fn curve_class_order() {
        let all = CurveClass::up_to(2, 2);
        let raw: Vec<Vec<u32>> = all.iter().map(|c| c.0.clone()).collect();
        assert_eq!(
            raw,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    fn arb_class(space: AmbientSpace) -> impl Strategy<Value = CohClass> {
        let n = space.rank();
        proptest::collection::vec(-6i64..=6, n).prop_map(move |v| {
            let mut c = CohClass::zero(&space);
            for (slot, x) in c.coeffs.iter_mut().zip(v) {
                *slot = q(x);
            }
            c
        })
    }

    fn p2xp1() -> AmbientSpace {
        AmbientSpace::new(vec![2, 1]).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn ring_axioms(
            a in arb_class(p2xp1()),
            b in arb_class(p2xp1()),
            c in arb_class(p2xp1()),
        ) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn pairing_is_symmetric_bilinear(
            a in arb_class(p2xp1()),
            b in arb_class(p2xp1()),
            c in arb_class(p2xp1()),
        ) {
            let s = p2xp1();
            prop_assert_eq!(integrate(&s, &(&a * &b)), integrate(&s, &(&b * &a)));
            prop_assert_eq!(
                integrate(&s, &(&(&a + &c) * &b)),
                integrate(&s, &(&a * &b)) + integrate(&s, &(&c * &b))
            );
        }

        #[test]
        fn euler_class_is_multiplicative(
            ls in proptest::collection::vec((-4i64..=4, -4i64..=4), 0..4),
            split in 0usize..4,
        ) {
            let s = p2xp1();
            let lines: Vec<LineBundle> = ls.iter().map(|&(x, y)| LineBundle::new(vec![x, y])).collect();
            let cut = split.min(lines.len());
            let left = BundleSpec::new(lines[..cut].to_vec());
            let right = BundleSpec::new(lines[cut..].to_vec());
            prop_assert_eq!(
                euler_class(&s, &left.concat(&right)),
                &euler_class(&s, &left) * &euler_class(&s, &right)
            );
        }
    }
}
