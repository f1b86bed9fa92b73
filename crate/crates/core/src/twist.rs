//! Bundle data, the hypotheses of the quantum Lefschetz theorems, and the
//! hypergeometric I-function.
//!
//! `I^E(beta) = J(beta) * prod_j H^{L_j}_beta` where `J` is the ambient
//! J-function and, with `n = <c_1(L), beta>`,
//!
//! * convex `L`:  `H = prod_{k=0}^{n} (c_1(L) + k hbar)`
//! * concave `L`: `H = prod_{k=n+1}^{-1} (c_1(L) + k hbar)`.

use serde::{Deserialize, Serialize};

use crate::cohom::{AmbientSpace, BundleSpec, CohClass, CurveClass, LineBundle};
use crate::error::{Error, Result};
use crate::series::{hl_invert, HbarLaurent, QSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convexity {
    Convex,
    Concave,
}

/// Convex iff every component is `>= 0`; concave iff every component is
/// `<= -1`. Mixed signs, and negative degrees next to zeros, are refused.
pub fn classify(l: &[i64]) -> Result<Convexity> {
    if l.iter().all(|&x| x == 0) {
        return Err(Error::InvalidGeometry(format!(
            "line bundle {l:?} is trivial"
        )));
    }
    if l.iter().all(|&x| x >= 0) {
        Ok(Convexity::Convex)
    } else if l.iter().all(|&x| x <= -1) {
        Ok(Convexity::Concave)
    } else {
        Err(Error::Unclassifiable { l: l.to_vec() })
    }
}

/// An ambient product of projective spaces with a split bundle on it.
#[derive(Clone, Debug)]
pub struct GeometrySpec {
    ambient: AmbientSpace,
    bundle: BundleSpec,
    external_j: Option<QSeries>,
    kinds: Vec<Convexity>,
}

impl GeometrySpec {
    pub fn new(ambient: AmbientSpace, bundle: BundleSpec, external_j: Option<QSeries>) -> Result<Self> {
        let n = ambient.n_factors();
        let mut kinds = Vec::with_capacity(bundle.rank());
        for line in &bundle.lines {
            if line.l.len() != n {
                return Err(Error::InvalidGeometry(format!(
                    "line bundle {:?} has {} components, ambient has {n} factors",
                    line.l,
                    line.l.len()
                )));
            }
            kinds.push(classify(&line.l)?);
        }
        if n > 1 && kinds.contains(&Convexity::Concave) {
            return Err(Error::Unsupported(
                "concave summands are only supported on a single projective space".into(),
            ));
        }
        if let Some(j) = &external_j {
            if j.space() != &ambient {
                return Err(Error::AmbientMismatch);
            }
            if j.constant() != &HbarLaurent::one(&ambient) {
                return Err(Error::InvalidGeometry(
                    "external J-function must have constant term 1".into(),
                ));
            }
        }
        Ok(Self {
            ambient,
            bundle,
            external_j,
            kinds,
        })
    }

    /// P^{r_1} x ... with the given line bundle degrees.
    pub fn from_degrees(factors: Vec<u32>, lines: &[&[i64]]) -> Result<Self> {
        Self::new(AmbientSpace::new(factors)?, BundleSpec::from_degrees(lines), None)
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn bundle(&self) -> &BundleSpec {
        &self.bundle
    }

    pub fn external_j(&self) -> Option<&QSeries> {
        self.external_j.as_ref()
    }

    pub fn kinds(&self) -> &[Convexity] {
        &self.kinds
    }

    pub fn lines_of(&self, kind: Convexity) -> impl Iterator<Item = &LineBundle> {
        self.bundle
            .lines
            .iter()
            .zip(&self.kinds)
            .filter(move |(_, k)| **k == kind)
            .map(|(l, _)| l)
    }

    pub fn convex_rank(&self) -> usize {
        self.lines_of(Convexity::Convex).count()
    }

    pub fn concave_rank(&self) -> usize {
        self.lines_of(Convexity::Concave).count()
    }

    pub fn is_convex(&self) -> bool {
        self.concave_rank() == 0
    }

    /// Constant term of the I-function: the Euler class of the convex part.
    /// Concave summands contribute an empty product at beta = 0.
    pub fn constant_class(&self) -> CohClass {
        self.lines_of(Convexity::Convex)
            .fold(CohClass::one(&self.ambient), |acc, line| {
                &acc * &CohClass::linear(&self.ambient, &line.l)
            })
    }

    /// `(r_i + 1) - sum_convex l_i + sum_concave l_i` per factor.
    pub fn theorem1_combination(&self) -> Vec<i64> {
        self.combination(true)
    }

    /// `(r_i + 1) - sum_convex l_i` per factor.
    pub fn convex_index(&self) -> Vec<i64> {
        self.combination(false)
    }

    fn combination(&self, with_concave: bool) -> Vec<i64> {
        (0..self.ambient.n_factors())
            .map(|i| {
                let mut c = self.ambient.factors()[i] as i64 + 1;
                for (line, kind) in self.bundle.lines.iter().zip(&self.kinds) {
                    match kind {
                        Convexity::Convex => c -= line.l[i],
                        Convexity::Concave if with_concave => c += line.l[i],
                        Convexity::Concave => {}
                    }
                }
                c
            })
            .collect()
    }

    /// Dimension of the zero locus plus the fibre dimension of the concave part.
    pub fn target_dimension(&self) -> i64 {
        self.ambient.dim() as i64 - self.convex_rank() as i64 + self.concave_rank() as i64
    }
}

/// Which clause of the no-transformation theorem applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem2Case {
    ConcaveRank2plus,
    FanoIndex2plus,
    MixedSum,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// Per factor: is the first-Chern combination non-negative.
    pub theorem1_nonneg: Vec<bool>,
    pub theorem2_case: Theorem2Case,
    pub theorem1_combination: Vec<i64>,
    pub convex_index: Vec<i64>,
}

impl TheoremReport {
    pub fn theorem1_holds(&self) -> bool {
        self.theorem1_nonneg.iter().all(|&b| b)
    }
}

pub fn check_conditions(g: &GeometrySpec) -> TheoremReport {
    let combination = g.theorem1_combination();
    let index = g.convex_index();
    let nonneg: Vec<bool> = combination.iter().map(|&c| c >= 0).collect();
    let fano2 = index.iter().all(|&c| c >= 2);
    let concave2 = g.concave_rank() >= 2;
    let case = if !nonneg.iter().all(|&b| b) {
        Theorem2Case::None
    } else {
        match (g.convex_rank(), g.concave_rank()) {
            (_, 0) if fano2 => Theorem2Case::FanoIndex2plus,
            (0, _) if concave2 => Theorem2Case::ConcaveRank2plus,
            (c, _) if c > 0 && concave2 && fano2 => Theorem2Case::MixedSum,
            _ => Theorem2Case::None,
        }
    };
    TheoremReport {
        theorem1_nonneg: nonneg,
        theorem2_case: case,
        theorem1_combination: combination,
        convex_index: index,
    }
}

/// `prod_{k=from}^{to} (c + k hbar)`; the empty product is 1.
pub fn hbar_product(c: &CohClass, from: i64, to: i64) -> HbarLaurent {
    (from..=to).fold(HbarLaurent::one(c.space()), |acc, k| {
        &acc * &HbarLaurent::shifted(c, k)
    })
}

/// The hypergeometric factor H^L_beta.
pub fn h_factor(space: &AmbientSpace, line: &LineBundle, beta: &CurveClass) -> Result<HbarLaurent> {
    let c1 = CohClass::linear(space, &line.l);
    let n = line.pairing(beta);
    Ok(match classify(&line.l)? {
        Convexity::Convex => hbar_product(&c1, 0, n),
        Convexity::Concave => hbar_product(&c1, n + 1, -1),
    })
}

/// Closed-form J-function of the ambient space:
/// `J(beta) = prod_i prod_{k=1}^{d_i} (p_i + k hbar)^{-(r_i + 1)}`.
///
/// Every factor `(p_i + k hbar)^{-1}` is a finite expansion because `p_i`
/// is nilpotent, so the result is exact.
pub fn j_ambient(space: &AmbientSpace, max_degree: u32) -> QSeries {
    // powers[i][d] = prod_{k=1}^{d} (p_i + k hbar)^{-(r_i+1)}
    let powers: Vec<Vec<HbarLaurent>> = space
        .factors()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let p = CohClass::hyperplane(space, i);
            let mut out = vec![HbarLaurent::one(space)];
            for k in 1..=max_degree as i64 {
                let lo = -1 - r as i32;
                let inv = hl_invert(&HbarLaurent::shifted(&p, k), lo, -1)
                    .expect("p + k hbar has unit leading coefficient");
                let step = inv.pow(r + 1);
                let next = out.last().expect("non-empty") * &step;
                out.push(next);
            }
            out
        })
        .collect();
    let mut series = QSeries::one(space, max_degree);
    for beta in CurveClass::up_to(space.n_factors(), max_degree) {
        if beta.is_zero() {
            continue;
        }
        let term = beta
            .degrees()
            .iter()
            .enumerate()
            .fold(HbarLaurent::one(space), |acc, (i, &d)| &acc * &powers[i][d as usize]);
        series.set(beta, term).expect("beta within truncation");
    }
    series
}

/// The I-function, termwise `J(beta) * prod_j H^{L_j}_beta`.
pub fn i_function(g: &GeometrySpec, max_degree: u32) -> Result<QSeries> {
    let space = g.ambient();
    let j = match g.external_j() {
        Some(ext) => {
            if ext.max_degree() < max_degree {
                return Err(Error::TruncationMismatch {
                    left: max_degree,
                    right: ext.max_degree(),
                });
            }
            ext.truncate(max_degree)
        }
        None => j_ambient(space, max_degree),
    };
    let mut out = QSeries::zero(space, max_degree);
    for beta in CurveClass::up_to(space.n_factors(), max_degree) {
        let jb = j.coeff(&beta);
        if jb.is_zero() {
            continue;
        }
        let mut term = jb;
        for line in &g.bundle().lines {
            term = &term * &h_factor(space, line, &beta)?;
        }
        out.set(beta, term)?;
    }
    Ok(out)
}
