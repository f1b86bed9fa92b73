//! Torus localization on `M_{0,1}(P^r, d)` for `d <= 2`.
//!
//! Conventions: `h` restricts to `lambda_i` at the fixed point `p_i`, the
//! tangent space there has weights `lambda_i - lambda_j`, and a flag at
//! vertex `i` on an edge to `j` of degree `d` has weight
//! `omega = (lambda_i - lambda_j) / d`.

use num_traits::{One, Zero};
use rand::{seq::index::sample, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohom::BundleSpec;
use crate::error::{Error, Result};
use crate::exact::{factorial, powi, q, Q};
use crate::twist::{classify, Convexity};

/// Largest weight drawn by [`TorusWeights::random`].
pub const MAX_WEIGHT: usize = 97;

/// Pairwise distinct integer weights `w_0..w_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusWeights(Vec<i64>);

impl TorusWeights {
    pub fn new(w: Vec<i64>) -> Result<Self> {
        let mut sorted = w.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::WeightCollision { weights: w });
        }
        Ok(Self(w))
    }

    /// `r + 1` distinct weights from `1..=97`.
    pub fn random(r: u32, rng: &mut ChaCha8Rng) -> Self {
        let idx = sample(rng, MAX_WEIGHT, r as usize + 1);
        Self(idx.into_iter().map(|i| i as i64 + 1).collect())
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    fn at(&self, i: usize) -> Q {
        q(self.0[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub degree: u32,
}

/// A fixed-locus tree: `labels[v]` is the fixed point of vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedGraph {
    pub labels: Vec<usize>,
    pub edges: Vec<Edge>,
    pub marked: usize,
    pub automorphisms: u32,
}

impl FixedGraph {
    pub fn degree(&self) -> u32 {
        self.edges.iter().map(|e| e.degree).sum()
    }

    /// `(neighbour vertex, edge degree)` for every flag at `v`.
    fn flags(&self, v: usize) -> Vec<(usize, u32)> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.from == v {
                    Some((e.to, e.degree))
                } else if e.to == v {
                    Some((e.from, e.degree))
                } else {
                    None
                }
            })
            .collect()
    }

    /// `|Aut| * prod_e d_e`.
    pub fn weight_factor(&self) -> u32 {
        self.automorphisms * self.edges.iter().map(|e| e.degree).product::<u32>()
    }
}

/// All one-pointed fixed graphs of degree `d` in `P^r`.
pub fn enumerate_graphs(r: u32, d: u32) -> Result<Vec<FixedGraph>> {
    let pts = r as usize + 1;
    let mut out = Vec::new();
    match d {
        1 | 2 => {
            for i in 0..pts {
                for j in i + 1..pts {
                    for marked in [0, 1] {
                        out.push(FixedGraph {
                            labels: vec![i, j],
                            edges: vec![Edge { from: 0, to: 1, degree: d }],
                            marked,
                            automorphisms: 1,
                        });
                    }
                }
            }
        }
        _ => return Err(Error::DegreeOutOfScope { d }),
    }
    if d == 2 {
        for c in 0..pts {
            for j in (0..pts).filter(|&j| j != c) {
                for k in (j..pts).filter(|&k| k != c) {
                    let edges = vec![
                        Edge { from: 0, to: 1, degree: 1 },
                        Edge { from: 0, to: 2, degree: 1 },
                    ];
                    out.push(FixedGraph {
                        labels: vec![c, j, k],
                        edges: edges.clone(),
                        marked: 0,
                        automorphisms: if j == k { 2 } else { 1 },
                    });
                    let leaves: &[usize] = if j == k { &[1] } else { &[1, 2] };
                    for &leaf in leaves {
                        out.push(FixedGraph {
                            labels: vec![c, j, k],
                            edges: edges.clone(),
                            marked: leaf,
                            automorphisms: 1,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

struct Ctx<'a> {
    r: u32,
    w: &'a TorusWeights,
    lines: Vec<(i64, Convexity)>,
}

impl Ctx<'_> {
    fn collision(&self) -> Error {
        Error::WeightCollision {
            weights: self.w.values().to_vec(),
        }
    }

    fn inv(&self, x: Q) -> Result<Q> {
        if x.is_zero() {
            Err(self.collision())
        } else {
            Ok(x.recip())
        }
    }

    /// `(lambda_i (n - m) + lambda_j m) / d`: weight of the `m`-th section
    /// of a degree-`n` pullback along an edge of degree `d`.
    fn interpolate(&self, i: usize, j: usize, n: i64, m: i64, d: u32) -> Q {
        (self.w.at(i) * q(n - m) + self.w.at(j) * q(m)) / q(d as i64)
    }

    fn edge(&self, i: usize, j: usize, d: u32) -> Result<Q> {
        let (li, lj) = (self.w.at(i), self.w.at(j));
        let diff = &li - &lj;
        let sign = if d.is_multiple_of(2) { 1 } else { -1 };
        // moving part of H^0(f^* T P^r) modulo automorphisms of the cover
        let mut val = q(sign) * powi(&q(d as i64), 2 * d as i32)
            / (factorial(d) * factorial(d) * powi(&diff, 2 * d as i32));
        for k in (0..=self.r as usize).filter(|&k| k != i && k != j) {
            for a in 0..=d as i64 {
                let x = (&li * q(a) + &lj * q(d as i64 - a)) / q(d as i64) - self.w.at(k);
                val *= self.inv(x)?;
            }
        }
        // bundle sections (convex) or obstructions (concave) on the edge
        for &(l, kind) in &self.lines {
            let n = l * d as i64;
            let range = match kind {
                Convexity::Convex => 0..=n,
                Convexity::Concave => n + 1..=-1,
            };
            for m in range {
                val *= self.interpolate(i, j, n, m, d);
            }
        }
        Ok(val)
    }

    fn vertex(&self, g: &FixedGraph, v: usize, a: u32, b: u32) -> Result<Q> {
        let i = g.labels[v];
        let li = self.w.at(i);
        let flags = self.flags(g, v);
        let val = flags.len() as i32;
        let marked = g.marked == v;
        let mut out = Q::one();
        for j in (0..=self.r as usize).filter(|&j| j != i) {
            out *= powi(&(&li - self.w.at(j)), val - 1);
        }
        let psi_power = |psi: Q| powi(&psi, a as i32);
        out *= match (val, marked) {
            (1, false) => flags[0].clone(),
            (1, true) => psi_power(-flags[0].clone()),
            (2, false) => self.inv(&flags[0] + &flags[1])?,
            // M_{0,3} is a point, so psi vanishes there
            (2, true) => {
                if a > 0 {
                    return Ok(Q::zero());
                }
                self.inv(&flags[0] * &flags[1])?
            }
            _ => unreachable!("vertices have valence at most 2 in degree <= 2"),
        };
        if marked {
            out *= powi(&li, b as i32);
        }
        for &(l, kind) in &self.lines {
            let fibre = q(l) * &li;
            out *= match kind {
                Convexity::Convex => powi(&self.nonzero(fibre)?, 1 - val),
                Convexity::Concave => powi(&fibre, val - 1),
            };
        }
        Ok(out)
    }

    fn nonzero(&self, x: Q) -> Result<Q> {
        if x.is_zero() {
            Err(self.collision())
        } else {
            Ok(x)
        }
    }

    fn flags(&self, g: &FixedGraph, v: usize) -> Vec<Q> {
        let i = g.labels[v];
        g.flags(v)
            .into_iter()
            .map(|(u, d)| (self.w.at(i) - self.w.at(g.labels[u])) / q(d as i64))
            .collect()
    }
}

/// One graph's term: fixed-locus integrand over the equivariant Euler class
/// of the virtual normal bundle, divided by the automorphism factor.
pub fn graph_contribution(
    g: &FixedGraph,
    r: u32,
    bundle: &BundleSpec,
    a: u32,
    b: u32,
    weights: &TorusWeights,
) -> Result<Q> {
    let ctx = context(r, bundle, weights)?;
    contribution(&ctx, g, a, b)
}

fn context<'a>(r: u32, bundle: &BundleSpec, weights: &'a TorusWeights) -> Result<Ctx<'a>> {
    if weights.values().len() != r as usize + 1 {
        return Err(Error::InvalidGeometry(format!(
            "{} weights for P^{r}",
            weights.values().len()
        )));
    }
    let lines = bundle
        .lines
        .iter()
        .map(|line| {
            if line.l.len() != 1 {
                return Err(Error::Unsupported(
                    "localization runs on a single projective space".into(),
                ));
            }
            Ok((line.l[0], classify(&line.l)?))
        })
        .collect::<Result<_>>()?;
    Ok(Ctx { r, w: weights, lines })
}

fn contribution(ctx: &Ctx<'_>, g: &FixedGraph, a: u32, b: u32) -> Result<Q> {
    let mut val = Q::one();
    for e in &g.edges {
        val *= ctx.edge(g.labels[e.from], g.labels[e.to], e.degree)?;
    }
    for v in 0..g.labels.len() {
        val *= ctx.vertex(g, v, a, b)?;
    }
    Ok(val / q(g.weight_factor() as i64))
}

/// Degree of `psi^a ev^*(h^b) e(E_d)` minus the dimension of `M_{0,1}(P^r, d)`.
pub fn degree_excess(r: u32, d: u32, bundle: &BundleSpec, a: u32, b: u32) -> i64 {
    let dim = r as i64 + (r as i64 + 1) * d as i64 - 2;
    let rank: i64 = bundle
        .lines
        .iter()
        .map(|line| {
            let n = line.l.iter().sum::<i64>() * d as i64;
            if n >= 0 {
                n + 1
            } else {
                -n - 1
            }
        })
        .sum();
    a as i64 + b as i64 + rank - dim
}

/// `integral psi^a ev^*(h^b) e(E_d)` over `M_{0,1}(P^r, d)`; zero when the
/// integrand does not have top degree.
pub fn localized_invariant(
    r: u32,
    d: u32,
    bundle: &BundleSpec,
    a: u32,
    b: u32,
    weights: &TorusWeights,
) -> Result<Q> {
    let ctx = context(r, bundle, weights)?;
    if degree_excess(r, d, bundle, a, b) != 0 {
        enumerate_graphs(r, d)?;
        return Ok(Q::zero());
    }
    let mut total = Q::zero();
    for g in enumerate_graphs(r, d)? {
        total += contribution(&ctx, &g, a, b)?;
    }
    Ok(total)
}

/// A value with the weights that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRun {
    pub value: Q,
    pub weights_used: Vec<i64>,
    pub graphs_evaluated: usize,
    pub attempts: u32,
}

const MAX_ATTEMPTS: u32 = 64;

/// [`localized_invariant`] with weights drawn from `seed`, redrawn on collision.
pub fn localized_seeded(r: u32, d: u32, bundle: &BundleSpec, a: u32, b: u32, seed: u64) -> Result<OracleRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for attempt in 1..=MAX_ATTEMPTS {
        let w = TorusWeights::random(r, &mut rng);
        match localized_invariant(r, d, bundle, a, b, &w) {
            Ok(value) => {
                return Ok(OracleRun {
                    value,
                    weights_used: w.values().to_vec(),
                    graphs_evaluated: enumerate_graphs(r, d)?.len(),
                    attempts: attempt,
                })
            }
            Err(e @ Error::WeightCollision { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `N_d = (1/d) integral ev^*(h) e(E_d)` on `M_{0,1}(P^r, d)`.
pub fn oracle_n_d(r: u32, d: u32, bundle: &BundleSpec, seed: u64) -> Result<OracleRun> {
    let mut run = localized_seeded(r, d, bundle, 0, 1, seed)?;
    run.value /= q(d as i64);
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn w(v: &[i64]) -> TorusWeights {
        TorusWeights::new(v.to_vec()).unwrap()
    }

    #[test]
    fn graph_counts() {
        assert_eq!(enumerate_graphs(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_graphs(1, 2).unwrap().len(), 6);
        assert_eq!(enumerate_graphs(4, 1).unwrap().len(), 20);
        for g in enumerate_graphs(3, 2).unwrap() {
            assert_eq!(g.degree(), 2);
            if g.edges.len() == 1 {
                assert_eq!(g.weight_factor(), 2);
            }
        }
        assert_eq!(enumerate_graphs(2, 3), Err(Error::DegreeOutOfScope { d: 3 }));
    }

    #[test]
    fn line_class_in_p1() {
        let empty = BundleSpec::default();
        let weights = w(&[3, 11]);
        assert_eq!(localized_invariant(1, 1, &empty, 0, 1, &weights).unwrap(), q(1));
        assert_eq!(localized_invariant(1, 1, &empty, 1, 0, &weights).unwrap(), q(-2));
    }

    #[test]
    fn quintic_degree_one() {
        let quintic = BundleSpec::from_degrees(&[&[5]]);
        let run = oracle_n_d(4, 1, &quintic, 7).unwrap();
        assert_eq!(run.value, q(2875));
    }

    #[test]
    fn local_p1_degree_two() {
        let local = BundleSpec::from_degrees(&[&[-1], &[-1]]);
        let v = localized_invariant(1, 2, &local, 0, 1, &w(&[2, 9])).unwrap();
        assert_eq!(v / q(2), frac(1, 8));
    }

    #[test]
    fn collisions_reported() {
        assert!(matches!(
            TorusWeights::new(vec![1, 1]),
            Err(Error::WeightCollision { .. })
        ));
        // (w_0 + w_1) / 2 = w_2 makes a degree-2 edge denominator vanish
        let empty = BundleSpec::default();
        assert!(matches!(
            localized_invariant(2, 2, &empty, 4, 2, &w(&[1, 5, 3])),
            Err(Error::WeightCollision { .. })
        ));
    }
}
