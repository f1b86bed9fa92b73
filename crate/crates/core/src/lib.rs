//! Exact genus-zero Gromov-Witten invariants of complete intersections and
//! concave local geometries in products of projective spaces.
//!
//! The pipeline runs hypergeometric I-function assembly ([`twist`]), the
//! mirror transformation ([`mirror`]) and invariant extraction
//! ([`invariants`]); [`oracle`] recomputes low-degree numbers by torus
//! localization as an independent check.

pub mod cohom;
pub mod error;
pub mod invariants;
pub mod exact;
pub mod mirror;
pub mod oracle;
pub mod serial;
pub mod series;
pub mod twist;

pub use cohom::{euler_class, integrate, ring_mul, AmbientSpace, BundleSpec, CohClass, CurveClass, LineBundle};
pub use error::{Error, Result};
pub use exact::Q;
pub use invariants::{DescendantTable, SerrePair, SerreReport};
pub use mirror::{MirrorMap, NormalForm};
pub use oracle::{FixedGraph, TorusWeights};
pub use series::{HbarLaurent, QSeries, ScalarQSeries};
pub use twist::{Convexity, GeometrySpec, Theorem2Case, TheoremReport};
