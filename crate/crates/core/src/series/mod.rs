//! Truncated formal series: Laurent polynomials in hbar with cohomology
//! coefficients, and power series in the Novikov variables q_i.

mod laurent;
mod qseries;
mod scalar;

pub use laurent::{hl_invert, hl_mul, HbarLaurent};
pub use qseries::{default_hbar_floor, qs_mul, qs_substitute, QSeries, DEFAULT_MAX_DEGREE};
pub use scalar::{inverse_shift, qs_exp, ScalarQSeries};
